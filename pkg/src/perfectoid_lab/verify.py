"""Invariant suites.  Each suite returns a SuiteResult; run_all runs every one.

The sample sizes are parameters so the test suite can run the same checks at
full size while `verify all` stays quick.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from . import oracles
from .banach import NormSpec, is_powerbounded, norm_eval, spectral_radius
from .berkovich import (
    GridSpec,
    RationalDomainSpec,
    SeminormPoint,
    cover_check,
    domain_meet,
    eval_valuation,
    in_domain,
    sharp_compat,
)
from .cech import (
    ToricCover,
    build_cech,
    cohomology,
    cyclotomic_valuation,
    monomial_cells,
    persistence_bars,
    torus_perfectoid_complex,
)
from .char0 import UntiltSeries, cone_from_norm, lattice_norm, sharp
from .charp import TiltSeries
from .cones import Cone, ConstraintSet, HalfSpace, cone_closure
from .errors import DegenerateDenominator
from .exact import INF, NormValue, norm_max
from .fields import KElement, LaurentPoly
from .witt import (
    FpBase,
    TiltBase,
    WittVec,
    delta,
    ghost_identity_holds,
    is_distinguished,
    random_witt,
    theta,
)


@dataclass
class SuiteResult:
    module: str
    name: str
    ok: bool
    checked: int
    detail: str = ""
    failures: list = field(default_factory=list)

    def to_json(self):
        return {"module": self.module, "name": self.name, "ok": self.ok, "checked": self.checked,
                "detail": self.detail}


class _Tally:
    def __init__(self, module, name):
        self.module, self.name = module, name
        self.n = 0
        self.fails = []

    def check(self, cond, what=""):
        self.n += 1
        if not cond and len(self.fails) < 5:
            self.fails.append(what)
        return cond

    def result(self, detail=""):
        ok = not self.fails
        return SuiteResult(self.module, self.name, ok, self.n, detail or "; ".join(map(str, self.fails)),
                           list(self.fails))


# ---- random elements --------------------------------------------------------------

def rand_tilt(rng, p, depth=2, nvars=1, terms=3, qmax=2, prec=None):
    den = p**depth
    ts = []
    for _ in range(rng.randint(0, terms)):
        q = Fraction(rng.randrange(qmax * den), den)
        m = tuple(Fraction(rng.randrange(2 * den), den) for _ in range(nvars))
        ts.append((q, m, rng.randrange(1, p)))
    return TiltSeries.from_terms(p, ts, prec, depth, (False,) * nvars)


def rand_untilt(rng, p, depth=2, prec=3, nvars=1, terms=3, mmax=2, integral_m=False, cone=None):
    den = p**depth
    mden = 1 if integral_m else den
    ts = []
    for _ in range(rng.randint(0, terms)):
        m = tuple(Fraction(rng.randrange(mmax * mden + 1), mden) for _ in range(nvars))
        lo = 0 if cone is None else -cone.g(m)
        k0 = -((-lo * den).numerator // (lo * den).denominator)
        k1 = int(prec * den)
        if k0 >= k1:
            continue
        ts.append((Fraction(rng.randrange(k0, k1), den), m, rng.randrange(1, p)))
    return UntiltSeries.from_terms(p, ts, prec, depth, (False,) * nvars if cone is None else None, cone)


def rand_laurent(rng, p, terms=3, emax=3, qmax=2):
    """A nonzero polynomial in T with integer exponents and coefficients c p^q, q in p^-1 Z."""
    while True:
        d = {}
        for _ in range(rng.randint(1, terms)):
            m = (Fraction(rng.randrange(emax + 1)),)
            c = KElement.p_power(p, Fraction(rng.randrange(qmax * p + 1), p), rng.choice((1, -1, 2)))
            d[m] = d[m] + c if m in d else c
        f = LaurentPoly(p, 1, d)
        if f.terms:
            return f


def point_grid(p, grid=None):
    return (grid or GridSpec()).points(p)


def rand_point(rng, p):
    s = rng.choice([Fraction(rng.randrange(13), 4), INF])
    c = rng.choice([None, None, KElement.p_power(p, Fraction(rng.randrange(3 * p), p))])
    return SeminormPoint(p, (c,), (s,))


# ---- charp -----------------------------------------------------------------------

def charp_ring_axioms(p, rng, n=40):
    t = _Tally("charp", "ring axioms")
    for _ in range(n):
        prec = rng.choice([None, Fraction(3, 2), 2])
        a, b, c = (rand_tilt(rng, p, prec=prec) for _ in range(3))
        t.check((a + b) + c == a + (b + c), ("add assoc", a, b, c))
        t.check(a + b == b + a, ("add comm", a, b))
        t.check((a * b) * c == a * (b * c), ("mul assoc", a, b, c))
        t.check(a * b == b * a, ("mul comm", a, b))
        t.check(a * (b + c) == a * b + a * c, ("distrib", a, b, c))
    return t.result()


def charp_frobenius_iso(p, rng, n=40):
    t = _Tally("charp", "Frobenius is a ring isomorphism")
    for _ in range(n):
        a, b = rand_tilt(rng, p), rand_tilt(rng, p)
        t.check((a + b).frobenius() == a.frobenius() + b.frobenius(), ("add", a, b))
        t.check((a * b).frobenius() == a.frobenius() * b.frobenius(), ("mul", a, b))
        t.check(a.with_depth(a.depth + 1).frobenius_inverse().frobenius() == a, ("inverse", a))
    return t.result()


def charp_characteristic(p, rng, n=40):
    t = _Tally("charp", "characteristic p")
    for _ in range(n):
        a = rand_tilt(rng, p)
        s = TiltSeries.zero(p, a.prec, a.depth, a.laurent)
        for _ in range(p):
            s = s + a
        t.check(s.is_zero(), a)
    return t.result()


def charp_valuation(p, rng, n=40):
    t = _Tally("charp", "valuation is multiplicative")
    while t.n < n:
        a, b = rand_tilt(rng, p), rand_tilt(rng, p)
        if a.is_zero() or b.is_zero():
            continue
        t.check((a * b).valuation() == a.valuation() + b.valuation(), (a, b))
    return t.result()


# ---- witt -----------------------------------------------------------------------

def witt_ghost(p, rng=None, n_max=4):
    t = _Tally("witt", f"ghost identities n <= {n_max}")
    for n in range(n_max + 1):
        t.check(ghost_identity_holds(p, n), n)
    return t.result()


def witt_ring_axioms(p, rng, n=20, n_tilt=4):
    t = _Tally("witt", "Witt ring axioms")
    B = FpBase(p)
    for _ in range(n):
        x, y, z = (random_witt(B, 4, rng) for _ in range(3))
        t.check((x + y) + z == x + (y + z), ("add", x, y, z))
        t.check((x * y) * z == x * (y * z), ("mul", x, y, z))
        t.check(x * (y + z) == x * y + x * z, ("distrib", x, y, z))
        t.check(x + WittVec.zero(B, 4) == x, ("zero", x))
    TB = TiltBase(p, 3)
    for _ in range(n_tilt):
        x, y, z = (random_witt(TB, 3, rng) for _ in range(3))
        t.check((x + y) + z == x + (y + z), ("tilt add", x, y, z))
        t.check((x * y) * z == x * (y * z), ("tilt mul", x, y, z))
        t.check(x * (y + z) == x * y + x * z, ("tilt distrib", x, y, z))
    return t.result()


def _delta_pair(x, y):
    p = x.p
    N = x.length - 1
    xs, ys = x.truncate(N), y.truncate(N)
    B = x.base
    cross = WittVec.zero(B, N)
    for i in range(1, p):
        cross = cross + WittVec.from_int(B, comb(p, i) // p, N) * xs**i * ys ** (p - i)
    add_ok = delta(x + y) == delta(x) + delta(y) - cross
    dx, dy = delta(x), delta(y)
    mul_ok = delta(x * y) == xs**p * dy + ys**p * dx + WittVec.from_int(B, p, N) * dx * dy
    return add_ok, mul_ok


def witt_delta_axioms(p, rng, n=20, n_tilt=3):
    t = _Tally("witt", "delta-ring axioms")
    B = FpBase(p)
    for _ in range(n):
        a, m = _delta_pair(random_witt(B, 4, rng), random_witt(B, 4, rng))
        t.check(a, "delta(x+y)")
        t.check(m, "delta(xy)")
    TB = TiltBase(p, 4)
    for _ in range(n_tilt):
        a, m = _delta_pair(random_witt(TB, 3, rng), random_witt(TB, 3, rng))
        t.check(a, "tilt delta(x+y)")
        t.check(m, "tilt delta(xy)")
    return t.result()


def witt_delta_teichmuller(p, rng, n=50):
    t = _Tally("witt", "delta vanishes on Teichmuller elements")
    TB = TiltBase(p, 4)
    B = FpBase(p)
    for k in range(n):
        if k % 2:
            x = WittVec.teichmuller(B, rng.randrange(p), 4)
        else:
            x = WittVec.teichmuller(TB, TB.random(rng), 3)
        d = delta(x)
        t.check(all(x.base.is_zero(c) for c in d.coords), x)
    return t.result()


def witt_frobenius_lift(p, rng, n=20):
    t = _Tally("witt", "phi(x) = x^p mod p")
    for k in range(n):
        base = FpBase(p) if k % 2 else TiltBase(p, 3)
        x = random_witt(base, 3, rng)
        d = x.frobenius() - x**p
        t.check(base.is_zero(d.coords[0]), x)
    return t.result()


def witt_theta(p, rng, n=30, N=3):
    t = _Tally("witt", "theta is a ring map; theta o [.] = sharp")
    TB = TiltBase(p, 4)
    for _ in range(n):
        x, y = random_witt(TB, N, rng), random_witt(TB, N, rng)
        tx, ty = theta(x, N), theta(y, N)
        t.check(theta(x + y, N) == (tx + ty).truncate(N), ("add", x, y))
        t.check(theta(x * y, N) == (tx * ty).truncate(N), ("mul", x, y))
    for _ in range(n):
        a = TiltSeries.monomial(p, Fraction(rng.randrange(8), p), (), 1, None, 4)
        t.check(theta(WittVec.teichmuller(TB, a, N), N) == sharp(a, N).truncate(N), a)
    return t.result()


def witt_distinguished(p, rng=None, lengths=(2, 3, 4)):
    t = _Tally("witt", "[t] - p is distinguished")
    for N in lengths:
        TB = TiltBase(p, 2)
        x = WittVec.teichmuller(TB, TiltSeries.monomial(p, 1, (), 1, None, 2), N) - WittVec.from_int(TB, p, N)
        ok, _ = is_distinguished(x)
        t.check(ok, N)
        t.check(theta(x, N).is_zero(), ("theta", N))
    return t.result()


# ---- char0 ------------------------------------------------------------------------

def char0_eisenstein(p, rng, n=100):
    t = _Tally("char0", "Eisenstein-model equivalence")
    for k in range(n):
        M = rng.randint(0, 3)
        N = rng.randint(1, 4)
        E = oracles.Eisenstein(p, M, N)
        nv = rng.choice((0, 1))
        a = rand_untilt(rng, p, M, N, nv, terms=4)
        b = rand_untilt(rng, p, M, N, nv, terms=4)
        ea, eb = E.embed(a), E.embed(b)
        t.check(E.embed(a + b) == E.add(ea, eb), ("add", a, b))
        t.check(E.embed(a * b) == E.mul(ea, eb), ("mul", a, b))
        t.check(E.embed(-a) == E.neg(ea), ("neg", a))
    return t.result()


def char0_unique_digits(p, rng, n=100):
    t = _Tally("char0", "digit expansions are unique")
    for _ in range(n):
        M, N = rng.randint(0, 2), rng.randint(1, 3)
        E = oracles.Eisenstein(p, M, N)
        a = rand_untilt(rng, p, M, N, 0, terms=4)
        b = rng.choice([rand_untilt(rng, p, M, N, 0, terms=4), a + a - a, (a * 1) + 0])
        t.check((a == b) == (E.embed(a) == E.embed(b)), (a, b))
    return t.result()


def char0_sharp_multiplicative(p, rng, n=20):
    t = _Tally("char0", "sharp is multiplicative")
    for _ in range(n):
        a, b = rand_tilt(rng, p, depth=1, terms=2), rand_tilt(rng, p, depth=1, terms=2)
        N = rng.choice((1, 2, Fraction(3, 2)))
        a, b = a.with_depth(3), b.with_depth(3)
        lhs = sharp(a * b, N)
        rhs = sharp(a, N) * sharp(b, N)
        P = min(lhs.prec, rhs.prec)
        t.check(lhs.eq_at(rhs, P), (a, b, N))
    return t.result()


def _rand_constraints(rng, p):
    hs = []
    for _ in range(rng.randint(1, 2)):
        hs.append(HalfSpace((Fraction(rng.randrange(5), rng.choice((1, 2, 4))),), rng.random() < 0.3,
                            rng.choice((None, 0, 1))))
    lattice = (rng.choice((None, 0, 1)),)
    return ConstraintSet(1, tuple(hs), lattice, (True,), None)


def _closure_grid(p):
    return [(Fraction(a, 4), (Fraction(b, 4),)) for a in range(-2, 13) for b in range(0, 13)]


def char0_closures(p, rng, n=40):
    t = _Tally("char0", "closure operators")
    grid = _closure_grid(p)
    for _ in range(n):
        c = _rand_constraints(rng, p)
        cl = {k: cone_closure(c, k) for k in ("almost", "pic", "tic")}
        for k, v in cl.items():
            t.check(cone_closure(v, k) == v, ("idempotent", k, c))
        t.check(cone_closure(cl["pic"], "tic") == cl["tic"], ("tic o pic", c))
        bigger = ConstraintSet(1, c.halfspaces[:1], c.lattice, c.sign, c.ambient_exp)
        unital = c.is_unital(p)
        for q, m in grid:
            inside = c.contains(q, m, p)
            a, pi, ti = (cl[k].contains(q, m, p) for k in ("almost", "pic", "tic"))
            t.check(not inside or (pi and ti), ("extensive", c, q, m))
            t.check(not pi or ti, ("pic <= tic", c, q, m))
            if unital:
                t.check(not a or pi, ("almost <= pic", c, q, m))
            for k in ("almost", "pic", "tic"):
                if cl[k].contains(q, m, p):
                    t.check(cone_closure(bigger, k).contains(q, m, p), ("monotone", k, c, q, m))
    for cone in (Cone.disk(), Cone.annulus(0, Fraction(1, 2))):
        for k in ("almost", "pic", "tic"):
            t.check(cone_closure(cone, k) == cone, ("cone", k))
    return t.result()


def rand_cone(rng, nvars=1):
    ivs = []
    for _ in range(nvars):
        lo = Fraction(rng.randrange(5), rng.choice((1, 2, 4)))
        hi = rng.choice([INF, lo + Fraction(rng.randrange(5), 2)])
        ivs.append((lo, hi))
    return Cone(tuple(ivs), True)


def char0_dictionary(p, rng, n=30):
    t = _Tally("char0", "cone / norm dictionary")
    for _ in range(n):
        cone = rand_cone(rng, rng.choice((1, 2)))

        def norm(x, cone=cone):
            return lattice_norm(x, cone)

        t.check(cone_from_norm(norm, p, cone) == cone, ("round trip", cone))
        for _ in range(10):
            d = p * p
            m = tuple(Fraction(rng.randrange(-2 * d, 2 * d + 1), d) if lf else Fraction(rng.randrange(2 * d + 1), d)
                      for lf in cone.laurent)
            q = Fraction(rng.randrange(-2 * d, 2 * d + 1), d)
            x = UntiltSeries.monomial(p, q, m, prec=4, laurent=cone.laurent)
            t.check((norm(x) <= NormValue.one(p)) == cone.contains(q, m), ("unit ball", cone, q, m))
    for _ in range(n):
        cone = rand_cone(rng)
        x = rand_untilt(rng, p, 2, 3, 1, terms=3, cone=cone)
        if x.is_zero():
            continue
        t.check(lattice_norm(x.exact_pow(2), cone) == lattice_norm(x, cone) ** 2, ("power-mult", x))
    return t.result()


# ---- banach ----------------------------------------------------------------------

def _norms(rng):
    cone = rand_cone(rng)
    return [NormSpec.gauss(), NormSpec.lattice(cone), NormSpec.weighted()], cone


def banach_nonarchimedean(p, rng, n=30):
    t = _Tally("banach", "non-archimedean norm axioms")
    for _ in range(n):
        specs, cone = _norms(rng)
        for spec in specs:
            kw = {"cone": cone} if spec.kind == "lattice" else {}
            integral = spec.kind == "weighted"
            f = rand_untilt(rng, p, 1, 4, 1, integral_m=integral, **kw)
            g = rand_untilt(rng, p, 1, 4, 1, integral_m=integral, **kw)
            nf, ng = norm_eval(f, spec), norm_eval(g, spec)
            t.check(norm_eval(f + g, spec) <= norm_max((nf, ng), p), ("ultrametric", spec.kind, f, g))
            t.check(norm_eval(f.exact_mul(g), spec) <= nf * ng, ("submult", spec.kind, f, g))
    return t.result()


def banach_power_multiplicative(p, rng, n=30):
    t = _Tally("banach", "Gauss and lattice norms are power-multiplicative")
    for _ in range(n):
        cone = rand_cone(rng)
        for spec in (NormSpec.gauss(), NormSpec.lattice(cone)):
            kw = {"cone": cone} if spec.kind == "lattice" else {}
            f = rand_untilt(rng, p, 1, 3, 1, terms=2, **kw)
            if f.is_zero():
                continue
            k = rng.randint(1, 5)
            t.check(norm_eval(f.exact_pow(k), spec) == norm_eval(f, spec) ** k, (spec.kind, f, k))
    return t.result()


def banach_spectral(p, rng, n=20):
    t = _Tally("banach", "spectral radius intervals")
    for _ in range(n):
        f = rand_untilt(rng, p, 1, 3, 1, terms=2)
        r = spectral_radius(f, NormSpec.gauss(), 3)
        nf = norm_eval(f, NormSpec.gauss())
        t.check(r["lo"] <= nf <= r["hi"], ("contains", f))
        g = rand_untilt(rng, p, 1, 2, 1, terms=2, integral_m=True)
        prev = None
        for k in (1, 2, 4, 6):
            hi = spectral_radius(g, NormSpec.weighted(), k)["hi"]
            if prev is not None:
                t.check(hi <= prev, ("fekete", g, k))
            prev = hi
    return t.result()


def banach_max_modulus(p, rng, n=100):
    t = _Tally("banach", "Gauss point value equals the Gauss norm")
    G = SeminormPoint.gauss(p)
    for _ in range(n):
        f = rand_untilt(rng, p, 2, 3, 1, terms=4)
        t.check(NormValue(p, eval_valuation(f, G)) == norm_eval(f, NormSpec.gauss()), f)
    return t.result()


def banach_powerbounded_example(p, rng=None):
    t = _Tally("banach", "weighted example")
    T = UntiltSeries.monomial(p, 0, (1,), prec=2)
    W = NormSpec.weighted()
    for n in (1, 5, 17):
        t.check(norm_eval(T.exact_pow(n), W) == NormValue(p, 0, n + 1), n)
    res = is_powerbounded(T, W, n_max=p**3 + 1, m_budget=3)
    t.check(res["verdict"] == "no" and res["witness_n"] == p**3, res)
    return t.result()


# ---- berkovich -----------------------------------------------------------------------

def berkovich_multiplicative(p, rng, n=200):
    t = _Tally("berkovich", "point evaluation is multiplicative and ultrametric")
    for _ in range(n):
        f, g, x = rand_laurent(rng, p), rand_laurent(rng, p), rand_point(rng, p)
        vf, vg = eval_valuation(f, x), eval_valuation(g, x)
        t.check(eval_valuation(f * g, x) == vf + vg, ("mult", f, g, x))
        t.check(eval_valuation(f + g, x) >= min(vf, vg), ("ultra", f, g, x))
    return t.result()


def _gauss_valuation(f: LaurentPoly):
    return min(a.valuation() for a in f.terms.values())


def berkovich_bounded(p, rng, n=100):
    t = _Tally("berkovich", "|f(x)| <= Gauss norm")
    for _ in range(n):
        f, x = rand_laurent(rng, p), rand_point(rng, p)
        t.check(eval_valuation(f, x) >= _gauss_valuation(f), (f, x))
    return t.result()


def berkovich_max_modulus(p, rng, n=100):
    t = _Tally("berkovich", "maximum modulus over the grid")
    pts = point_grid(p)
    for _ in range(n):
        f = rand_laurent(rng, p)
        t.check(min(eval_valuation(f, x) for x in pts) == _gauss_valuation(f), f)
    return t.result()


def rand_domain(rng, p):
    def gen():
        kind = rng.randrange(3)
        e = Fraction(rng.randrange(2 * p + 1), p)
        if kind == 0:
            return LaurentPoly.monomial(p, KElement.from_rational(p, 1), (1,))
        if kind == 1:
            return LaurentPoly(p, 1, {(Fraction(1),): KElement.from_rational(p, 1),
                                       (Fraction(0),): -KElement.p_power(p, e)})
        return LaurentPoly.constant(p, KElement.p_power(p, e))

    gens = [gen() for _ in range(rng.randint(1, 2))]
    const = LaurentPoly.constant(p, KElement.p_power(p, Fraction(rng.randrange(2 * p), p)))
    gens.insert(rng.randrange(len(gens) + 1), const)
    return RationalDomainSpec(tuple(gens[:-1]), gens[-1])


def _member(V, x):
    try:
        return in_domain(x, V)[0]
    except DegenerateDenominator:
        return False


def berkovich_meet(p, rng, n=20):
    t = _Tally("berkovich", "domain_meet membership")
    pts = point_grid(p)
    for _ in range(n):
        V, W = rand_domain(rng, p), rand_domain(rng, p)
        M = domain_meet(V, W)
        for x in pts:
            t.check(_member(M, x) == (_member(V, x) and _member(W, x)), (str(V), str(W), str(x)))
    return t.result()


def berkovich_cover_modes(p, rng, n=30):
    t = _Tally("berkovich", "exact and sampled cover checks agree")
    for _ in range(n):
        ivs = []
        for _ in range(rng.randint(1, 3)):
            lo = Fraction(rng.randrange(5), 2)
            hi = rng.choice([INF, lo + Fraction(rng.randrange(4), 2)])
            ivs.append((lo, hi))
        ex = cover_check(ivs, "exact")["verdict"] == "pass"
        sm = cover_check(ivs, "sampled", p=p)["verdict"] == "sampled-pass"
        t.check(ex == sm, ivs)
    return t.result()


def berkovich_tilting(p, rng, n=50):
    t = _Tally("berkovich", "tilting identity on monomials")
    for _ in range(n):
        f = TiltSeries.monomial(p, Fraction(rng.randrange(9), p), (Fraction(rng.randrange(9), p),), 1, None, 2)
        s = rng.choice([Fraction(rng.randrange(13), 4), INF])
        c = rng.choice([None, KElement.p_power(p, Fraction(rng.randrange(9), p))])
        x = SeminormPoint(p, (c,), (s,))
        r = sharp_compat(f, x, 4)
        t.check(r["exact"] and r["equal"], (f, x))
    return t.result()


# ---- cech -----------------------------------------------------------------------------

def rand_cover(rng, k=None):
    k = k or rng.randint(1, 4)
    cands = sorted({Fraction(rng.randrange(1, 9), 4) for _ in range(k - 1)})
    return ToricCover.from_breakpoints([0] + cands)


def cech_dd(p, rng, n=10):
    t = _Tally("cech", "d o d = 0")
    for _ in range(n):
        cx = build_cech(rand_cover(rng), prec=2, depth=2, p=p)
        t.check(len(cx.cells[0]) == 1 or cx.dd_checked > 0, cx.describe())
    return t.result()


def cech_h0(p, rng, n=8):
    t = _Tally("cech", "H0 is the ambient cone, higher cohomology vanishes")
    for _ in range(n):
        cv = rand_cover(rng)
        rep = cohomology(build_cech(cv, prec=2, depth=2, p=p))
        t.check(rep.h0_cone == cv.ambient, cv)
        t.check(not rep.summands, (cv, rep.summands[:3]))
    return t.result()


def _bar_dims(bars, p, depth, prec):
    S = p**depth
    out = {}
    for deg, b, d in bars:
        lo = -((-b * S).numerator // (b * S).denominator)
        hi_val = min(d, Fraction(prec))
        hi = -((-hi_val * S).numerator // (hi_val * S).denominator)
        out[deg] = out.get(deg, 0) + max(0, hi - lo)
    return out


def cech_bruteforce(p, rng, n=4, depth=2, prec=2):
    t = _Tally("cech", "per-monomial persistence equals brute-force linear algebra")
    S = p**depth
    for _ in range(n):
        cx = build_cech(rand_cover(rng), prec=prec, depth=depth, p=p)
        for k in range(-2 * S, 2 * S + 1, max(1, S // 2)):
            cells = monomial_cells(cx, Fraction(k, S))
            want = oracles.brute_force_cech_dims(cells, p, depth, prec)
            got = _bar_dims(persistence_bars(cells, p), p, depth, prec)
            t.check(all(want.get(r, 0) == got.get(r, 0) for r in set(want) | set(got)), (k, want, got))
    # synthetic filtrations with torsion: the cells of a triangle with random thresholds
    for _ in range(3 * n):
        ts = {}
        for I in [(0, 1, 2), (0, 1), (0, 2), (1, 2), (0,), (1,), (2,)]:
            lo = max([ts[J] for J in ts if set(I) < set(J)], default=Fraction(0))
            ts[I] = lo + Fraction(rng.randrange(3), 2)
        cells = list(ts.items())
        want = oracles.brute_force_cech_dims(cells, p, depth, prec)
        got = _bar_dims(persistence_bars(cells, p), p, depth, prec)
        t.check(all(want.get(r, 0) == got.get(r, 0) for r in set(want) | set(got)), (ts, want, got))
    return t.result()


def cech_torus_laws(p, rng=None, n_max=4, B=2):
    t = _Tally("cech", "torus valuation table")
    rep = torus_perfectoid_complex(p, n_max, B)
    table = {i: v for i, v, *_ in rep.entries}
    for i, v, h0, kind, _ in rep.entries:
        integral = i.denominator == 1
        t.check((v == INF) == integral and (h0 == 1) == integral and (kind == "free") == integral, i)
        if i + 1 in table:
            t.check(table[i + 1] == v, ("periodic", i))
        if not integral and i / p in table:
            t.check(table[i / p] == v / p, ("1/p law", i))
    for n in range(n_max + 1):
        t.check(cyclotomic_valuation(p, n) == oracles.cyclotomic_oracle_valuation(p, n), ("oracle", n))
    return t.result()


def cech_refinement(p, rng, n=6):
    t = _Tally("cech", "refinement invariance")
    for _ in range(n):
        cv = rand_cover(rng, rng.randint(1, 3))
        bps = [c.intervals[0][0] for c in cv.pieces]
        extra = Fraction(rng.randrange(1, 12), 4)
        if extra in bps:
            continue
        finer = ToricCover.from_breakpoints(sorted(bps + [extra]))
        a = cohomology(build_cech(cv, prec=2, depth=2, p=p)).records()
        b = cohomology(build_cech(finer, prec=2, depth=2, p=p)).records()
        t.check(a == b, (bps, extra))
    return t.result()


# ---- cli ------------------------------------------------------------------------------

def cli_round_trip(p, rng, n=100):
    from .cli.parser import parse_element

    t = _Tally("cli", "parser round trip")
    for k in range(n):
        if k % 2:
            x = rand_untilt(rng, p, 2, 3, rng.choice((0, 1)), terms=4)
            y = parse_element(x.to_expr(), "untilt", p, prec=x.prec, depth=2, nvars=x.nvars)
        else:
            x = rand_tilt(rng, p, 2, rng.choice((0, 1)), terms=4)
            y = parse_element(x.to_expr(), "tilt", p, depth=2, nvars=x.nvars)
        t.check(x == y, x)
    return t.result()


def cli_reproducible(p, rng=None):
    from .cli.main import run_command

    t = _Tally("cli", "certificates are reproducible")
    cmds = [
        ["witt", "delta", "--p", str(p), "--len", "3", "--x", "p"],
        ["torus", "run", "--p", str(p), "--nmax", "2", "--bound", "1"],
        ["cech", "run", "--p", str(p), "--pieces", "0,1/2", "--prec", "2"],
        ["tilt", "sharp", "--p", str(p), "--x", "1+t", "--N", "2"],
        ["domain", "cover", "--p", str(p), "--interval", "0:1", "--interval", "1:inf", "--mode", "sampled"],
    ]
    for c in cmds:
        a = run_command(c + ["--json"])[1]
        b = run_command(c + ["--json"])[1]
        t.check(a == b, c)
    return t.result()


SUITES = [
    charp_ring_axioms, charp_frobenius_iso, charp_characteristic, charp_valuation,
    witt_ghost, witt_ring_axioms, witt_delta_axioms, witt_delta_teichmuller, witt_frobenius_lift,
    witt_theta, witt_distinguished,
    char0_eisenstein, char0_unique_digits, char0_sharp_multiplicative, char0_closures, char0_dictionary,
    banach_nonarchimedean, banach_power_multiplicative, banach_spectral, banach_max_modulus,
    banach_powerbounded_example,
    berkovich_multiplicative, berkovich_bounded, berkovich_max_modulus, berkovich_meet,
    berkovich_cover_modes, berkovich_tilting,
    cech_dd, cech_h0, cech_bruteforce, cech_torus_laws, cech_refinement,
    cli_round_trip, cli_reproducible,
]


def run_all(p=2, seed=0, suites=None):
    out = []
    for fn in suites or SUITES:
        rng = random.Random(f"{seed}:{fn.__name__}:{p}")
        out.append(fn(p, rng))
    return out
