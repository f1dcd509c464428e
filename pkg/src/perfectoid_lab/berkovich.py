"""Disk and annulus points of Berkovich spectra, rational domains, and covers.

A point is a center c_j and a log-radius s_j per variable (radius p^-s_j, with
s_j = INF a classical point).  |f(x)| is the Gauss norm of f re-expanded
around the center, which is a bounded multiplicative seminorm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .charp import TiltSeries
from .char0 import UntiltSeries, sharp
from .cones import Cone
from .errors import (
    DegenerateDenominator,
    DomainMismatch,
    EmptyIntersection,
    NoRootCertificate,
    NoRootsAvailable,
    PoleAtPoint,
)
from .exact import INF, NormValue, frac_str, rat_json
from .fields import KElement, LaurentPoly, taylor_shift


def _rat_or_inf(s):
    return INF if s is None or s == INF else Fraction(s)


@dataclass(frozen=True)
class SeminormPoint:
    """centers: K elements (or constant tilt series on the tilt side), None meaning 0."""

    p: int
    centers: tuple
    s: tuple
    side: str = "untilt"

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(_rat_or_inf(x) for x in self.s))
        cs = []
        for c, s in zip(self.centers, self.s):
            if isinstance(c, UntiltSeries):
                c = KElement.from_series(c)
            elif isinstance(c, (int, Fraction)):
                c = KElement.from_rational(self.p, c)
            if c is not None and c.is_zero():
                c = None
            # a disk containing 0 is the disk around 0
            if c is not None and s != INF and c.valuation() >= s:
                c = None
            if s != INF and s < 0:
                raise DomainMismatch("log-radius must be >= 0")
            cs.append(c)
        object.__setattr__(self, "centers", tuple(cs))

    @classmethod
    def gauss(cls, p, nvars=1):
        return cls(p, (None,) * nvars, (0,) * nvars)

    @classmethod
    def disk(cls, p, center, s):
        return cls(p, (center,), (s,))

    @property
    def nvars(self):
        return len(self.s)

    def abs_coord_valuations(self):
        """w_j = -log_p |T_j(x)| = min(v(c_j), s_j)."""
        return tuple(s if c is None else min(c.valuation(), s) for c, s in zip(self.centers, self.s))

    def describe(self):
        out = []
        for c, s in zip(self.centers, self.s):
            out.append({"center": "0" if c is None else repr(c) if not isinstance(c, TiltSeries) else c.to_expr(),
                        "s": rat_json(s)})
        return out

    def __str__(self):
        parts = []
        for c, s in zip(self.centers, self.s):
            cs = "0" if c is None else (c.to_expr() if isinstance(c, TiltSeries) else repr(c))
            parts.append(f"(center {cs}, s={frac_str(s)})")
        return " x ".join(parts)


def _as_poly(f, p=None):
    if isinstance(f, LaurentPoly):
        return f
    if isinstance(f, UntiltSeries):
        return LaurentPoly.from_series(f)
    if isinstance(f, TiltSeries):
        return LaurentPoly.from_tilt(f)
    if isinstance(f, RootCertified):
        return f.poly
    raise DomainMismatch(f"cannot evaluate {type(f).__name__}")


def _one_like(coef):
    if isinstance(coef, KElement):
        return KElement.from_rational(coef.p, 1)
    return TiltSeries.one(coef.p, None, coef.depth)


def eval_valuation(f, x: SeminormPoint):
    """-log_p |f(x)| as an exact rational, INF when f vanishes at x."""
    f = _as_poly(f)
    if not f.terms:
        return INF
    n = max(f.nvars, x.nvars)
    terms = {m + (Fraction(0),) * (n - len(m)): a for m, a in f.terms.items()}
    w = x.abs_coord_valuations()
    if len(terms) == 1:
        (m, a), = terms.items()
        v = a.valuation()
        for e, wj in zip(m, w):
            if e == 0:
                continue
            if wj == INF:
                if e < 0:
                    raise PoleAtPoint("negative power of a vanishing coordinate")
                return INF
            v += e * wj
        return v
    shift = [Fraction(0)] * n
    for j, c in enumerate(x.centers):
        if c is None:
            continue
        low = min(m[j] for m in terms)
        if low < 0:
            shift[j] = -low
    if any(shift):
        terms = {tuple(e + s for e, s in zip(m, shift)): a for m, a in terms.items()}
    for j, c in enumerate(x.centers):
        if c is not None:
            terms = taylor_shift(terms, j, c, _one_like(c))
    best = INF
    for m, a in terms.items():
        v = a.valuation()
        for e, s in zip(m, x.s):
            if e == 0:
                continue
            if s == INF:
                if e < 0:
                    raise PoleAtPoint("negative power of a vanishing coordinate")
                v = INF
                break
            v += e * s
        best = min(best, v)
    return best - sum(s * wj for s, wj in zip(shift, w) if s)


def eval_point(f, x: SeminormPoint) -> NormValue:
    return NormValue(x.p, eval_valuation(f, x))


# ---- rational domains ----------------------------------------------------------

@dataclass
class RationalDomainSpec:
    numerators: tuple
    denominator: object
    perfected: bool = False
    unit_witness: tuple | None = None

    def __post_init__(self):
        self.numerators = tuple(_as_poly(f) for f in self.numerators)
        self.denominator = _as_poly(self.denominator)

    @property
    def p(self):
        return self.denominator.p

    def unit_ideal_status(self):
        """Checks sum h_j f_j = 1 when a witness was supplied; 'unverified' otherwise."""
        if self.unit_witness is None:
            return "unverified"
        fs = list(self.numerators) + [self.denominator]
        total = LaurentPoly(self.p, 1, {})
        for h, f in zip(self.unit_witness, fs):
            total = total + _as_poly(h) * f
        one = LaurentPoly.constant(self.p, 1, total.nvars or 1)
        return "verified" if (total - one).terms == {} else "failed"

    def __str__(self):
        nums = ", ".join(repr(f) for f in self.numerators)
        return f"V({nums}; {self.denominator!r})"


def in_domain(x: SeminormPoint, V: RationalDomainSpec):
    """(member, margin) with margin = min_j v(f_j(x)) - v(f_i(x))."""
    vi = eval_valuation(V.denominator, x)
    vs = [eval_valuation(f, x) for f in V.numerators]
    if vi == INF:
        if all(v == INF for v in vs):
            raise DegenerateDenominator("all generators vanish at the point")
        return False, -INF
    margin = min((v - vi for v in vs), default=INF)
    return margin >= 0, margin


def domain_meet(V: RationalDomainSpec, W: RationalDomainSpec) -> RationalDomainSpec:
    """Intersection by the pairs formula: numerators f_k g_l, denominator f_i g_j."""
    fs = list(V.numerators) + [V.denominator]
    gs = list(W.numerators) + [W.denominator]
    nums = []
    for a, f in enumerate(fs):
        for b, g in enumerate(gs):
            if a == len(fs) - 1 and b == len(gs) - 1:
                continue
            nums.append(f * g)
    return RationalDomainSpec(tuple(nums), V.denominator * W.denominator, V.perfected or W.perfected)


# ---- covers ---------------------------------------------------------------------

def _monomial_data(f: LaurentPoly):
    if not f.is_monomial():
        return None
    (m, a), = f.terms.items()
    if len(m) != 1:
        return None
    return a.valuation(), m[0]


def domain_interval(V):
    """The set of w = -log|T(x)| in [0, INF] where a monomial one-variable domain holds.

    Returns (lo, hi, contains_inf) with hi = INF when unbounded, or None when empty.
    Also accepts a Cone or an explicit (lo, hi) pair.
    """
    if isinstance(V, Cone):
        (lo, hi), = V.intervals
        return lo, hi, hi == INF
    if isinstance(V, tuple):
        lo, hi = Fraction(V[0]), _rat_or_inf(V[1])
        return lo, hi, hi == INF
    den = _monomial_data(V.denominator)
    nums = [_monomial_data(f) for f in V.numerators]
    if den is None or any(n is None for n in nums):
        raise DomainMismatch("exact mode needs monomial one-variable domains")
    lo, hi = Fraction(0), INF
    vi, mi = den
    for vj, mj in nums:
        k = mj - mi
        r = vi - vj
        if k > 0:
            if r != INF and r != -INF:
                lo = max(lo, r / k)
            elif r == INF:
                return None
        elif k < 0:
            if r == -INF:
                return None
            if r != INF:
                hi = min(hi, r / k)
        else:
            if r > 0:
                return None
    if lo > hi:
        return None
    try:
        inf_ok = in_domain(SeminormPoint(V.p, (None,), (INF,)), V)[0]
    except (DegenerateDenominator, PoleAtPoint):
        inf_ok = False
    return lo, hi, inf_ok and hi == INF


@dataclass
class GridSpec:
    """Centers 0 and p^e for e in center_exps (default 0, 1/p, 1); s in (1/s_den) Z up to s_max, plus INF."""

    center_exps: tuple | None = None
    s_den: int = 4
    s_max: Fraction = Fraction(3)
    include_inf: bool = True

    def exps(self, p):
        if self.center_exps is None:
            return (Fraction(0), Fraction(1, p), Fraction(1))
        return tuple(Fraction(e) for e in self.center_exps)

    def points(self, p):
        ss = [Fraction(k, self.s_den) for k in range(int(self.s_max * self.s_den) + 1)]
        if self.include_inf:
            ss.append(INF)
        out = []
        for s in ss:
            out.append(SeminormPoint(p, (None,), (s,)))
            for e in self.exps(p):
                c = KElement.p_power(p, e)
                pt = SeminormPoint(p, (c,), (s,))
                if pt.centers[0] is not None:
                    out.append(pt)
        return out

    def describe(self):
        return {
            "center_exponents": [rat_json(e) for e in (self.center_exps or ("1/p",))] if self.center_exps
            else "default",
            "s_denominator": self.s_den,
            "s_max": rat_json(self.s_max),
            "include_inf": self.include_inf,
        }


def cover_check(domains, mode: str = "exact", grid: GridSpec | None = None, p: int | None = None) -> dict:
    """Do the domains cover the closed unit disk?  Exact on intervals, or sampled on a grid."""
    if mode == "exact":
        ivs = []
        for V in domains:
            iv = domain_interval(V)
            if iv is not None:
                ivs.append(iv)
        ivs.sort(key=lambda t: t[0])
        cur = Fraction(0)
        covered_to_inf = False
        witness = None
        for lo, hi, _ in ivs:
            if lo > cur:
                witness = (cur + lo) / 2 if cur < lo else cur
                if cur == 0 and not any(l2 <= 0 for l2, _, _ in ivs):
                    witness = lo / 2
                break
            if hi == INF:
                covered_to_inf = True
                break
            # closed intervals, so touching endpoints leave no gap
            cur = max(cur, hi)
        else:
            if not covered_to_inf:
                witness = cur + 1
        if witness is None and covered_to_inf and not any(t[2] for t in ivs):
            witness = INF
        if witness is not None:
            return {"mode": "exact", "verdict": "fail", "witness_s": witness,
                    "intervals": [(lo, hi) for lo, hi, _ in ivs]}
        return {"mode": "exact", "verdict": "pass", "intervals": [(lo, hi) for lo, hi, _ in ivs]}
    if mode == "sampled":
        grid = grid or GridSpec()
        if p is None:
            p = next(V.p for V in domains if isinstance(V, RationalDomainSpec))
        pts = grid.points(p)
        for x in pts:
            if not any(_member_any(V, x) for V in domains):
                return {"mode": "sampled", "verdict": "fail", "witness": x, "grid": grid.describe()}
        return {"mode": "sampled", "verdict": "sampled-pass", "grid": grid.describe(), "points": len(pts)}
    raise ValueError(f"unknown mode {mode!r}")


def _member_any(V, x):
    if isinstance(V, (Cone, tuple)):
        lo, hi, inf_ok = domain_interval(V)
        w = x.abs_coord_valuations()[0]
        if w == INF:
            return inf_ok
        return lo <= w and (hi == INF or w <= hi)
    try:
        return in_domain(x, V)[0]
    except (DegenerateDenominator, PoleAtPoint):
        return False


# ---- perfected domains --------------------------------------------------------

def _root_monomial(f: LaurentPoly, n: int):
    """The chosen p^n-th root of a monomial +-p^q T^m, or None."""
    if not f.is_monomial():
        return None
    (m, a), = f.terms.items()
    q = a.teichmuller_monomial_exponent()
    sign = 1
    if q is None:
        q = (-a).teichmuller_monomial_exponent()
        sign = -1
        if q is None or f.p == 2:
            return None
    r = f.p**n
    return LaurentPoly(f.p, f.nvars, {tuple(x / r for x in m): KElement.p_power(f.p, q / r, sign)})


@dataclass
class PerfectedDomain:
    spec: RationalDomainSpec
    generators: list
    roots: list
    cone: Cone | None = None
    checked_points: int = 0
    membership_unchanged: bool = True

    def presentation(self):
        """Generators f_i^(1/p^m) T_j^(1/p^m) - f_j^(1/p^m) of the perfected ideal, m = 0, 1."""
        return [str(g) for g in self.generators]


def perfected_domain(V: RationalDomainSpec, grid: GridSpec | None = None) -> PerfectedDomain:
    fs = list(V.numerators) + [V.denominator]
    roots = []
    for f in fs:
        r = _root_monomial(f, 1)
        if r is None:
            raise NoRootsAvailable(f"no chosen p-power roots for {f!r}")
        roots.append(r)
    gens = []
    for m in (0, 1):
        fi = V.denominator if m == 0 else roots[-1]
        for j, fj in enumerate(V.numerators if m == 0 else roots[:-1]):
            gens.append(f"({fi!r})*T{j + 1}^(1/{V.p}^{m}) - ({fj!r})")
    cone = None
    try:
        iv = domain_interval(V)
    except DomainMismatch:
        iv = False
    if iv is None:
        raise EmptyIntersection("the domain is empty")
    if iv:
        lo, hi, _ = iv
        cone = Cone(((lo, hi),), True)
    rootV = RationalDomainSpec(tuple(roots[:-1]), roots[-1], True)
    grid = grid or GridSpec()
    pts = [x for x in grid.points(V.p) if x.nvars == 1]
    same = True
    for x in pts:
        if _member_any(V, x) != _member_any(rootV, x):
            same = False
    return PerfectedDomain(V, gens, roots, cone, len(pts), same)


# ---- tilting points ---------------------------------------------------------------

def tilt_point(x: SeminormPoint) -> SeminormPoint:
    """x^flat = x o sharp: centers p^q become t^q, radii unchanged."""
    cs = []
    for c in x.centers:
        if c is None:
            cs.append(None)
            continue
        q = c.teichmuller_monomial_exponent()
        if q is None:
            raise DomainMismatch("center is not a Teichmuller monomial p^q")
        cs.append(TiltSeries.monomial(x.p, q))
    return SeminormPoint(x.p, tuple(cs), x.s, side="tilt")


def sharp_compat(f: TiltSeries, x: SeminormPoint, N=4) -> dict:
    """Compare |f(x^flat)| (tilt side) with |f^sharp(x)| (untilt side)."""
    xf = tilt_point(x)
    lhs = eval_valuation(f, xf)
    # the untilt side is only known below its precision
    if lhs != INF:
        N = max(Fraction(N), math.floor(lhs) + 1)
    if not f.is_zero():
        N = max(Fraction(N), math.floor(f.valuation()) + 1)
    fs = sharp(f, N)
    rhs = eval_valuation(fs, x)
    # a nonzero monomial vanishes at x only because a coordinate does
    exact = rhs < fs.prec or (rhs == INF and fs.is_monomial())
    return {
        "tilt_side": lhs,
        "untilt_side": rhs,
        "exact": exact,
        "equal": lhs == rhs if exact else None,
        "tilted_point": xf,
    }


# ---- approximation lemma -------------------------------------------------------------

@dataclass
class RootCertified:
    """An element together with the reason it has compatible p-power roots."""

    poly: LaurentPoly
    source: object = "monomials"


def _certify(g):
    if isinstance(g, RootCertified):
        return g
    poly = _as_poly(g)
    for m, a in poly.terms.items():
        if _root_monomial(LaurentPoly(poly.p, poly.nvars, {m: a}), 1) is None:
            raise NoRootCertificate(f"term {a!r}*T^{m} has no chosen p-power roots")
    return RootCertified(poly, "monomials")


def approx_verify(f, g, c, eps, points, v_omega=None) -> dict:
    """Per-point margin v((f-g)(x)) - [(1-eps) v(w) + min(v(f(x)), c v(w))]; pass iff all >= 0."""
    g = _certify(g)
    f = _as_poly(f)
    p = f.p
    vw = Fraction(1, p) if v_omega is None else Fraction(v_omega)
    c, eps = Fraction(c), Fraction(eps)
    diff = f - g.poly
    rows = []
    for x in points:
        vd = eval_valuation(diff, x)
        vf = eval_valuation(f, x)
        bound = (1 - eps) * vw + min(vf, c * vw)
        margin = INF if vd == INF else vd - bound
        rows.append({"point": x, "lhs_valuation": vd, "bound": bound, "margin": margin})
    return {"pass": all(r["margin"] >= 0 for r in rows), "rows": rows, "certificate": g.source}


def candidate_sharp_lift(f: UntiltSeries, c, v_omega=None) -> RootCertified:
    """The sharp-image of the digits of f below valuation (c + 1) v(w), via the tilt."""
    p = f.p
    vw = Fraction(1, p) if v_omega is None else Fraction(v_omega)
    level = (Fraction(c) + 1) * vw
    S = f.scale
    d = {}
    for (q, m), dig in f.raw_digits().items():
        if q < 0:
            raise DomainMismatch("candidate lift needs digits with q >= 0")
        if Fraction(q, S) < level:
            d[(q, m)] = dig
    flat = TiltSeries(p, d, None, f.depth, f.laurent)
    g = sharp(flat, level)
    return RootCertified(LaurentPoly.from_series(g), flat)
