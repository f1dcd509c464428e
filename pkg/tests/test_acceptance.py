"""One check per acceptance criterion; each prints a PASS/FAIL line."""

import random
import time
from fractions import Fraction

import pytest
import sympy

from perfectoid_lab import verify
from perfectoid_lab.banach import NormSpec, is_powerbounded, norm_eval, spectral_radius
from perfectoid_lab.berkovich import GridSpec, SeminormPoint, approx_verify
from perfectoid_lab.cech import ToricCover, build_cech, cohomology, monomial_cells, persistence_bars, \
    torus_perfectoid_complex
from perfectoid_lab.char0 import UntiltSeries, cone_from_norm, lattice_norm, mod_omega_bridge, pth_root_mod_p
from perfectoid_lab.cli.main import run_command
from perfectoid_lab.cli.parser import parse_element
from perfectoid_lab.cones import Cone
from perfectoid_lab.errors import CeilingExceeded
from perfectoid_lab.exact import INF, NormValue
from perfectoid_lab.fields import KElement, LaurentPoly
from perfectoid_lab.oracles import Eisenstein, brute_force_cech_dims, teichmuller_digits, witt_int_value
from perfectoid_lab.witt import FpBase, TiltBase, WittVec, delta, ghost_identity_holds, is_distinguished, \
    teich_expansion, theta
from perfectoid_lab.charp import TiltSeries


def suite_ok(r):
    return r.ok, f"{r.checked} checks" + ("" if r.ok else f"; first failure {r.failures[0]!r:.200}")


def c_delta():
    bad = []
    for p in (2, 3, 5):
        d = delta(WittVec.from_int(FpBase(p), p, 4))
        if witt_int_value(teich_expansion(d), p, d.length) != (1 - p ** (p - 1)) % p**3:
            bad.append(p)
    r = verify.witt_delta_teichmuller(3, random.Random(1), n=50)
    return not bad and r.ok, f"delta(p) mismatches at {bad}; teichmuller {r.checked} checks"


def c_ghost():
    bad = []
    for p in (2, 3, 5):
        for n in range(5):
            try:
                if not ghost_identity_holds(p, n):
                    bad.append((p, n, "false"))
            except CeilingExceeded as e:
                bad.append((p, n, f"E_CEILING: {e}"))
    return not bad, f"failing (p, n): {bad}" if bad else "all 15 levels"


def c_eisenstein():
    oks = []
    for p in (2, 3):
        oks.append(verify.char0_eisenstein(p, random.Random(p), n=500))
    return all(r.ok for r in oks), f"{sum(r.checked for r in oks)} checks over 1000 pairs"


def c_theta():
    r = verify.witt_theta(2, random.Random(0), n=100, N=3)
    ok = r.ok
    for p in (2, 3):
        TB = TiltBase(p, 2)
        t = TiltSeries.monomial(p, 1, (), 1, None, 2)
        x = WittVec.teichmuller(TB, t, 3) - WittVec.from_int(TB, p, 3)
        ok = ok and theta(x, 3).is_zero() and is_distinguished(x)[0]
    return ok, f"{r.checked} ring-map checks; [t] - p is distinguished with theta = 0"


def c_bridge():
    rng = random.Random(5)
    fails = 0
    for k in range(200):
        p = (2, 3)[k % 2]
        a = verify.rand_untilt(rng, p, 2, 3, 1, terms=4)
        b = verify.rand_untilt(rng, p, 2, 3, 1, terms=4)
        ra, rb = mod_omega_bridge(a), mod_omega_bridge(b)
        ok = mod_omega_bridge(a + b).eq_at(ra + rb, 1) and mod_omega_bridge(a * b).eq_at(ra * rb, 1)
        # oracle: a and the lift of its reduction agree in Z[x]/(x^S - p) mod p
        E = Eisenstein(p, 2, 1)
        ok = ok and E.embed(a) == E.embed(mod_omega_bridge(ra, "lift"))
        x = verify.rand_untilt(rng, p, 2, 3, 1, terms=4)
        y = pth_root_mod_p(x)
        E = Eisenstein(p, 3, 1)
        ok = ok and y.exact_pow(p).eq_at(x, 1) and E.embed(y.exact_pow(p)) == E.embed(x)
        fails += not ok
    return fails == 0, f"{fails} failures over 200 pairs and 200 roots"


def c_dictionary():
    rng = random.Random(11)
    cones = [Cone.disk(), Cone.disk(1), Cone.annulus(0, 1), Cone.annulus(Fraction(1, 2), Fraction(1, 2)),
             Cone.disk(Fraction(3, 2))] + [verify.rand_cone(rng, rng.choice((1, 2))) for _ in range(40)]
    bad = [c for c in cones if cone_from_norm(lambda x, c=c: lattice_norm(x, c), 2, c) != c]
    checked = fails = 0
    while checked < 100:
        cone = verify.rand_cone(rng)
        x = verify.rand_untilt(rng, 2, 2, 3, 1, terms=3, cone=cone)
        if x.is_zero():
            continue
        checked += 1
        fails += lattice_norm(x.exact_pow(2), cone) != lattice_norm(x, cone) ** 2
    return not bad and not fails, f"{len(cones)} cones round-trip, {len(bad)} bad; {fails}/100 power failures"


def c_weighted():
    T = parse_element("T", "untilt", 2, prec=2, nvars=1)
    W = NormSpec.weighted()
    ok = all(norm_eval(T.exact_pow(n), W) == NormValue(2, 0, n + 1) for n in range(1, 40))
    pb = is_powerbounded(T, W, 64, 2)
    ok = ok and pb["verdict"] == "no" and pb["witness_n"] is not None
    r = spectral_radius(T, W, 1000, [SeminormPoint.gauss(2)])
    one = NormValue.one(2)
    ok = ok and r["lo"] == one and r["hi"] == NormValue(2, 0, 1001, 1000)
    ok = ok and r["lo"] <= one <= r["hi"] < NormValue(2, 0, Fraction(101, 100))
    return ok, f"witness n = {pb['witness_n']}; interval [{r['lo']!r}, {r['hi']!r}]"


def c_max_modulus():
    return suite_ok(verify.berkovich_max_modulus(2, random.Random(3), n=100))


def c_tilting():
    return suite_ok(verify.berkovich_tilting(2, random.Random(4), n=50))


def c_meet():
    return suite_ok(verify.berkovich_meet(2, random.Random(6), n=20))


def c_tate():
    notes = []
    ok = True
    for p in (2, 3):
        for bps in ([0, Fraction(1, 2)], [0, Fraction(1, 2), 1]):
            t0 = time.perf_counter()
            cx = build_cech(ToricCover.from_breakpoints(bps), prec=2, depth=3, p=p)
            rep = cohomology(cx)
            dt = time.perf_counter() - t0
            ok = ok and rep.h0_cone == Cone.disk() and not rep.summands and dt < 10
            S = p**3
            for k in range(-2 * S, 2 * S + 1, max(1, S // 4)):
                cells = monomial_cells(cx, Fraction(k, S))
                want = brute_force_cech_dims(cells, p, 3, 2)
                got = verify._bar_dims(persistence_bars(cells, p), p, 3, 2)
                ok = ok and all(want.get(r, 0) == got.get(r, 0) for r in set(want) | set(got))
            notes.append(f"p={p} pieces={len(bps)} {dt:.2f}s")
    return ok, ", ".join(notes)


def c_torus():
    ok = True
    for p in (2, 3):
        rep = torus_perfectoid_complex(p, 4, 2)
        for i, v, h0, kind, _ in rep.entries:
            if i.denominator == 1:
                ok = ok and v == INF and h0 == 1 and kind == "free"
                continue
            n = 0
            d = i.denominator
            while d > 1:
                d //= p
                n += 1
            want = Fraction(1, p ** (n - 1) * (p - 1))
            # the valuation of 1 - zeta_{p^n} from the cyclotomic polynomial itself
            x = sympy.Symbol("x")
            phi = sympy.Poly(sympy.cyclotomic_poly(p**n, x), x)
            vp = sympy.multiplicity(p, int(phi.eval(1)))
            ok = ok and v == want == Fraction(vp, phi.degree()) and kind != "free"
    return ok, "p in {2, 3}, n_max = 4, B = 2"


def c_approx():
    P = 2
    f = parse_element("p^(1/2)*T", "untilt", P, nvars=1)
    triv = approx_verify(f, f, 2, 0, GridSpec().points(P))
    ok = triv["pass"] and all(r["margin"] == INF for r in triv["rows"])
    g = LaurentPoly(P, 1, {(Fraction(1),): KElement.from_rational(P, 1), (Fraction(0),): KElement.from_rational(P, -2)})
    eps = Fraction(1, 10)
    neg = approx_verify(g, parse_element("T", "untilt", P, nvars=1), 2, eps, [SeminormPoint.disk(P, 2, 3)])
    m = neg["rows"][0]["margin"]
    return ok and not neg["pass"] and m < 0, f"negative margin {m}"


def c_verify_all():
    notes = []
    ok = True
    for p in (2, 3):
        code, _ = run_command(["verify", "all", "--p", str(p)], env={})
        res = verify.run_all(p)
        failed = [r.name for r in res if not r.ok]
        ok = ok and code == 0 and not failed
        notes.append(f"p={p}: {len(res) - len(failed)}/{len(res)}")
    return ok, ", ".join(notes)


CRITERIA = [
    ("delta of p and of Teichmuller lifts", c_delta),
    ("ghost identities n <= 4, p in {2,3,5}", c_ghost),
    ("untilt arithmetic vs Eisenstein model", c_eisenstein),
    ("theta ring map, [t] - p distinguished", c_theta),
    ("mod-omega bridge and p-th roots", c_bridge),
    ("cone / lattice norm dictionary", c_dictionary),
    ("weighted norm example", c_weighted),
    ("maximum modulus", c_max_modulus),
    ("tilting identity", c_tilting),
    ("rational domain meet", c_meet),
    ("Tate acyclicity instances", c_tate),
    ("perfectoid torus", c_torus),
    ("approximation verifier", c_approx),
    ("verify all", c_verify_all),
]


@pytest.mark.parametrize("name,check", CRITERIA, ids=[n for n, _ in CRITERIA])
def test_criterion(name, check, capsys):
    t0 = time.perf_counter()
    ok, detail = check()
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'}  {name}  ({time.perf_counter() - t0:.1f}s)  {detail}")
    assert ok, detail
