import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from perfectoid_lab.cech import (
    ToricCover, almost_exactness, build_cech, cohomology, cyclotomic_valuation, monomial_cells, persistence_bars,
    torus_perfectoid_complex,
)
from perfectoid_lab.char0 import UntiltSeries
from perfectoid_lab.cones import Cone
from perfectoid_lab.errors import DomainMismatch
from perfectoid_lab.exact import INF
from perfectoid_lab.oracles import brute_force_cech_dims, cyclotomic_oracle_valuation

HALF = Fraction(1, 2)


def bar_dims(bars, p, depth, prec):
    """Dimension over F_p of each bar's digits on the p^-depth grid below prec."""
    S = p**depth
    out = {}
    for deg, b, d in bars:
        lo = -((-b * S) // 1)
        top = min(d, Fraction(prec))
        hi = -((-top * S) // 1)
        out[deg] = out.get(deg, 0) + max(0, int(hi - lo))
    return out


def test_cover_must_be_exact():
    with pytest.raises(DomainMismatch):
        ToricCover(Cone.disk(), (Cone.disk(1), Cone.annulus(0, HALF)))
    with pytest.raises(DomainMismatch):
        ToricCover.from_breakpoints([HALF, 1])


def test_single_piece_complex():
    cx = build_cech(ToricCover.from_breakpoints([0]))
    assert list(cx.cells) == [0]
    assert cx.cells[0][0][1] == Cone.disk()


def test_two_piece_complex():
    cx = build_cech(ToricCover.from_breakpoints([0, HALF]))
    assert [c for _, c in cx.cells[0]] == [Cone.annulus(0, HALF), Cone.disk(HALF)]
    assert cx.cells[1] == [((0, 1), Cone.annulus(HALF, HALF))]
    assert cx.dd_checked > 0


def test_dd_vanishes_on_random_cochains():
    p, S = 2, 4
    cx = build_cech(ToricCover.from_breakpoints([0, HALF, 1]), prec=2, depth=2, p=p)
    rng = random.Random(7)
    for _ in range(50):
        elem = {}
        for I, cone in cx.cells[0]:
            x = UntiltSeries.zero(p, 2, 2, (True,), cone)
            for _ in range(3):
                m = Fraction(rng.randrange(-2 * S, 2 * S + 1), S)
                t = -cone.g((m,))
                if t == -INF or t == INF:
                    continue
                q = Fraction(-((-t * S) // 1), S) + Fraction(rng.randrange(3), S)
                if q < 2:
                    x = x + UntiltSeries.monomial(p, q, (m,), prec=2, depth=2, cone=cone)
            elem[I] = x
        dd = cx.apply_d(1, cx.apply_d(0, elem))
        assert all(v.is_zero() for v in dd.values())


@pytest.mark.parametrize("bps", [[0], [0, HALF], [0, HALF, 1], [0, Fraction(1, 4), HALF, 2]])
@pytest.mark.parametrize("p", [2, 3])
def test_disk_covers_are_acyclic(bps, p):
    cover = ToricCover.from_breakpoints(bps)
    rep = cohomology(build_cech(cover, prec=2, depth=2, p=p))
    assert rep.h0_cone == Cone.disk()
    assert rep.summands == []
    assert almost_exactness(rep)["verdict"] == "exact"


def test_persistence_matches_linear_algebra_on_three_pieces():
    p, depth, prec = 2, 2, 2
    cx = build_cech(ToricCover.from_breakpoints([0, HALF, 1]), prec=prec, depth=depth, p=p)
    S = p**depth
    for k in range(-3 * S, 3 * S + 1):
        cells = monomial_cells(cx, Fraction(k, S))
        want = brute_force_cech_dims(cells, p, depth, prec)
        got = bar_dims(persistence_bars(cells, p), p, depth, prec)
        assert {r: v for r, v in want.items() if v} == {r: v for r, v in got.items() if v}


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]), st.lists(st.integers(0, 4), min_size=7, max_size=7))
def test_persistence_with_torsion(p, steps):
    """Filtrations of a triangle whose thresholds leave genuine torsion bars."""
    order = [(0, 1, 2), (0, 1), (0, 2), (1, 2), (0,), (1,), (2,)]
    ts = {}
    for I, step in zip(order, steps):
        lo = max([ts[J] for J in ts if set(I) < set(J)], default=Fraction(0))
        ts[I] = lo + Fraction(step, 2)
    cells = list(ts.items())
    want = brute_force_cech_dims(cells, p, 1, 2)
    got = bar_dims(persistence_bars(cells, p), p, 1, 2)
    assert {r: v for r, v in want.items() if v} == {r: v for r, v in got.items() if v}


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(1, 8), max_size=2, unique=True), st.integers(1, 11))
def test_refinement_invariance(cuts, extra):
    bps = [Fraction(0)] + sorted(Fraction(c, 4) for c in cuts)
    e = Fraction(extra, 4)
    if e in bps:
        return
    a = cohomology(build_cech(ToricCover.from_breakpoints(bps), prec=2, depth=2)).records()
    b = cohomology(build_cech(ToricCover.from_breakpoints(sorted(bps + [e])), prec=2, depth=2)).records()
    assert a == b


def test_annulus_cover_keeps_its_ambient():
    amb = Cone.annulus(0, 1)
    cover = ToricCover.from_breakpoints([0, HALF], ambient=amb)
    rep = cohomology(build_cech(cover, prec=2, depth=2))
    assert rep.h0_cone == amb and rep.summands == []


# ---- the torus ----

def test_torus_examples():
    rep = torus_perfectoid_complex(3, 2, 2)
    table = {i: (v, h0, kind) for i, v, h0, kind, _ in rep.entries}
    for i in (0, 1, -1, 2, -2):
        assert table[Fraction(i)] == (INF, 1, "free")
    assert table[Fraction(1, 3)][0] == HALF
    rep = torus_perfectoid_complex(2, 2, 1)
    assert {i: v for i, v, *_ in rep.entries}[Fraction(1, 4)] == HALF


@pytest.mark.parametrize("p", [2, 3, 5])
def test_cyclotomic_valuations_match_the_oracle(p):
    for n in range(5):
        assert cyclotomic_valuation(p, n) == cyclotomic_oracle_valuation(p, n)


def test_torus_almost_exactness():
    for p in (2, 3):
        rep = torus_perfectoid_complex(p, 3, 2)
        r = almost_exactness(rep, integral=False)
        assert r["verdict"] == "killed-by"
        assert r["exponent"] == Fraction(1, p - 1) if p > 2 else r["exponent"] == 1
        assert r["omega_exponent"] == r["exponent"] * p
        assert almost_exactness(rep)["verdict"] == "not-almost-exact"


def test_torus_laws():
    rep = torus_perfectoid_complex(3, 3, 2)
    table = {i: v for i, v, *_ in rep.entries}
    for i, v in table.items():
        if i + 1 in table:
            assert table[i + 1] == v
        if i.denominator > 1 and i / 3 in table:
            assert table[i / 3] == v / 3
