from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from perfectoid_lab.banach import (
    BanachAlgebra, NormSpec, filtration_member, is_powerbounded, norm_eval, spectral_radius, uniformize,
)
from perfectoid_lab.berkovich import SeminormPoint
from perfectoid_lab.cli.parser import parse_element
from perfectoid_lab.cones import Cone
from perfectoid_lab.errors import NotRepresentable
from perfectoid_lab.exact import NormValue, norm_max

from strategies import untilt_series

W = NormSpec.weighted()
G = NormSpec.gauss()


def u(src, p=2, prec=4):
    return parse_element(src, "untilt", p, prec=prec, nvars=1)


def test_norm_examples():
    assert norm_eval(u("T^(5)"), W) == NormValue(2, 0, 6)
    assert norm_eval(u("p*T + p^(1/2)"), G) == NormValue(2, Fraction(1, 2))
    assert norm_eval(u("p*T"), W) == NormValue(2, 1, 2)


@pytest.mark.parametrize("n", [0, 1, 2, 7, 20])
def test_weighted_powers_of_t(n):
    assert norm_eval(u("T").exact_pow(n), W) == NormValue(2, 0, n + 1)


def test_weighted_norm_is_not_power_multiplicative():
    assert not W.power_multiplicative
    assert norm_eval(u("T").exact_pow(2), W) != norm_eval(u("T"), W) ** 2


def test_spectral_radius_examples():
    r = spectral_radius(u("p*T"), G, 1)
    assert r["lo"] == r["hi"] == NormValue(2, 1)
    r = spectral_radius(u("0"), G, 1)
    assert r["lo"].is_zero() and r["hi"].is_zero()


def test_weighted_spectral_interval():
    r = spectral_radius(u("T"), W, 1000, [SeminormPoint.gauss(2)])
    assert r["lo"] == NormValue.one(2)
    assert r["hi"] == NormValue(2, 0, 1001, 1000)
    assert r["lo"] <= NormValue.one(2) <= r["hi"]
    assert r["hi"] < NormValue(2, 0, Fraction(101, 100))


def test_fekete_monotonicity():
    his = [spectral_radius(u("T + p*T^(2)"), W, k)["hi"] for k in (1, 2, 3, 5, 8)]
    assert all(b <= a for a, b in zip(his, his[1:]))


def test_powerbounded_examples():
    r = is_powerbounded(u("T"), W, 64, 2)
    assert r["verdict"] == "no"
    k = r["witness_n"]
    assert norm_eval(u("T").exact_pow(k), W) == NormValue(2, 0, k + 1) > r["bound"]
    assert is_powerbounded(u("T"), G)["verdict"] == "yes"
    r = is_powerbounded(parse_element("p^(-1)*T", "untilt", 2, prec=4), NormSpec.gauss(Cone.annulus(0, 0)), 64, 2)
    assert r["verdict"] == "no" and r["witness_norm"] > r["bound"]


def test_filtration_examples():
    assert filtration_member(u("T"), Fraction(101, 100), W)["verdict"] == "yes"
    r = filtration_member(u("T"), 1, W)
    assert r["verdict"] == "no" and r["witness_sequence"][:3] == [2, 3, 4]
    assert filtration_member(u("p"), NormValue(2, 1), G)["verdict"] == "yes"


def test_completed_mode_is_interval_based():
    r = filtration_member(u("T"), 2, W, n_max=16, mode="completed")
    assert r["verdict"] == "yes"


def test_uniformize():
    g = BanachAlgebra(G)
    assert uniformize(g) == g
    a = uniformize(BanachAlgebra(W))
    assert a.norm.kind == "gauss" and a.completion_changed
    assert uniformize(a) == a
    with pytest.raises(NotRepresentable):
        uniformize(BanachAlgebra(W), strict=True)


def test_uniformize_never_increases_norms():
    for src in ("T^(3)", "p*T + T^(2)", "1 + T"):
        f = u(src)
        assert norm_eval(f, uniformize(BanachAlgebra(W)).norm) <= norm_eval(f, W)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_norm_axioms(data):
    p = data.draw(st.sampled_from([2, 3]))
    f = data.draw(untilt_series(p, nvars=1, prec=4, m_depth=0))
    g = data.draw(untilt_series(p, nvars=1, prec=4, m_depth=0))
    for n in (G, NormSpec.lattice(Cone.annulus(0, 1)), W):
        assert norm_eval(f.exact_mul(g), n) <= norm_eval(f, n) * norm_eval(g, n)
        assert norm_eval(f + g, n) <= norm_max([norm_eval(f, n), norm_eval(g, n)], p)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_gauss_norm_is_power_multiplicative(data):
    p = data.draw(st.sampled_from([2, 3]))
    f = data.draw(untilt_series(p, nvars=1, prec=4))
    k = data.draw(st.integers(1, 5))
    for n in (G, NormSpec.lattice(Cone.annulus(Fraction(1, 2), 2))):
        assert norm_eval(f.exact_pow(k), n) == norm_eval(f, n) ** k
