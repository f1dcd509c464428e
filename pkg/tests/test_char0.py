from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from perfectoid_lab.char0 import (
    UntiltSeries, cone_from_norm, cone_tensor, lattice_norm, mod_omega_bridge, pth_root_mod_p, sharp,
    sharp_limit_check, untilt_ring_arith,
)
from perfectoid_lab.charp import TiltSeries
from perfectoid_lab.cli.parser import parse_element
from perfectoid_lab.cones import Cone, ConstraintSet, HalfSpace, cone_closure
from perfectoid_lab.errors import DepthExceeded, EmptyIntersection
from perfectoid_lab.exact import INF, NormValue
from perfectoid_lab.oracles import Eisenstein

from strategies import tilt_series, untilt_series


def u(src, p=2, prec=3):
    return parse_element(src, "untilt", p, prec=prec)


def t(src, p=2):
    return parse_element(src, "tilt", p)


# ---- carries ----

def test_carry_examples():
    a = u("2*p^(1/3)", 3)
    assert untilt_ring_arith(a, a, "add") == u("p^(1/3) + p^(4/3)", 3)
    assert u("1", 3, 4) + u("2", 3, 4) == u("p", 3, 4)


def test_square_against_eisenstein_model():
    b = u("1 + p^(1/2)")
    E = Eisenstein(2, 1, 3)
    assert E.embed(b * b) == E.mul(E.embed(b), E.embed(b))
    assert b * b == u("1 + p + p^(3/2)")


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_arithmetic_matches_eisenstein_model(data):
    p = data.draw(st.sampled_from([2, 3]))
    M, N = data.draw(st.integers(0, 3)), data.draw(st.integers(1, 4))
    a = data.draw(untilt_series(p, depth=M, prec=N, max_terms=4))
    b = data.draw(untilt_series(p, depth=M, prec=N, max_terms=4))
    E = Eisenstein(p, M, N)
    assert E.embed(a + b) == E.add(E.embed(a), E.embed(b))
    assert E.embed(a * b) == E.mul(E.embed(a), E.embed(b))
    assert E.embed(a - b) == E.add(E.embed(a), E.neg(E.embed(b)))
    # digit expansions are unique
    assert (a == b) == (E.embed(a) == E.embed(b))


# ---- sharp ----

def test_sharp_examples():
    assert sharp(t("t"), 2) == u("p", prec=2)
    assert sharp(t("t + t"), 2).is_zero()
    E = Eisenstein(2, 2, 2)
    y = sharp(t("1 + t").with_depth(2), 2)
    x = E.embed(u("1 + p^(1/4)", prec=2))
    fourth = E.mul(E.mul(x, x), E.mul(x, x))
    assert E.embed(y) == fourth
    assert y == u("1 + p + p^(3/2)", prec=2)


def test_sharp_needs_depth():
    with pytest.raises(DepthExceeded):
        sharp(t("1 + t"), 2)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_sharp_is_multiplicative(data):
    p = data.draw(st.sampled_from([2, 3]))
    a = data.draw(tilt_series(p, depth=1, max_terms=2)).with_depth(3)
    b = data.draw(tilt_series(p, depth=1, max_terms=2)).with_depth(3)
    N = data.draw(st.sampled_from([1, 2, Fraction(3, 2)]))
    lhs, rhs = sharp(a * b, N), sharp(a, N) * sharp(b, N)
    assert lhs.eq_at(rhs, min(lhs.prec, rhs.prec))


def test_sharp_limit_examples():
    r = sharp_limit_check(t("t"), t("t"), 3)
    vals = [v for v, _ in r["stage_valuations"]]
    assert vals == sorted(vals) and vals[0] == 2
    r = sharp_limit_check(t("t"), TiltSeries.zero(2), 3)
    assert r["stabilization_stage"] == 0 and r["target"] == u("p", prec=3)
    r = sharp_limit_check(t("t", 3), t("t^(2)", 3), 2)
    assert r["stage_matches"][-1] and r["stage_matches"][-2]


# ---- the bridge and p-th roots ----

def test_reduce_example():
    assert mod_omega_bridge(u("p + p^(1/2)")) == TiltSeries.from_terms(2, [(Fraction(1, 2), (), 1)], prec=1)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_reduce_is_a_ring_map(data):
    p = data.draw(st.sampled_from([2, 3]))
    a, b = data.draw(untilt_series(p, nvars=1)), data.draw(untilt_series(p, nvars=1))
    ra, rb = mod_omega_bridge(a), mod_omega_bridge(b)
    assert mod_omega_bridge(a + b).eq_at(ra + rb, 1)
    assert mod_omega_bridge(a * b).eq_at(ra * rb, 1)


def test_pth_root_examples():
    assert pth_root_mod_p(u("0")).is_zero()
    r = pth_root_mod_p(u("p^(1/2)"))
    assert r.eq_at(u("p^(1/4)", prec=1), Fraction(1, 2))
    assert r.exact_pow(2).eq_at(u("p^(1/2)"), 1)
    r = pth_root_mod_p(u("1 + p^(1/2)"))
    assert r.exact_pow(2) == u("1 + p^(1/2) + p^(5/4)", prec=r.exact_pow(2).prec)
    assert r.exact_pow(2).eq_at(u("1 + p^(1/2)"), 1)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_pth_root_raised_to_p(data):
    p = data.draw(st.sampled_from([2, 3]))
    x = data.draw(untilt_series(p, nvars=1))
    assert pth_root_mod_p(x).exact_pow(p).eq_at(x, 1)


# ---- closures ----

def test_almost_closure_of_the_maximal_ideal():
    c = ConstraintSet(1, (HalfSpace((0,), strict=True),))
    a = cone_closure(c, "almost")
    assert not c.contains(0, (0,), 2) and a.contains(0, (0,), 2)


def test_integral_cone_is_totally_closed():
    c = ConstraintSet(1, (HalfSpace((1,)),), sign=(True,), ambient_exp=0)
    assert cone_closure(c, "tic") == c


def test_staircase_closure():
    c = ConstraintSet(1, (HalfSpace((Fraction(1, 2),), round_exp=0),), lattice=(0,), sign=(True,))
    tic = cone_closure(c, "tic")
    assert not c.contains(Fraction(1, 2), (1,), 2)
    assert tic.contains(Fraction(1, 2), (1,), 2)
    assert tic.halfspaces == (HalfSpace((Fraction(1, 2),)),)


def test_closures_fix_cones():
    for k in ("almost", "pic", "tic"):
        assert cone_closure(Cone.disk(), k) == Cone.disk()


# ---- norms and cones ----

def test_lattice_norm_examples():
    x = u("p^(1/2)*T")
    assert lattice_norm(x, Cone.disk()) == NormValue(2, Fraction(1, 2))
    assert lattice_norm(x, Cone.disk(Fraction(1, 2))) == NormValue(2, 1)
    assert lattice_norm(u("0"), Cone.disk()).is_zero()


def test_dictionary_round_trip():
    for cone in (Cone.disk(), Cone.annulus(0, Fraction(1, 2)), Cone(((1, INF), (0, 2)))):
        assert cone_from_norm(lambda x, c=cone: lattice_norm(x, c), 2, cone) == cone


def test_lattice_norm_is_power_multiplicative():
    cone = Cone.annulus(Fraction(1, 4), 1)
    x = parse_element("p^(1/2)*T + T^(-1) + 1", "untilt", 2, prec=3)
    assert lattice_norm(x.exact_pow(3), cone) == lattice_norm(x, cone) ** 3


def test_cone_tensor_examples():
    s = Fraction(1, 2)
    assert cone_tensor(Cone.disk(s), Cone.annulus(0, s), Cone.disk()) == Cone.annulus(s, s)
    U = Cone.annulus(0, s)
    assert cone_tensor(U, U, U) == U
    with pytest.raises(EmptyIntersection):
        cone_tensor(Cone.disk(1), Cone.annulus(0, s), Cone.disk())
