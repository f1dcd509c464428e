import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from perfectoid_lab.cli.parser import parse_element
from perfectoid_lab.errors import CeilingExceeded, DomainMismatch
from perfectoid_lab.oracles import teichmuller_digits, witt_int_value
from perfectoid_lab.witt import (
    FpBase, TiltBase, WittVec, delta, ghost_identity_holds, is_distinguished, random_witt,
    teich_expansion, theta, univ_witt_polys, witt_arith, witt_frobenius, witt_verschiebung,
)


def fp_vec(p, n, N):
    return WittVec.from_int(FpBase(p), n, N)


def as_int(v):
    return witt_int_value(teich_expansion(v), v.p, v.length)


# ---- universal polynomials ----

def test_low_degree_polynomials():
    U = univ_witt_polys(2, 1)
    X0, X1, Y0, Y1 = sympy.symbols("X_0 X_1 Y_0 Y_1")
    assert sympy.expand(sympy.sympify(U.pretty("S", 0)) - (X0 + Y0)) == 0
    assert sympy.expand(sympy.sympify(U.pretty("S", 1)) - (X1 + Y1 - X0 * Y0)) == 0
    assert sympy.expand(sympy.sympify(U.pretty("P", 1)) - (X0**2 * Y1 + Y0**2 * X1 + 2 * X1 * Y1)) == 0


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (5, 1)])
def test_ghost_components_with_sympy(p, n):
    """Cross-check the packed engine by re-expanding its output in sympy."""
    U = univ_witt_polys(p, n)
    X = sympy.symbols(f"X_0:{n + 1}")
    Y = sympy.symbols(f"Y_0:{n + 1}")

    def ghost(zs, k):
        return sum(p**i * zs[i] ** (p ** (k - i)) for i in range(k + 1))

    S = [sympy.sympify(U.pretty("S", k)) for k in range(n + 1)]
    P = [sympy.sympify(U.pretty("P", k)) for k in range(n + 1)]
    for k in range(n + 1):
        assert sympy.expand(ghost(S, k) - ghost(X, k) - ghost(Y, k)) == 0
        assert sympy.expand(ghost(P, k) - ghost(X, k) * ghost(Y, k)) == 0


@pytest.mark.parametrize("p,n", [(2, 4), (3, 3), (5, 2)])
def test_ghost_identities(p, n):
    assert ghost_identity_holds(p, n)


def test_level_ceiling_is_reported():
    with pytest.raises(CeilingExceeded):
        univ_witt_polys(2, 6)


def test_term_budget_is_reported():
    with pytest.raises(CeilingExceeded):
        ghost_identity_holds(7, 2, term_budget=50)


# ---- arithmetic over F_p ----

def test_one_plus_one_in_w2():
    x = WittVec(FpBase(2), [1, 0])
    assert (x + x).coords == (0, 1)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_integers_round_trip(p):
    N = 4 if p < 5 else 3
    for n in range(-20, 40):
        assert as_int(fp_vec(p, n, N)) == n % p**N
        assert teich_expansion(fp_vec(p, n, N)) == teichmuller_digits(n, p, N)


@pytest.mark.parametrize("p", [2, 3])
def test_arithmetic_matches_integers(p):
    rng = random.Random(p)
    N = 4
    for _ in range(30):
        a, b = rng.randrange(p**N), rng.randrange(p**N)
        x, y = fp_vec(p, a, N), fp_vec(p, b, N)
        assert as_int(witt_arith(x, y, "add")) == (a + b) % p**N
        assert as_int(witt_arith(x, y, "mul")) == a * b % p**N
        assert as_int(witt_arith(x, None, "neg")) == -a % p**N


def test_teichmuller_is_multiplicative():
    B = TiltBase(2, 2)
    a, b = parse_element("t^(1/2)", "tilt", 2), parse_element("1 + t", "tilt", 2)
    ta, tb = WittVec.teichmuller(B, a, 3), WittVec.teichmuller(B, b, 3)
    assert ta * tb == WittVec.teichmuller(B, a * b, 3)
    assert ta + WittVec.zero(B, 3) == ta


def test_frobenius_examples():
    B = TiltBase(2, 2)
    a = parse_element("t^(1/2) + T", "tilt", 2)
    assert witt_frobenius(WittVec.teichmuller(B, a, 3)) == WittVec.teichmuller(B, a.frobenius(), 3)
    x = fp_vec(3, 17, 4)
    assert witt_frobenius(x) == x
    assert witt_frobenius(witt_verschiebung(fp_vec(2, 1, 3))).coords == (0, 1, 0)


# ---- delta ----

@pytest.mark.parametrize("p", [2, 3, 5])
def test_delta_of_p(p):
    d = delta(fp_vec(p, p, 4))
    assert as_int(d) == (1 - p ** (p - 1)) % p**3


def test_delta_of_two_is_minus_one():
    assert delta(fp_vec(2, 2, 4)).coords == (1, 1, 1)


def test_delta_of_teichmuller_vanishes():
    B = TiltBase(3, 3)
    a = parse_element("1 + t^(1/3) + 2*T", "tilt", 3)
    assert all(B.is_zero(c) for c in delta(WittVec.teichmuller(B, a, 3)).coords)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 3), st.integers(0, 10**6), st.integers(0, 10**6))
def test_delta_identities(p, a, b):
    N = 3
    x, y = fp_vec(p, a, N), fp_vec(p, b, N)
    dx, dy = delta(x), delta(y)
    xs, ys = x.truncate(N - 1), y.truncate(N - 1)
    # delta(x + y) = delta(x) + delta(y) - sum_{0<i<p} binom(p, i)/p x^i y^(p-i)
    cross = WittVec.zero(x.base, N - 1)
    from math import comb
    for i in range(1, p):
        cross = cross + WittVec.from_int(x.base, comb(p, i) // p, N - 1) * xs**i * ys ** (p - i)
    assert delta(x + y) == dx + dy - cross
    # delta(xy) = x^p delta(y) + y^p delta(x) + p delta(x) delta(y)
    pp = WittVec.from_int(x.base, p, N - 1)
    assert delta(x * y) == xs**p * dy + ys**p * dx + pp * dx * dy


def test_frobenius_lifts_frobenius_mod_p():
    rng = random.Random(1)
    B = TiltBase(2, 4)
    for _ in range(5):
        x = random_witt(B, 3, rng)
        diff = witt_frobenius(x) - x**2
        assert B.is_zero(diff.coords[0])


# ---- Teichmuller expansions and distinguished elements ----

def test_expansion_of_p_for_odd_p():
    assert teich_expansion(fp_vec(3, 3, 3)) == [0, 1, 0]


def test_expansion_of_t_minus_p():
    B = TiltBase(3, 2)
    t = parse_element("t", "tilt", 3)
    x = WittVec.teichmuller(B, t, 3) - fp_vec(3, 3, 3).__class__.from_int(B, 3, 3)
    digits = teich_expansion(x)
    assert digits[0] == t
    assert digits[1] == B.from_int(-1)
    assert digits[2].is_zero()


def test_distinguished_examples():
    assert is_distinguished(fp_vec(3, 3, 3))[0]
    for p in (2, 3):
        B = TiltBase(p, 2)
        t = parse_element("t", "tilt", p)
        assert not is_distinguished(WittVec.teichmuller(B, t, 3))[0]
        x = WittVec.teichmuller(B, t, 3) - WittVec.from_int(B, p, 3)
        ok, cert = is_distinguished(x)
        assert ok and B.is_unit(cert["a1"])


def test_distinguished_needs_two_coordinates():
    with pytest.raises(DomainMismatch):
        is_distinguished(fp_vec(2, 2, 1))


# ---- theta ----

def test_theta_examples():
    p = 3
    B = TiltBase(p, 2)
    t = parse_element("t", "tilt", p)
    r = parse_element("t^(1/3)", "tilt", p)
    assert theta(WittVec.teichmuller(B, t, 3)) == parse_element("p", "untilt", p, prec=3)
    assert theta(WittVec.teichmuller(B, r, 3)) == parse_element("p^(1/3)", "untilt", p, prec=3)
    assert theta(WittVec.teichmuller(B, t, 3) - WittVec.from_int(B, p, 3)).is_zero()


def test_theta_needs_tilt_base():
    with pytest.raises(DomainMismatch):
        theta(fp_vec(2, 1, 2))
