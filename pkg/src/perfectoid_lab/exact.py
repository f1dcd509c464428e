"""Exact scalars: Z[1/p] exponents, p-adic valuations of rationals, norm values."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DepthExceeded, InvalidExponent

INF = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, math.isqrt(n) + 1))


def vp(x, p: int):
    """p-adic valuation of an integer or Fraction; INF for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def pden_exp(x: Fraction, p: int) -> int:
    """Smallest k with x * p^k integral; InvalidExponent if the denominator is not a p-power."""
    d = Fraction(x).denominator
    k = 0
    while d % p == 0:
        d //= p
        k += 1
    if d != 1:
        raise InvalidExponent(f"{x} is not in Z[1/{p}]")
    return k


def to_scaled(x, p: int, depth: int) -> int:
    """Return x * p^depth as an int, failing loudly when x is off the grid."""
    x = Fraction(x)
    k = pden_exp(x, p)
    if k > depth:
        raise DepthExceeded(f"exponent {x} needs depth {k} > {depth}")
    return int(x * p**depth)


def ceil_scaled(x, scale: int) -> int:
    """ceil(x * scale) for a rational x (the first grid index not below x)."""
    x = Fraction(x) * scale
    return -((-x.numerator) // x.denominator)


@dataclass(frozen=True, order=False)
class PExp:
    """An element numerator / p^den_exp of Z[1/p], kept normalized."""

    numerator: int
    den_exp: int
    p: int

    def __post_init__(self):
        n, k = self.numerator, self.den_exp
        if k < 0:
            n, k = n * self.p ** (-k), 0
        while k > 0 and n % self.p == 0:
            n //= self.p
            k -= 1
        object.__setattr__(self, "numerator", n)
        object.__setattr__(self, "den_exp", k)

    @classmethod
    def of(cls, x, p: int) -> "PExp":
        if isinstance(x, PExp):
            return x
        x = Fraction(x)
        k = pden_exp(x, p)
        return cls(int(x * p**k), k, p)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.p**self.den_exp)

    def _coerce(self, other):
        if isinstance(other, PExp):
            if other.p != self.p:
                raise ValueError("mixed primes")
            return other
        return PExp.of(other, self.p)

    def __add__(self, other):
        return PExp.of(self.value + self._coerce(other).value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return PExp.of(self.value - self._coerce(other).value, self.p)

    def __rsub__(self, other):
        return PExp.of(self._coerce(other).value - self.value, self.p)

    def __mul__(self, other):
        return PExp.of(self.value * self._coerce(other).value, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return PExp(-self.numerator, self.den_exp, self.p)

    def divide_by_p(self) -> "PExp":
        return PExp(self.numerator, self.den_exp + 1, self.p)

    def __eq__(self, other):
        if isinstance(other, PExp):
            return self.p == other.p and self.value == other.value
        try:
            return self.value == Fraction(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __lt__(self, other):
        return self.value < Fraction(other.value if isinstance(other, PExp) else other)

    def __le__(self, other):
        return self.value <= Fraction(other.value if isinstance(other, PExp) else other)

    def __gt__(self, other):
        return not self <= other

    def __ge__(self, other):
        return not self < other

    def __str__(self):
        return str(self.value)


def frac_str(x) -> str:
    if x == INF:
        return "inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rat_json(x):
    """Rationals serialize as {num, den}; infinity as the string "inf"."""
    if x is None or x == INF:
        return "inf"
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def rat_from_json(obj):
    if obj == "inf":
        return INF
    return Fraction(obj["num"], obj["den"])


class NormValue:
    """The exact real number factor^(1/root) * p^(-v), with v = INF meaning 0.

    Comparisons raise both sides to a common integer power and compare
    rationals, so no floating point is ever involved.
    """

    __slots__ = ("p", "v", "factor", "root")

    def __init__(self, p: int, v, factor=1, root: int = 1):
        self.p = p
        self.v = v if v == INF else Fraction(v)
        factor = Fraction(factor)
        if factor <= 0:
            raise ValueError("norm factor must be positive")
        if factor == 1:
            root = 1
        self.factor = factor
        self.root = int(root)

    @classmethod
    def zero(cls, p):
        return cls(p, INF)

    @classmethod
    def one(cls, p):
        return cls(p, 0)

    def is_zero(self):
        return self.v == INF

    def __mul__(self, other: "NormValue") -> "NormValue":
        if self.is_zero() or other.is_zero():
            return NormValue.zero(self.p)
        f = self.factor ** other.root * other.factor ** self.root
        return NormValue(self.p, self.v + other.v, f, self.root * other.root)

    def __pow__(self, n: int) -> "NormValue":
        if n == 0:
            return NormValue.one(self.p)
        if self.is_zero():
            return self
        return NormValue(self.p, self.v * n, self.factor**n, self.root)

    def nth_root(self, n: int) -> "NormValue":
        if self.is_zero():
            return self
        return NormValue(self.p, self.v / n, self.factor, self.root * n)

    def _cmp(self, other: "NormValue") -> int:
        if self.p != other.p:
            raise ValueError("mixed primes")
        if self.is_zero() or other.is_zero():
            return (not self.is_zero()) - (not other.is_zero())
        R = self.root * other.root
        D = math.lcm(self.v.denominator, other.v.denominator)
        lhs = self.factor ** (other.root * D)
        rhs = other.factor ** (self.root * D)
        e = (other.v - self.v) * R * D
        assert e.denominator == 1
        e = int(e)
        if e >= 0:
            lhs *= Fraction(self.p) ** e
        else:
            rhs *= Fraction(self.p) ** (-e)
        return (lhs > rhs) - (lhs < rhs)

    def __eq__(self, other):
        if not isinstance(other, NormValue):
            return NotImplemented
        return self._cmp(other) == 0

    __hash__ = None

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self):
        if self.is_zero():
            return 0.0
        return float(self.factor) ** (1.0 / self.root) * float(self.p) ** (-float(self.v))

    def __repr__(self):
        if self.is_zero():
            return "NormValue(0)"
        head = "" if self.factor == 1 else f"{frac_str(self.factor)}"
        if head and self.root != 1:
            head = f"({head})^(1/{self.root})"
        tail = f"{self.p}^({frac_str(-self.v)})"
        return f"NormValue({head + '*' if head else ''}{tail})"

    def to_json(self):
        if self.is_zero():
            return {"zero": True}
        out = {
            "v_num": self.v.numerator,
            "v_den": self.v.denominator,
            "factor_num": self.factor.numerator,
            "factor_den": self.factor.denominator,
        }
        if self.root != 1:
            out["root"] = self.root
        return out


def norm_max(values, p):
    best = NormValue.zero(p)
    for x in values:
        if x > best:
            best = x
    return best
