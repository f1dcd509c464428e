"""The tilt side: perfect characteristic-p digit algebras F_p[t^(1/p^inf)][T...].

Exponents of t and of the variables live on the grid p^-depth Z.  Addition
and multiplication are carry-free (digits combine mod p); the p-th power map
only rescales exponents, so it is bijective whenever the grid has room.
"""

from __future__ import annotations

from fractions import Fraction

from . import _digits
from .errors import DepthExceeded, DomainMismatch, PrecisionIndeterminate
from .exact import INF, ceil_scaled
from .series import DigitSeries


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class TiltSeries(DigitSeries):
    """An element of the tilt, known modulo t^prec (prec None means exact)."""

    __slots__ = ()
    symbol = "t"

    def __init__(self, p, digits, prec=None, depth=0, laurent=()):
        prec = None if prec is None or prec == INF else Fraction(prec)
        if prec is not None and prec <= 0:
            raise ValueError("t-precision must be positive")
        super().__init__(p, {}, prec, depth, laurent)
        cutoff = self._cutoff()
        d = _digits.reduce_mod_p(digits, p, cutoff)
        for (q, m) in d:
            if q < 0:
                raise DomainMismatch("tilt digits need q >= 0")
            if len(m) != len(self.laurent):
                raise DomainMismatch("exponent vector has the wrong length")
        self._d = d
        self._check_laurent()

    # ---- constructors -----------------------------------------------------
    @classmethod
    def from_terms(cls, p, terms, prec=None, depth=None, laurent=None):
        terms = list(terms)
        nvars = len(terms[0][1]) if terms else len(laurent or ())
        if laurent is None:
            laurent = (False,) * nvars
        raw, depth = cls._scaled_terms(p, terms, depth, nvars)
        return cls(p, raw, prec, depth, laurent)

    @classmethod
    def zero(cls, p, prec=None, depth=0, laurent=()):
        return cls(p, {}, prec, depth, laurent)

    @classmethod
    def one(cls, p, prec=None, depth=0, laurent=()):
        return cls(p, {(0, (0,) * len(laurent)): 1}, prec, depth, laurent)

    @classmethod
    def monomial(cls, p, q=0, m=(), c=1, prec=None, depth=None, laurent=None):
        return cls.from_terms(p, [(q, tuple(m), c)], prec, depth, laurent)

    def _new(self, digits, prec, depth, laurent):
        return TiltSeries(self.p, digits, prec, depth, laurent)

    # ---- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = TiltSeries.one(self.p, None, self.depth, self.laurent) * other
        a, b, depth, laurent = self._aligned(other)
        out = dict(a)
        for k, c in b.items():
            out[k] = out.get(k, 0) + c
        return self._new(out, _min_prec(self.prec, other.prec), depth, laurent)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self._d.items()}, self.prec, self.depth, self.laurent)

    def __sub__(self, other):
        if isinstance(other, int):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self._new({k: c * other for k, c in self._d.items()}, self.prec, self.depth, self.laurent)
        a, b, depth, laurent = self._aligned(other)
        prec = _min_prec(self.prec, other.prec)
        cutoff = None if prec is None else ceil_scaled(prec, self.p**depth)
        raw = _digits.convolve(a, b, cutoff)
        return self._new(raw, prec, depth, laurent)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = TiltSeries.one(self.p, self.prec, self.depth, self.laurent)
        base = self
        # split off p-power factors, which are free (Frobenius)
        while n and n % self.p == 0:
            base = base.frobenius()
            n //= self.p
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius(self):
        p = self.p
        d = {(q * p, tuple(x * p for x in m)): c for (q, m), c in self._d.items()}
        prec = None if self.prec is None else self.prec * p
        return self._new(d, prec, self.depth, self.laurent)

    def frobenius_inverse(self):
        p = self.p
        d = {}
        for (q, m), c in self._d.items():
            if q % p or any(x % p for x in m):
                raise DepthExceeded(f"inverse Frobenius leaves the depth-{self.depth} grid")
            d[(q // p, tuple(x // p for x in m))] = c
        prec = None if self.prec is None else self.prec / p
        return self._new(d, prec, self.depth, self.laurent)

    def with_depth(self, depth):
        """The same element on a finer grid (a larger depth budget)."""
        return self._new(self._lift_digits(depth), self.prec, depth, self.laurent)

    def truncate(self, prec):
        prec = _min_prec(self.prec, None if prec == INF else Fraction(prec))
        return self._new(dict(self._d), prec, self.depth, self.laurent)

    def with_precision(self, prec):
        """Reinterpret the stored digits at precision prec (may claim more than is known)."""
        return self._new(dict(self._d), prec, self.depth, self.laurent)

    def valuation(self):
        if not self._d:
            if self.prec is None:
                return INF
            raise PrecisionIndeterminate("zero at finite t-precision", bound=self.prec)
        return Fraction(min(q for q, _ in self._d), self.scale)

    def constant_part(self):
        """Digits with q = 0, as a series (the image in the residue ring)."""
        return self._new({k: c for k, c in self._d.items() if k[0] == 0}, self.prec, self.depth, self.laurent)

    def is_unit(self):
        """Units are the elements whose q = 0 part is one monomial in Laurent variables."""
        c0 = [k for k in self._d if k[0] == 0]
        if len(c0) != 1:
            return False
        m = c0[0][1]
        return all(x == 0 or lf for x, lf in zip(m, self.laurent))

    # ---- comparisons ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = TiltSeries.one(self.p, self.prec, self.depth, self.laurent) * other
        if not isinstance(other, TiltSeries):
            return NotImplemented
        if self.p != other.p or self.prec != other.prec:
            return False
        try:
            a, b, _, _ = self._aligned(other)
        except DomainMismatch:
            return False
        return a == b

    def __hash__(self):
        return hash((self.p, self.prec, frozenset(self.terms())))

    def eq_at(self, other, prec):
        return self.truncate(prec) == other.truncate(prec)


def tilt_ring_arith(a: TiltSeries, b: TiltSeries, op: str) -> TiltSeries:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def tilt_frobenius(a: TiltSeries, direction: str = "forward") -> TiltSeries:
    if direction == "forward":
        return a.frobenius()
    if direction == "inverse":
        return a.frobenius_inverse()
    raise ValueError(f"unknown direction {direction!r}")


def tilt_valuation(a: TiltSeries):
    """Minimal t-exponent; INF for exact zero, PrecisionIndeterminate for a truncated zero."""
    return a.valuation()


def perfection(a: TiltSeries) -> TiltSeries:
    # The representable rings are already perfect, so the colimit perfection
    # restricted to them is the identity.
    return a
