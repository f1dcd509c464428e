"""Exact arithmetic in Q(p^(1/p^M)) and Laurent polynomials over it.

An element is sum_k a_k * pi^k with pi = p^(1/p^M), 0 <= k < p^M and rational
a_k.  The valuation of such a sum has no cancellation, since the terms have
pairwise distinct valuations modulo Z: v = min_k v_p(a_k) + k / p^M.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import DomainMismatch
from .exact import INF, frac_str, pden_exp, vp


class KElement:
    __slots__ = ("p", "depth", "c")

    def __init__(self, p, coeffs=None, depth=0):
        self.p = p
        self.depth = depth
        self.c = {k: Fraction(v) for k, v in (coeffs or {}).items() if v}

    @property
    def scale(self):
        return self.p**self.depth

    @classmethod
    def from_rational(cls, p, x):
        return cls(p, {0: Fraction(x)})

    @classmethod
    def p_power(cls, p, q, c=1):
        """c * p^q for q in Z[1/p]."""
        q = Fraction(q)
        depth = pden_exp(q, p)
        S = p**depth
        j, k = divmod(int(q * S), S)
        return cls(p, {k: Fraction(c) * Fraction(p) ** j}, depth)

    @classmethod
    def from_series(cls, s):
        """A constant digit series sum c p^q."""
        if any(any(m) for _, m, _ in s.terms()):
            raise DomainMismatch("series has variables")
        total = cls(s.p)
        for q, _, c in s.terms():
            total = total + cls.p_power(s.p, q, c)
        return total

    def _at(self, depth):
        if depth == self.depth:
            return self.c
        f = self.p ** (depth - self.depth)
        return {k * f: v for k, v in self.c.items()}

    def _coerce(self, other):
        if isinstance(other, KElement):
            return other
        return KElement.from_rational(self.p, other)

    def __add__(self, other):
        other = self._coerce(other)
        d = max(self.depth, other.depth)
        out = dict(self._at(d))
        for k, v in other._at(d).items():
            out[k] = out.get(k, 0) + v
        return KElement(self.p, out, d)

    __radd__ = __add__

    def __neg__(self):
        return KElement(self.p, {k: -v for k, v in self.c.items()}, self.depth)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        d = max(self.depth, other.depth)
        S = self.p**d
        a, b = self._at(d), other._at(d)
        out = {}
        for i, x in a.items():
            for j, y in b.items():
                k = i + j
                v = x * y
                if k >= S:
                    k -= S
                    v *= self.p
                out[k] = out.get(k, 0) + v
        return KElement(self.p, out, d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = KElement(self.p, {0: 1})
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def is_zero(self):
        return not self.c

    def valuation(self):
        if not self.c:
            return INF
        S = self.scale
        return min(vp(v, self.p) + Fraction(k, S) for k, v in self.c.items())

    def teichmuller_monomial_exponent(self):
        """q if this element is exactly p^q, else None."""
        if len(self.c) != 1:
            return None
        (k, v), = self.c.items()
        e = vp(v, self.p)
        if v != Fraction(self.p) ** e:
            return None
        return e + Fraction(k, self.scale)

    def __eq__(self, other):
        if not isinstance(other, KElement):
            other = self._coerce(other)
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        if not self.c:
            return "0"
        S = self.scale
        parts = []
        for k in sorted(self.c):
            v = self.c[k]
            parts.append(frac_str(v) if k == 0 else f"{frac_str(v)}*p^({frac_str(Fraction(k, S))})")
        return " + ".join(parts)


class LaurentPoly:
    """A finite sum of a_m T^m with a_m in K (or another coefficient ring) and m in Z[1/p]^d."""

    __slots__ = ("p", "nvars", "terms")

    def __init__(self, p, nvars, terms):
        self.p = p
        self.nvars = nvars
        self.terms = {tuple(Fraction(x) for x in m): a for m, a in terms.items() if not a.is_zero()}

    @classmethod
    def from_series(cls, s):
        """Convert an UntiltSeries into exact coefficients over K."""
        terms = {}
        for q, m, c in s.terms():
            terms[m] = terms.get(m, KElement(s.p)) + KElement.p_power(s.p, q, c)
        return cls(s.p, s.nvars, terms)

    @classmethod
    def from_tilt(cls, s):
        """Group a TiltSeries by monomials; coefficients are constant tilt series."""
        from .charp import TiltSeries

        grouped = {}
        S = s.scale
        for (q, m), c in s.raw_digits().items():
            grouped.setdefault(m, {})[(q, ())] = c
        terms = {
            tuple(Fraction(x, S) for x in m): TiltSeries(s.p, d, s.prec, s.depth, ())
            for m, d in grouped.items()
        }
        return cls(s.p, s.nvars, terms)

    @classmethod
    def monomial(cls, p, coeff, m):
        return cls(p, len(m), {tuple(m): coeff})

    @classmethod
    def constant(cls, p, coeff, nvars=1):
        if not isinstance(coeff, KElement):
            coeff = KElement.from_rational(p, coeff)
        return cls(p, nvars, {(0,) * nvars: coeff})

    def is_monomial(self):
        return len(self.terms) == 1

    def __add__(self, other):
        out = dict(self.terms)
        for m, a in other.terms.items():
            out[m] = out[m] + a if m in out else a
        return LaurentPoly(self.p, max(self.nvars, other.nvars), out)

    def __neg__(self):
        return LaurentPoly(self.p, self.nvars, {m: -a for m, a in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for m1, a in self.terms.items():
            for m2, b in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                out[m] = out[m] + a * b if m in out else a * b
        return LaurentPoly(self.p, max(self.nvars, other.nvars), out)

    def __repr__(self):
        if not self.terms:
            return "0"
        names = ("T", "S", "U")
        parts = []
        for m in sorted(self.terms):
            mono = "*".join(f"{n}^({frac_str(x)})" for n, x in zip(names, m) if x)
            parts.append(f"({self.terms[m]!r})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def taylor_shift(terms: dict, j: int, center, one) -> dict:
    """Re-expand sum a_m T^m in powers of (T_j - center); exponents of T_j must be integers >= 0."""
    out = {}
    for m, a in terms.items():
        e = m[j]
        if e.denominator != 1 or e < 0:
            raise DomainMismatch("re-centering needs integer exponents")
        e = int(e)
        cpow = one
        powers = [one]
        for _ in range(e):
            cpow = cpow * center
            powers.append(cpow)
        for i in range(e + 1):
            b = comb(e, i)
            if isinstance(one, KElement):
                coef = a * powers[e - i] * b
            else:
                coef = a * powers[e - i] * (b % one.p)
            if coef.is_zero():
                continue
            mm = m[:j] + (Fraction(i),) + m[j + 1:]
            out[mm] = out[mm] + coef if mm in out else coef
    return {m: a for m, a in out.items() if not a.is_zero()}
