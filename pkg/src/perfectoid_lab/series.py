"""Common storage for digit series over the exponent grid Z[1/p^depth]."""

from __future__ import annotations

from fractions import Fraction

from . import _digits
from .errors import DepthExceeded, DomainMismatch
from .exact import INF, frac_str, pden_exp, rat_json

VAR_NAMES = ("T", "S", "U")


def grid_depth(values, p) -> int:
    return max((pden_exp(Fraction(v), p) for v in values), default=0)


class DigitSeries:
    """Finite support function (q, m) -> digit in 1..p-1 with scaled keys."""

    __slots__ = ("p", "laurent", "depth", "prec", "_d")
    symbol = "?"

    def __init__(self, p, digits, prec, depth, laurent=()):
        self.p = p
        self.laurent = tuple(bool(x) for x in laurent)
        self.depth = depth
        self.prec = prec
        self._d = digits

    # ---- construction helpers -------------------------------------------------
    @classmethod
    def _scaled_terms(cls, p, terms, depth, nvars):
        need = grid_depth([t[0] for t in terms] + [x for t in terms for x in t[1]], p)
        if depth is None:
            depth = need
        elif need > depth:
            raise DepthExceeded(f"terms need depth {need} > {depth}")
        S = p**depth
        raw = {}
        for q, m, c in terms:
            m = tuple(m)
            if len(m) != nvars:
                raise DomainMismatch("exponent vector has the wrong length")
            key = (int(Fraction(q) * S), tuple(int(Fraction(x) * S) for x in m))
            raw[key] = raw.get(key, 0) + c
        return raw, depth

    @property
    def nvars(self):
        return len(self.laurent)

    @property
    def scale(self):
        return self.p**self.depth

    def _cutoff(self):
        if self.prec is None:
            return None
        from .exact import ceil_scaled

        return ceil_scaled(self.prec, self.scale)

    def raw_digits(self) -> dict:
        return dict(self._d)

    def terms(self):
        """Digits as sorted (q, m, c) triples with exact rational exponents."""
        S = self.scale
        out = [
            (Fraction(q, S), tuple(Fraction(x, S) for x in m), c) for (q, m), c in self._d.items()
        ]
        out.sort(key=lambda t: (t[0], t[1]))
        return out

    def is_zero(self):
        return not self._d

    def is_monomial(self):
        return len(self._d) == 1

    def min_depth(self) -> int:
        """Smallest grid depth that holds every digit."""
        ts = self.terms()
        return grid_depth([q for q, _, _ in ts] + [x for _, m, _ in ts for x in m], self.p)

    def _check_laurent(self):
        for (_, m) in self._d:
            for x, lf in zip(m, self.laurent):
                if x < 0 and not lf:
                    raise DomainMismatch("negative exponent on a non-Laurent variable")

    # ---- alignment -----------------------------------------------------------
    def _lift_digits(self, depth):
        if depth < self.depth:
            raise DepthExceeded("cannot lower depth implicitly")
        return _digits.rescale(self._d, self.p ** (depth - self.depth))

    def _broadcast(self, other):
        if self.p != other.p:
            raise DomainMismatch("different primes")
        if self.nvars == other.nvars:
            if self.laurent != other.laurent:
                if self.is_zero() or other.is_zero():
                    lf = tuple(a or b for a, b in zip(self.laurent, other.laurent))
                    return lf
                raise DomainMismatch("incompatible variable signatures")
            return self.laurent
        if self.nvars == 0:
            return other.laurent
        if other.nvars == 0:
            return self.laurent
        raise DomainMismatch("incompatible variable counts")

    @staticmethod
    def _pad(digits, n):
        out = {}
        for (q, m), c in digits.items():
            out[(q, m + (0,) * (n - len(m)))] = c
        return out

    def _aligned(self, other):
        """Digits of both operands on a common grid and variable signature."""
        laurent = self._broadcast(other)
        depth = max(self.depth, other.depth)
        a = self._pad(self._lift_digits(depth), len(laurent))
        b = self._pad(other._lift_digits(depth), len(laurent))
        return a, b, depth, laurent

    # ---- printing --------------------------------------------------------------
    def to_expr(self) -> str:
        if not self._d:
            return "0"
        parts = []
        for q, m, c in self.terms():
            factors = []
            if q != 0:
                factors.append(f"{self.symbol}^({frac_str(q)})")
            for name, x in zip(VAR_NAMES, m):
                if x != 0:
                    factors.append(f"{name}^({frac_str(x)})")
            if c != 1 or not factors:
                factors.insert(0, str(c))
            parts.append("*".join(factors))
        return " + ".join(parts)

    def to_json(self):
        digits = []
        for q, m, c in self.terms():
            qd = pden_exp(q, self.p)
            digits.append([int(q * self.p**qd), qd] + [rat_json(x) for x in m] + [c])
        return {
            "p": self.p,
            "d": self.nvars,
            "laurent": list(self.laurent),
            "precision": rat_json(INF if self.prec is None else self.prec),
            "depth": self.depth,
            "digits": digits,
        }

    def __repr__(self):
        prec = "inf" if self.prec is None else frac_str(self.prec)
        return f"{type(self).__name__}(p={self.p}, {self.to_expr()}, prec={prec})"
