"""Exponent cones of toric unit balls and explicit monomial constraint sets.

A Cone is a product of per-variable log-radius intervals [s_lo, s_hi].  The
monomial p^q T^m lies in the unit ball of the sup-norm over
{p^-s_hi <= |T_j| <= p^-s_lo} exactly when q + sum_j g_j(m_j) >= 0, where
g_j(m) = m*s_lo for m >= 0 and m*s_hi for m < 0.  Each g_j is concave, so the
constraint region is closed under addition (the unit ball is a ring).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import EmptyIntersection, UnboundedRegion
from .exact import INF, frac_str, rat_json


def _rat(x):
    return INF if x is None or x == INF else Fraction(x)


@dataclass(frozen=True)
class Cone:
    intervals: tuple
    perfectoid: bool = True

    def __post_init__(self):
        ivs = []
        for lo, hi in self.intervals:
            lo, hi = _rat(lo), _rat(hi)
            if lo == INF or lo < 0 or hi < lo:
                raise UnboundedRegion(f"invalid log-radius interval [{lo}, {hi}]")
            ivs.append((lo, hi))
        object.__setattr__(self, "intervals", tuple(ivs))

    @classmethod
    def disk(cls, s=0, nvars=1, perfectoid=True):
        return cls(((s, INF),) * nvars, perfectoid)

    @classmethod
    def annulus(cls, lo, hi, perfectoid=True):
        return cls(((lo, hi),), perfectoid)

    @property
    def nvars(self):
        return len(self.intervals)

    @property
    def laurent(self):
        return tuple(hi != INF for _, hi in self.intervals)

    def g(self, m) -> Fraction:
        """Support function sum_j g_j(m_j); -INF when a non-Laurent exponent is negative."""
        total = Fraction(0)
        for (lo, hi), x in zip(self.intervals, m):
            x = Fraction(x)
            if x >= 0:
                total += x * lo
            elif hi == INF:
                return -INF
            else:
                total += x * hi
        return total

    def contains(self, q, m) -> bool:
        if not self.perfectoid and any(Fraction(x).denominator != 1 for x in m):
            return False
        g = self.g(m)
        return g != -INF and Fraction(q) + g >= 0

    def meet(self, other: "Cone") -> "Cone":
        """Cone of the region intersection (per-variable interval intersection)."""
        if self.nvars != other.nvars:
            raise ValueError("cones over different polydisks")
        ivs = []
        for (a, b), (c, d) in zip(self.intervals, other.intervals):
            lo, hi = max(a, c), min(b, d)
            if lo > hi:
                raise EmptyIntersection(f"[{a},{b}] and [{c},{d}] are disjoint")
            ivs.append((lo, hi))
        return Cone(tuple(ivs), self.perfectoid and other.perfectoid)

    def region_contains(self, s) -> bool:
        """Is the log-radius vector s (entries may be INF) inside the region?"""
        for (lo, hi), x in zip(self.intervals, s):
            if x == INF:
                if hi != INF:
                    return False
            elif not lo <= Fraction(x) <= hi:
                return False
        return True

    def to_constraints(self) -> "ConstraintSet":
        """The 2^d homogeneous half-spaces q >= -sum c_j m_j, c_j in {s_lo, s_hi}, plus sign rules."""
        halfspaces = []
        choices = [(lo,) if hi == INF else (lo, hi) for lo, hi in self.intervals]
        for combo in itertools.product(*choices):
            halfspaces.append(HalfSpace(tuple(-c for c in combo)))
        sign = tuple(hi == INF for _, hi in self.intervals)
        ambient = None if self.perfectoid else 0
        return ConstraintSet(self.nvars, tuple(halfspaces), sign=sign, ambient_exp=ambient)

    def to_json(self):
        return {
            "intervals": [[rat_json(lo), rat_json(hi)] for lo, hi in self.intervals],
            "grid": "Z[1/p]" if self.perfectoid else "Z",
        }

    def __str__(self):
        ivs = ", ".join(f"[{frac_str(lo)}, {frac_str(hi)}]" for lo, hi in self.intervals)
        return f"Cone({ivs}{'' if self.perfectoid else ', integral'})"


@dataclass(frozen=True)
class HalfSpace:
    """q >= coef . m (or > when strict), optionally q >= ceil(coef . m) on the grid p^-round_exp."""

    coef: tuple
    strict: bool = False
    round_exp: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "coef", tuple(Fraction(c) for c in self.coef))

    def bound(self, m, p) -> Fraction:
        val = sum((c * Fraction(x) for c, x in zip(self.coef, m)), Fraction(0))
        if self.round_exp is not None:
            scale = p**self.round_exp
            val = Fraction(-((-val * scale).numerator // (val * scale).denominator), scale)
        return val

    def holds(self, q, m, p) -> bool:
        b = self.bound(m, p)
        return Fraction(q) > b if self.strict else Fraction(q) >= b


@dataclass(frozen=True)
class ConstraintSet:
    """A monomial set {(q, m)} cut out by homogeneous half-spaces and grid rules.

    lattice[j] = k restricts m_j to p^-k Z (None: the ambient grid);
    ambient_exp = 0 is the classical integral grid, None the perfectoid grid.
    """

    nvars: int
    halfspaces: tuple = ()
    lattice: tuple = None
    sign: tuple = None
    ambient_exp: int | None = None

    def __post_init__(self):
        n = self.nvars
        lat = self.lattice if self.lattice is not None else (None,) * n
        sign = self.sign if self.sign is not None else (False,) * n
        if self.ambient_exp is not None:
            lat = tuple(None if k is None or k >= self.ambient_exp else k for k in lat)
        object.__setattr__(self, "lattice", tuple(lat))
        object.__setattr__(self, "sign", tuple(bool(s) for s in sign))
        object.__setattr__(self, "halfspaces", tuple(sorted(set(self.halfspaces), key=repr)))

    @classmethod
    def from_inequalities(cls, nvars, rows, **kw):
        """Build from rows (b, a, strict) meaning b*q + a.m >= 0 (> 0 if strict)."""
        hs = []
        for row in rows:
            b, a = Fraction(row[0]), tuple(Fraction(x) for x in row[1])
            strict = bool(row[2]) if len(row) > 2 else False
            if b <= 0:
                raise UnboundedRegion("half-space does not bound q from below")
            hs.append(HalfSpace(tuple(-x / b for x in a), strict))
        return cls(nvars, tuple(hs), **kw)

    def contains(self, q, m, p) -> bool:
        for x, k, s in zip(m, self.lattice, self.sign):
            x = Fraction(x)
            if s and x < 0:
                return False
            k = self.ambient_exp if k is None else k
            if k is not None and (x * p**k).denominator != 1:
                return False
        return all(h.holds(q, m, p) for h in self.halfspaces)

    def is_unital(self, p) -> bool:
        return self.contains(0, (0,) * self.nvars, p)


def _close(cs: ConstraintSet, kind: str) -> ConstraintSet:
    if kind == "almost":
        hs = tuple(replace(h, strict=False) for h in cs.halfspaces)
        return replace(cs, halfspaces=hs)
    if kind == "pic":
        hs = tuple(replace(h, round_exp=None) for h in cs.halfspaces)
        return replace(cs, halfspaces=hs, lattice=(None,) * cs.nvars)
    if kind == "tic":
        pic = _close(cs, "pic")
        hs = tuple(replace(h, strict=False) for h in pic.halfspaces)
        return replace(pic, halfspaces=hs)
    raise ValueError(f"unknown closure {kind!r}")


def cone_closure(c, kind: str):
    """Closure of a monomial set: almost elements, p-integral closure, or total integral closure.

    On a Cone (already closed, homogeneous and saturated on its grid) all
    three closures are the identity.
    """
    if isinstance(c, Cone):
        if kind not in ("almost", "pic", "tic"):
            raise ValueError(f"unknown closure {kind!r}")
        return c
    for h in c.halfspaces:
        if any(x in (INF, -INF) for x in h.coef):
            raise UnboundedRegion("half-space coefficients must be finite")
    return _close(c, kind)
