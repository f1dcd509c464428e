"""Norms on cone algebras, a non-uniform weighted norm, spectral radius and powerboundedness."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .char0 import UntiltSeries, lattice_norm
from .cones import Cone
from .errors import DomainMismatch, NotRepresentable
from .exact import INF, NormValue, norm_max

GAUSS, WEIGHTED, LATTICE = "gauss", "weighted", "lattice"


@dataclass(frozen=True)
class NormSpec:
    kind: str
    cone: Cone | None = None

    def __post_init__(self):
        if self.kind not in (GAUSS, WEIGHTED, LATTICE):
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind != WEIGHTED and self.cone is None:
            object.__setattr__(self, "cone", Cone.disk())

    @classmethod
    def gauss(cls, cone=None):
        return cls(GAUSS, cone)

    @classmethod
    def weighted(cls):
        return cls(WEIGHTED)

    @classmethod
    def lattice(cls, cone):
        return cls(LATTICE, cone)

    @property
    def power_multiplicative(self):
        return self.kind != WEIGHTED

    def describe(self):
        if self.kind == WEIGHTED:
            return "weighted |sum a_i T^i| = max |a_i| (i+1)"
        return f"{self.kind} on {self.cone}"


def _weighted_coeffs(f: UntiltSeries):
    """i -> v(a_i); digits with one monomial never cancel, so v(a_i) is its least q."""
    if f.nvars != 1:
        raise DomainMismatch("the weighted norm is defined on one-variable series")
    out = {}
    for q, (m,), _ in f.terms():
        if m.denominator != 1 or m < 0:
            raise DomainMismatch("the weighted norm needs non-negative integer exponents")
        i = int(m)
        out[i] = min(out.get(i, INF), q)
    return out


def norm_eval(f: UntiltSeries, n: NormSpec) -> NormValue:
    if n.kind == WEIGHTED:
        return norm_max((NormValue(f.p, v, i + 1) for i, v in _weighted_coeffs(f).items()), f.p)
    return lattice_norm(f, n.cone)


def _powers(f, n_max):
    x = f
    for n in range(1, n_max + 1):
        yield n, x
        if n < n_max:
            x = x.exact_mul(f)


def spectral_radius(f: UntiltSeries, n: NormSpec, n_max: int = 1, points=None) -> dict:
    """Certified [lo, hi] around lim |f^n|^(1/n).

    hi is the least |f^k|^(1/k) for k <= n_max (Fekete), lo the largest |f(x)|
    over the supplied points.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    p = f.p
    if f.is_zero():
        z = NormValue.zero(p)
        return {"lo": z, "hi": z, "n_at_hi": 1, "provenance": "exact"}
    if n.power_multiplicative:
        v = norm_eval(f, n)
        return {"lo": v, "hi": v, "n_at_hi": 1, "provenance": "power-multiplicative"}
    hi, at = None, 1
    if f.is_monomial():
        # |(c T^i)^n| = |c|^n (n i + 1): no need to expand powers
        (q, (m,), _), = f.terms()
        _weighted_coeffs(f)
        for k in range(1, n_max + 1):
            cand = NormValue(p, q * k, int(m) * k + 1).nth_root(k)
            if hi is None or cand < hi:
                hi, at = cand, k
    else:
        for k, fk in _powers(f, n_max):
            cand = norm_eval(fk, n).nth_root(k)
            if hi is None or cand < hi:
                hi, at = cand, k
    lo = NormValue.zero(p)
    if points:
        from .berkovich import eval_point

        lo = norm_max((eval_point(f, x) for x in points), p)
    return {"lo": lo, "hi": hi, "n_at_hi": at, "provenance": "interval"}


def _power_norm(f, n: NormSpec, k: int) -> NormValue:
    if n.power_multiplicative:
        return norm_eval(f, n) ** k
    if f.is_monomial():
        (q, (m,), _), = f.terms()
        return NormValue(f.p, q * k, int(m) * k + 1)
    return norm_eval(f.exact_pow(k), n)


def is_powerbounded(f: UntiltSeries, n: NormSpec, n_max: int = 64, m_budget: int = 1) -> dict:
    """Yes with a certificate, No with a witness power, or Unknown within the budgets."""
    p = f.p
    bound = NormValue(p, -m_budget)
    if n.power_multiplicative:
        val = norm_eval(f, n)
        if val <= NormValue.one(p):
            return {"verdict": "yes", "certificate": "power-multiplicative norm with |f| <= 1", "norm": val}
        # |f^k| = p^(-k v) exceeds p^m first at k = floor(m / -v) + 1
        k = math.floor(Fraction(m_budget) / -val.v) + 1
        return {"verdict": "no", "witness_n": k, "witness_norm": val**k, "bound": bound}
    for k in range(1, n_max + 1):
        val = _power_norm(f, n, k)
        if val > bound:
            return {"verdict": "no", "witness_n": k, "witness_norm": val, "bound": bound}
    return {"verdict": "unknown", "checked_up_to": n_max, "bound": bound}


def _as_radius(p, r):
    if isinstance(r, NormValue):
        return r
    return NormValue(p, 0, Fraction(r))


def filtration_member(f: UntiltSeries, r, n: NormSpec, n_max: int = 64, mode: str = "uncompleted",
                      points=None) -> dict:
    """Is r^-k |f^k| bounded in k?

    "completed" applies only the spectral-interval rule.  "uncompleted" (default)
    first uses exact closed forms where they exist: power-multiplicative norms,
    and monomials under the weighted norm where |f^k| = |c|^k (k i + 1).
    """
    p = f.p
    r = _as_radius(p, r)
    if r.is_zero():
        raise ValueError("r must be positive")
    if f.is_zero():
        return {"verdict": "yes", "reason": "f = 0"}
    if mode == "uncompleted":
        if n.power_multiplicative:
            val = norm_eval(f, n)
            if val <= r:
                return {"verdict": "yes", "reason": "|f^k| = |f|^k <= r^k"}
            return {"verdict": "no", "reason": "r^-k |f|^k grows geometrically", "witness_n": 1,
                    "witness_ratio": val}
        if f.is_monomial():
            (q, (m,), _), = f.terms()
            c = NormValue(p, q)
            if c < r or (c == r and m == 0):
                return {"verdict": "yes", "reason": "r^-k |c|^k (k i + 1) is bounded"}
            if c == r:
                k = min(n_max, 8)
                seq = [int(m) * j + 1 for j in range(1, k + 1)]
                return {"verdict": "no", "reason": "r^-k |f^k| = k i + 1 is unbounded",
                        "witness_n": k, "witness_sequence": seq}
            return {"verdict": "no", "reason": "r^-k |c|^k grows geometrically", "witness_n": 1}
    elif mode != "completed":
        raise ValueError(f"unknown mode {mode!r}")
    rad = spectral_radius(f, n, n_max, points)
    if rad["hi"] <= r:
        return {"verdict": "yes", "reason": "spectral upper bound <= r", "interval": rad}
    if rad["lo"] > r:
        return {"verdict": "no", "reason": "spectral lower bound > r", "interval": rad}
    return {"verdict": "unknown", "interval": rad}


@dataclass(frozen=True)
class BanachAlgebra:
    norm: NormSpec
    nvars: int = 1
    completion_changed: bool = False

    @property
    def uniform(self):
        return self.norm.power_multiplicative


def uniformize(a: BanachAlgebra, strict: bool = False) -> BanachAlgebra:
    """Replace the norm by the spectral norm; the weighted algebra becomes the Gauss unit disk."""
    if a.norm.power_multiplicative:
        return a
    if strict:
        raise NotRepresentable("the uniformization of the weighted algebra has a different completion")
    return replace(a, norm=NormSpec.gauss(Cone.disk(nvars=a.nvars)), completion_changed=True)
