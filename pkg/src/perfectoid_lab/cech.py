"""Cech complexes of toric covers of the perfectoid disk, and the perfectoid torus complex.

Every module in a toric Cech complex is a cone algebra, and the restriction
maps send p^q T^m to itself.  So the complex splits by monomial m, and in
monomial m it is a complex of rank-one modules p^{t_I} O with t_I = -g_I(m).
Its cohomology over O is read off from the persistence of the sublevel
complexes {I : t_I <= q} over F_p: a bar [b, d) in degree r is a torsion
summand O/p^(d-b), an infinite bar is a free summand p^b O.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .char0 import UntiltSeries, cone_tensor
from .cones import Cone
from .errors import DomainMismatch, EmptyIntersection
from .exact import INF, frac_str, rat_json


@dataclass(frozen=True)
class ToricCover:
    ambient: Cone
    pieces: tuple

    def __post_init__(self):
        (lo, hi), = self.ambient.intervals
        ivs = sorted(c.intervals[0] for c in self.pieces)
        cur = lo
        for a, b in ivs:
            if a > cur:
                raise DomainMismatch(f"pieces leave the gap ({frac_str(cur)}, {frac_str(a)})")
            cur = max(cur, b)
        if cur != hi or ivs[0][0] != lo:
            raise DomainMismatch("pieces do not cover the ambient region exactly")

    @classmethod
    def from_breakpoints(cls, breakpoints, ambient=None, perfectoid=True):
        """Pieces [s_1, s_2], ..., [s_k, hi]; s_1 must be the ambient lower end."""
        ambient = ambient or Cone.disk(perfectoid=perfectoid)
        (lo, hi), = ambient.intervals
        bps = [Fraction(b) for b in breakpoints]
        if any(b >= c for b, c in zip(bps, bps[1:])):
            raise DomainMismatch("breakpoints must be strictly increasing")
        if not bps or bps[0] != lo or bps[-1] > hi:
            raise DomainMismatch("breakpoints must start at the ambient lower end")
        ends = bps[1:] + [hi]
        return cls(ambient, tuple(Cone(((a, b),), perfectoid) for a, b in zip(bps, ends)))

    @property
    def p_free(self):
        return self.ambient.perfectoid


def _threshold(cone: Cone, m):
    g = cone.g((m,))
    return INF if g == -INF else -g


@dataclass
class CechComplex:
    p: int
    cover: ToricCover
    prec: Fraction
    depth: int
    cells: dict  # degree r -> list of (I, cone) for nonempty (r+1)-fold intersections
    dd_checked: int = 0

    @property
    def top_degree(self):
        return max(self.cells)

    def describe(self):
        out = [{"degree": -1, "modules": [str(self.cover.ambient)]}]
        for r in sorted(self.cells):
            out.append({"degree": r, "modules": [f"{list(I)}: {c}" for I, c in self.cells[r]]})
        return out

    def cone_of(self, I):
        for J, c in self.cells[len(I) - 1]:
            if J == I:
                return c
        return None

    def apply_d(self, r, elem: dict) -> dict:
        """(dc)_J = sum_k (-1)^k c_{J minus j_k}; r = -1 is the augmentation."""
        out = {}
        if r == -1:
            (x,) = elem.values()
            for I, c in self.cells[0]:
                out[I] = x.with_cone(c)
            return out
        for J, cone in self.cells.get(r + 1, []):
            total = None
            for k in range(len(J)):
                I = J[:k] + J[k + 1:]
                if I not in elem:
                    continue
                term = elem[I].with_cone(cone)
                if k % 2:
                    term = -term
                total = term if total is None else total + term
            if total is not None:
                out[J] = total.with_cone(cone)
        return out


def _generator_sample(cx, r, ms):
    """Monomial generators p^q T^m with q the least grid point above the threshold."""
    S = cx.p**cx.depth
    cells = [((), cx.cover.ambient)] if r == -1 else cx.cells[r]
    for I, cone in cells:
        for m in ms:
            t = _threshold(cone, m)
            if t == INF:
                continue
            q = Fraction(math.ceil(t * S), S)
            if q >= cx.prec:
                continue
            yield {I: UntiltSeries.monomial(cx.p, q, (m,), prec=cx.prec, depth=cx.depth, cone=cone)}


def build_cech(cover: ToricCover, prec=2, depth=2, p=2, check_ms=None) -> CechComplex:
    n = len(cover.pieces)
    cells = {}
    for r in range(n):
        for I in itertools.combinations(range(n), r + 1):
            cone = cover.pieces[I[0]]
            try:
                for j in I[1:]:
                    cone = cone_tensor(cone, cover.pieces[j], cover.ambient)
            except EmptyIntersection:
                continue
            cells.setdefault(r, []).append((I, cone))
    cx = CechComplex(p, cover, Fraction(prec), depth, cells)
    S = p**depth
    ms = check_ms if check_ms is not None else [Fraction(k, S) for k in (-S - 1, -1, 0, 1, S + 1)]
    checked = 0
    for r in [-1] + sorted(cells):
        if r + 2 > max(cells):
            continue
        for gen in _generator_sample(cx, r, ms):
            dd = cx.apply_d(r + 1, cx.apply_d(r, gen))
            if any(not v.is_zero() for v in dd.values()):
                raise AssertionError("d o d != 0")
            checked += 1
    cx.dd_checked = checked
    return cx


# ---- per-monomial persistence ------------------------------------------------------

def persistence_bars(cells, p):
    """cells: list of (I, t).  Returns bars (degree, birth, death) with death INF for free."""
    order = sorted(range(len(cells)), key=lambda k: (cells[k][1], -len(cells[k][0])))
    pos = {cells[k][0]: i for i, k in enumerate(order)}
    cols = []
    for k in order:
        I, _ = cells[k]
        col = {}
        # coboundary of I: supersets J with one extra index, sign from the insertion slot
        for J in pos:
            if len(J) == len(I) + 1 and set(I) <= set(J):
                slot = next(i for i, j in enumerate(J) if j not in I)
                col[pos[J]] = (-1) ** slot % p
        cols.append(col)
    low_of = {}
    paired = set()
    bars = []
    for i, col in enumerate(cols):
        while col:
            low = max(col)
            if low not in low_of:
                break
            other = cols[low_of[low]]
            f = col[low] * pow(other[low], -1, p) % p
            for r, v in other.items():
                nv = (col.get(r, 0) - f * v) % p
                if nv:
                    col[r] = nv
                else:
                    col.pop(r, None)
        if col:
            low = max(col)
            low_of[low] = i
            paired.add(low)
            paired.add(i)
            J, tJ = cells[order[low]]
            I, tI = cells[order[i]]
            if tI > tJ:
                bars.append((len(J) - 1, tJ, tI))
    for i in range(len(cols)):
        if i not in paired:
            I, t = cells[order[i]]
            bars.append((len(I) - 1, t, INF))
    return bars


@dataclass
class CohomologyReport:
    p: int
    prec: Fraction
    depth: int
    m_bound: Fraction
    ambient: Cone
    h0_free: dict = field(default_factory=dict)  # m -> birth of the degree-0 free bar
    summands: list = field(default_factory=list)  # (degree, m, kind, exponent, truncated)
    h0_cone: Cone | None = None

    def torsion(self, degree=None):
        return [s for s in self.summands if s[2] == "torsion" and (degree is None or s[0] == degree)]

    def records(self):
        out = [{"degree": 0, "monomial": rat_json(m), "kind": "free", "exponent": rat_json(b)}
               for m, b in sorted(self.h0_free.items())]
        for deg, m, kind, e, trunc in self.summands:
            rec = {"degree": deg, "monomial": rat_json(m), "kind": kind, "exponent": rat_json(e)}
            if trunc:
                rec["truncated"] = True
            out.append(rec)
        return out

    def to_json(self):
        return {
            "p": self.p,
            "precision": rat_json(self.prec),
            "depth": self.depth,
            "monomial_bound": rat_json(self.m_bound),
            "h0_cone": None if self.h0_cone is None else self.h0_cone.to_json(),
            "records": self.records(),
        }


def monomial_cells(cx: CechComplex, m):
    out = []
    for r in sorted(cx.cells):
        for I, cone in cx.cells[r]:
            t = _threshold(cone, m)
            if t != INF:
                out.append((I, t))
    return out


def cohomology(cx: CechComplex, prec=None, m_bound=2) -> CohomologyReport:
    """Per-monomial cohomology for m in p^-depth Z with |m| <= m_bound, cut at prec."""
    prec = cx.prec if prec is None else Fraction(prec)
    S = cx.p**cx.depth
    K = int(Fraction(m_bound) * S)
    rep = CohomologyReport(cx.p, prec, cx.depth, Fraction(m_bound), cx.cover.ambient)
    h0_ok = True
    for k in range(-K, K + 1):
        m = Fraction(k, S)
        amb = _threshold(cx.cover.ambient, m)
        for deg, b, d in persistence_bars(monomial_cells(cx, m), cx.p):
            if b >= prec:
                continue
            if d == INF:
                if deg == 0:
                    if m in rep.h0_free:
                        h0_ok = False
                    rep.h0_free[m] = b
                else:
                    rep.summands.append((deg, m, "free", b, False))
            else:
                rep.summands.append((deg, m, "torsion", min(d, prec) - b, d > prec))
        if (amb < prec) != (m in rep.h0_free) or (m in rep.h0_free and rep.h0_free[m] != amb):
            h0_ok = False
    if h0_ok:
        rep.h0_cone = cx.cover.ambient
    rep.summands.sort(key=lambda s: (s[0], s[1]))
    return rep


# ---- the perfectoid torus ------------------------------------------------------------

def cyclotomic_valuation(p, n):
    """v(1 - zeta) for zeta a primitive p^n-th root of unity: 1 / phi(p^n)."""
    if n == 0:
        return INF
    return Fraction(1, p ** (n - 1) * (p - 1))


@dataclass
class TorusReport:
    p: int
    n_max: int
    bound: Fraction
    prec: Fraction
    entries: list  # (i, v_i, h0_rank, h1_kind, h1_exponent)

    def records(self, integral=None):
        out = []
        for i, v, h0, kind, e in self.entries:
            if integral is not None and (i.denominator == 1) != integral:
                continue
            if h0:
                out.append({"degree": 0, "index": rat_json(i), "kind": "free", "exponent": rat_json(0)})
            rec = {"degree": 1, "index": rat_json(i), "kind": kind, "exponent": rat_json(e)}
            out.append(rec)
        return out

    def summands(self, integral=None):
        return [
            (1, i, kind, e, False)
            for i, v, h0, kind, e in self.entries
            if integral is None or (i.denominator == 1) == integral
        ]

    def to_json(self):
        return {
            "p": self.p,
            "n_max": self.n_max,
            "bound": rat_json(self.bound),
            "precision": rat_json(self.prec),
            "entries": [
                {"index": rat_json(i), "v": rat_json(v), "h0_rank": h0, "h1": kind,
                 "h1_exponent": rat_json(e)}
                for i, v, h0, kind, e in self.entries
            ],
        }


def torus_perfectoid_complex(p, n_max, B, prec=2) -> TorusReport:
    """Summands O T^i -> O T^i, T^i -> (1 - eps^i) T^i, for i in p^-n Z, n <= n_max, |i| <= B."""
    B, prec = Fraction(B), Fraction(prec)
    S = p**n_max
    entries = []
    for k in range(-int(B * S), int(B * S) + 1):
        i = Fraction(k, S)
        n = 0
        d = i.denominator
        while d > 1:
            d //= p
            n += 1
        v = cyclotomic_valuation(p, n)
        if v == INF:
            entries.append((i, v, 1, "free", Fraction(0)))
        else:
            entries.append((i, v, 0, "torsion", min(v, prec)))
    return TorusReport(p, n_max, B, prec, entries)


# ---- almost exactness ----------------------------------------------------------------

def almost_exactness(report, eps=0, v_omega=None, integral=None) -> dict:
    """Supremum of torsion exponents per positive degree, in valuation and omega units."""
    eps = Fraction(eps)
    if isinstance(report, TorusReport):
        summands = report.summands(integral)
        p = report.p
    elif report is None:
        summands, p = [], None
    else:
        summands, p = report.summands, report.p
    vw = Fraction(v_omega) if v_omega is not None else (Fraction(1, p) if p else None)
    sup, free = {}, {}
    for deg, _, kind, e, _ in summands:
        if deg <= 0:
            continue
        if kind == "free":
            free[deg] = free.get(deg, 0) + 1
        else:
            sup[deg] = max(sup.get(deg, Fraction(0)), e)
    e = max(sup.values(), default=Fraction(0))
    if free:
        verdict = "not-almost-exact"
    elif e == 0:
        verdict = "exact"
    else:
        verdict = "killed-by"
    out = {
        "verdict": verdict,
        "sup_by_degree": {d: sup[d] for d in sorted(sup)},
        "free_by_degree": free,
        "exponent": e,
        "within_eps": e <= eps,
    }
    if verdict == "killed-by" and vw:
        out["omega_exponent"] = e / vw
    return out
