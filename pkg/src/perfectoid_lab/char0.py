"""The untilt side: digit algebras over K_{<=1} = Z_p[p^(1/p^inf)]^ (truncated).

An UntiltSeries is sum c * p^q * T^m with digits c in 1..p-1, known modulo
all terms with q >= prec.  Sums and products are carried base p: a digit
overflow at exponent q moves to q + 1 (at the same m), which realizes the
genuine characteristic-zero ring structure.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import _digits
from .charp import TiltSeries
from .cones import Cone, ConstraintSet, cone_closure  # noqa: F401  (re-exported)
from .errors import DomainMismatch, NoStabilization, PrecisionIndeterminate
from .exact import INF, NormValue, ceil_scaled, frac_str
from .series import DigitSeries


def _meet_cones(a, b):
    if a is None or b is None:
        return None
    return a.meet(b)


class UntiltSeries(DigitSeries):
    __slots__ = ("cone",)
    symbol = "p"

    def __init__(self, p, coeffs, prec, depth=0, laurent=(), cone=None, _normal=False):
        if prec is None or prec == INF:
            raise ValueError("untilt series need a finite precision")
        prec = Fraction(prec)
        if cone is not None:
            if len(laurent) not in (0, cone.nvars):
                raise DomainMismatch("cone and series have different variable counts")
            laurent = cone.laurent
        super().__init__(p, {}, prec, depth, laurent)
        self.cone = cone
        if _normal:
            self._d = coeffs
        else:
            self._d = _digits.carry(coeffs, p, self.scale, self._cutoff())
        for (q, m) in self._d:
            if len(m) != self.nvars:
                raise DomainMismatch("exponent vector has the wrong length")
        self._check_laurent()
        if cone is not None:
            S = self.scale
            for (q, m) in self._d:
                if not cone.contains(Fraction(q, S), [Fraction(x, S) for x in m]):
                    raise DomainMismatch(f"digit p^{frac_str(Fraction(q, S))} outside {cone}")

    # ---- constructors -----------------------------------------------------
    @classmethod
    def from_terms(cls, p, terms, prec, depth=None, laurent=None, cone=None):
        """terms: (q, m, c) with any integer c; carries are applied."""
        terms = list(terms)
        if laurent is None:
            if cone is not None:
                laurent = cone.laurent
            else:
                nvars = len(terms[0][1]) if terms else 0
                laurent = (False,) * nvars
        raw, depth = cls._scaled_terms(p, terms, depth, len(laurent))
        return cls(p, raw, prec, depth, laurent, cone)

    @classmethod
    def from_int(cls, p, n, prec, depth=0, laurent=(), cone=None):
        return cls(p, {(0, (0,) * len(laurent)): n} if n else {}, prec, depth, laurent, cone)

    @classmethod
    def zero(cls, p, prec, depth=0, laurent=(), cone=None):
        return cls(p, {}, prec, depth, laurent, cone)

    @classmethod
    def one(cls, p, prec, depth=0, laurent=(), cone=None):
        return cls.from_int(p, 1, prec, depth, laurent, cone)

    @classmethod
    def monomial(cls, p, q=0, m=(), c=1, prec=1, depth=None, laurent=None, cone=None):
        return cls.from_terms(p, [(q, tuple(m), c)], prec, depth, laurent, cone)

    def _new(self, coeffs, prec, depth=None, laurent=None, cone="same", normal=False):
        return UntiltSeries(
            self.p,
            coeffs,
            prec,
            self.depth if depth is None else depth,
            self.laurent if laurent is None else laurent,
            self.cone if cone == "same" else cone,
            _normal=normal,
        )

    # ---- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, int):
            return UntiltSeries.from_int(self.p, other, self.prec, self.depth, self.laurent)
        if isinstance(other, UntiltSeries):
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, depth, laurent = self._aligned(other)
        out = dict(a)
        for k, c in b.items():
            out[k] = out.get(k, 0) + c
        prec = min(self.prec, other.prec)
        return self._new(out, prec, depth, laurent, _meet_cones(self.cone, other.cone))

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self._d.items()}, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, depth, laurent = self._aligned(other)
        prec = min(self.prec, other.prec)
        cutoff = ceil_scaled(prec, self.p**depth)
        raw = _digits.convolve(a, b, cutoff)
        return self._new(raw, prec, depth, laurent, _meet_cones(self.cone, other.cone))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = UntiltSeries.one(self.p, self.prec, self.depth, self.laurent, self.cone)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def exact_mul(self, other):
        """Product of the stored representatives with no truncation.

        Digits are non-negative, so the carried product is a finite series.
        The precision of the result is just large enough to hold every digit.
        """
        a, b, depth, laurent = self._aligned(other)
        S = self.p**depth
        raw = _digits.convolve(a, b, None)
        d = _digits.carry(raw, self.p, S, None)
        top = max((q for q, _ in d), default=0)
        prec = max(Fraction(top + 1, S), self.prec + other.prec)
        return UntiltSeries(self.p, d, prec, depth, laurent, _meet_cones(self.cone, other.cone), _normal=True)

    def exact_pow(self, n: int):
        result = UntiltSeries.one(self.p, self.prec, self.depth, self.laurent, self.cone)
        for _ in range(n):
            result = result.exact_mul(self)
        return result

    def shift(self, i):
        """Multiply by p^i (i on the grid); the precision moves up by i as well."""
        i = Fraction(i)
        k = int(i * self.scale)
        if k != i * self.scale:
            raise DomainMismatch("shift off the exponent grid")
        d = {(q + k, m): c for (q, m), c in self._d.items()}
        return self._new(d, self.prec + i, cone=None, normal=True)

    # ---- views ----------------------------------------------------------------
    def truncate(self, prec):
        prec = min(self.prec, Fraction(prec))
        return self._new(dict(self._d), prec)

    def with_precision(self, prec):
        """The same digits read as a representative known to precision prec."""
        return self._new(dict(self._d), Fraction(prec))

    as_representative = with_precision

    def with_depth(self, depth):
        return self._new(self._lift_digits(depth), self.prec, depth, normal=True)

    def with_cone(self, cone):
        return self._new(dict(self._d), self.prec, cone=cone, normal=True)

    def valuation(self):
        if not self._d:
            raise PrecisionIndeterminate("zero at finite precision", bound=self.prec)
        return Fraction(min(q for q, _ in self._d), self.scale)

    def valuation_bound(self):
        """(v, exact): the valuation, or the precision as a lower bound for a zero series."""
        if not self._d:
            return self.prec, False
        return self.valuation(), True

    def __eq__(self, other):
        if isinstance(other, int):
            other = UntiltSeries.from_int(self.p, other, self.prec, self.depth, self.laurent)
        if not isinstance(other, UntiltSeries):
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


def untilt_ring_arith(a: UntiltSeries, b: UntiltSeries, op: str) -> UntiltSeries:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


# ---- the sharp map ------------------------------------------------------------

def teichmuller_int(c: int, p: int, k: int) -> int:
    """The Teichmuller lift of c mod p, reduced mod p^k (c^(p^(k-1)) is right mod p^k)."""
    return pow(c, p ** max(k - 1, 0), p**k)


def sharp_precision(tilt_prec, N, p):
    N = Fraction(N)
    if tilt_prec is None:
        return N
    n = math.ceil(N)
    return min([N] + [j + tilt_prec / p**j for j in range(n + 1)])


def sharp(x: TiltSeries, N, cone=None) -> UntiltSeries:
    """x^sharp modulo p^N.

    With n = ceil(N) this relabels the p^n-th root of x (t -> p) and raises it
    to the p^n-th power; two lifts of the same residue differ by a multiple of
    p, so their p^n-th powers agree modulo p^(n+1).
    """
    N = Fraction(N)
    if N <= 0:
        raise ValueError("target precision must be positive")
    p = x.p
    prec = sharp_precision(x.prec, N, p)
    if x.is_zero():
        return UntiltSeries.zero(p, prec, x.depth, x.laurent).with_cone(cone)
    if x.is_monomial():
        ((q, m), c), = x.raw_digits().items()
        k = math.ceil(prec) + 1
        coeff = 1 if c == 1 else teichmuller_int(c, p, k)
        out = UntiltSeries(p, {(q, m): coeff}, prec, x.depth, x.laurent)
        return out.with_cone(cone) if cone is not None else out
    n = math.ceil(N)
    y = x
    for _ in range(n):
        y = y.frobenius_inverse()
    z = UntiltSeries(p, y.raw_digits(), prec, y.depth, y.laurent)
    for _ in range(n):
        z = z**p
    return z.with_cone(cone) if cone is not None else z


def sharp_limit_check(a: TiltSeries, b: TiltSeries, N) -> dict:
    """Compare (a^(1/p^n)# + b^(1/p^n)#)^(p^n) with (a + b)# mod p^N for n = 0..ceil(N)."""
    N = Fraction(N)
    p = a.p
    top = math.ceil(N)
    depth = max(a.depth, b.depth) + 2 * top
    a, b = a.with_depth(depth), b.with_depth(depth)
    target = sharp(a + b, N)
    stages = []
    an, bn = a, b
    for n in range(top + 1):
        s = sharp(an, N) + sharp(bn, N)
        for _ in range(n):
            s = s**p
        stages.append(s)
        an, bn = an.frobenius_inverse(), bn.frobenius_inverse()
    P = min([target.prec] + [s.prec for s in stages])
    matches = [s.eq_at(target, P) for s in stages]
    if top >= 1 and not stages[top - 1].eq_at(stages[top], P):
        raise NoStabilization(f"stages {top - 1} and {top} disagree mod p^{P}")
    if not matches[top]:
        raise NoStabilization(f"stage {top} does not reproduce (a+b)# mod p^{P}")
    stab = top
    while stab > 0 and matches[stab - 1]:
        stab -= 1

    def tv(x):
        try:
            return x.valuation(), True
        except PrecisionIndeterminate as e:
            return e.bound, False

    va, vb, vab = tv(a), tv(b), tv(a + b)
    ultrametric = (not vab[1]) or vab[0] >= min(va[0], vb[0])
    return {
        "precision": P,
        "stabilization_stage": stab,
        "stage_matches": matches,
        "stage_valuations": [s.valuation_bound() for s in stages],
        "target": target,
        "ultrametric": ultrametric,
        "ok": ultrametric,
    }


# ---- the mod-p bridge ----------------------------------------------------------

def mod_omega_bridge(x, direction: str = "reduce", prec=1):
    """reduce: R -> R/p ~ R^flat/t (digits with q >= 1 vanish); lift: the digit representative."""
    if direction == "reduce":
        if not isinstance(x, UntiltSeries):
            raise DomainMismatch("reduce takes an untilt series")
        S = x.scale
        d = {}
        for (q, m), c in x.raw_digits().items():
            if q < 0:
                raise DomainMismatch("reduce needs digits with q >= 0")
            if q < S:
                d[(q, m)] = c
        return TiltSeries(x.p, d, min(Fraction(1), x.prec), x.depth, x.laurent)
    if direction == "lift":
        if not isinstance(x, TiltSeries):
            raise DomainMismatch("lift takes a tilt series")
        S = x.scale
        d = {k: c for k, c in x.raw_digits().items() if k[0] < S}
        return UntiltSeries(x.p, d, prec, x.depth, x.laurent, _normal=Fraction(prec) >= 1)
    raise ValueError(f"unknown direction {direction!r}")


def pth_root_mod_p(x: UntiltSeries) -> UntiltSeries:
    """The unique y mod p^(1/p) with y^p = x mod p: digits q < 1 relabeled (q, m) -> (q/p, m/p)."""
    p = x.p
    S = x.scale
    d = {}
    for (q, m), c in x.raw_digits().items():
        if q < S:
            d[(q, m)] = c  # same integers read on a grid one level finer
    cone = x.cone if (x.cone is not None and x.cone.perfectoid) else None
    return UntiltSeries(p, d, Fraction(1, p), x.depth + 1, x.laurent, cone, _normal=True)


# ---- norms and cones -------------------------------------------------------------

def lattice_norm(x: UntiltSeries, cone: Cone | None = None) -> NormValue:
    """|x| = p^-v with v = min over digits of q + g(m), g the cone's support function.

    The cone defaults to the one carried by x; passing it explicitly allows
    elements outside the unit ball (e.g. T^-1 on an annulus).
    """
    cone = cone or x.cone
    if cone is None:
        raise DomainMismatch("lattice_norm needs a cone")
    if x.is_zero():
        return NormValue.zero(x.p)
    vals = [q + cone.g(m) for q, m, _ in x.terms()]
    if -INF in vals:
        raise DomainMismatch("series has a negative power of a non-Laurent variable")
    return NormValue(x.p, min(vals))


def cone_from_norm(norm, p, cone_shape: Cone) -> Cone:
    """Recover the interval data of a cone from norm evaluations on T_j and T_j^-1."""
    ivs = []
    n = cone_shape.nvars
    for j, lf in enumerate(cone_shape.laurent):
        e = [0] * n
        e[j] = 1
        s_lo = norm(UntiltSeries.monomial(p, 0, e, prec=1, laurent=cone_shape.laurent)).v
        if lf:
            e[j] = -1
            s_hi = -norm(UntiltSeries.monomial(p, 0, e, prec=1, laurent=cone_shape.laurent)).v
        else:
            s_hi = INF
        ivs.append((s_lo, s_hi))
    return Cone(tuple(ivs), cone_shape.perfectoid)


def cone_tensor(U: Cone, W: Cone, Z: Cone) -> Cone:
    """Completed tensor of toric localizations: the cone of the region intersection."""
    for X in (U, W):
        for (a, b), (c, d) in zip(X.intervals, Z.intervals):
            if a < c or b > d:
                raise DomainMismatch("tensor factors must be regions inside the base region")
    return U.meet(W)
