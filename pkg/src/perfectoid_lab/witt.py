"""Truncated p-typical Witt vectors over perfect rings, delta, and theta.

Witt vectors are stored in Witt coordinates.  Sums and products come from the
universal polynomials S_n, P_n, obtained over Z from the ghost recursion and
reduced mod p before being evaluated in the base ring.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from fractions import Fraction

from .charp import TiltSeries
from .errors import CeilingExceeded, DomainMismatch, NotDivisible
from .exact import frac_str

_BITS = 16
_SLOTS = 6  # X_0..X_5 then Y_0..Y_5
_MASK = (1 << _BITS) - 1
DEFAULT_CEILING = 5
DEFAULT_TERM_BUDGET = 500_000
WORK_FACTOR = 20


def _xvar(i):
    return {1 << (_BITS * i): 1}


def _yvar(i):
    return {1 << (_BITS * (_SLOTS + i)): 1}


def unpack(key: int, nslots: int = 2 * _SLOTS):
    return tuple((key >> (_BITS * s)) & _MASK for s in range(nslots))


def _mul(a: dict, b: dict, budget: int) -> dict:
    # products that collapse heavily still cost len(a) * len(b) steps
    if len(a) * len(b) > WORK_FACTOR * budget:
        raise CeilingExceeded(f"product of {len(a)} x {len(b)} terms exceeds the work budget {WORK_FACTOR * budget}")
    out = {}
    get = out.get
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
        if len(out) > budget:
            raise CeilingExceeded(f"intermediate polynomial exceeds {budget} terms")
    return {k: c for k, c in out.items() if c}


def _add(a: dict, b: dict, scale: int = 1) -> dict:
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) + scale * c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _pow(a: dict, e: int, budget: int) -> dict:
    result = {0: 1}
    base = a
    while e:
        if e & 1:
            result = _mul(result, base, budget)
        e >>= 1
        if e:
            base = _mul(base, base, budget)
    return result


def ghost(p: int, zs, n: int, budget: int = DEFAULT_TERM_BUDGET) -> dict:
    """w_n(Z) = sum_{i<=n} p^i Z_i^(p^(n-i)) for polynomial arguments Z_i."""
    out = {}
    for i in range(n + 1):
        out = _add(out, _pow(zs[i], p ** (n - i), budget), p**i)
    return out


@dataclass
class UnivWittPolys:
    p: int
    n: int
    S: list
    P: list

    def poly(self, kind: str, k: int) -> dict:
        return (self.S if kind == "S" else self.P)[k]

    def pretty(self, kind: str, k: int) -> str:
        return format_poly(self.poly(kind, k))


_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def univ_witt_polys(p: int, n: int, ceiling: int = DEFAULT_CEILING, term_budget: int = DEFAULT_TERM_BUDGET):
    """S_k, P_k for k <= n by the ghost recursion, memoized per prime."""
    if n > ceiling or n >= _SLOTS:
        raise CeilingExceeded(f"level {n} is above the ceiling {min(ceiling, _SLOTS - 1)}")
    with _CACHE_LOCK:
        S, P = _CACHE.setdefault(p, ([], []))
        X = [_xvar(i) for i in range(n + 1)]
        Y = [_yvar(i) for i in range(n + 1)]
        for k in range(len(S), n + 1):
            gx, gy = ghost(p, X, k, term_budget), ghost(p, Y, k, term_budget)
            targets = {"S": _add(gx, gy), "P": _mul(gx, gy, term_budget)}
            new = {}
            for kind, known in (("S", S), ("P", P)):
                t = targets[kind]
                for i in range(k):
                    t = _add(t, _pow(known[i], p ** (k - i), term_budget), -(p**i))
                pk = p**k
                q = {}
                for key, c in t.items():
                    if c % pk:
                        raise AssertionError("ghost recursion is not integral")
                    q[key] = c // pk
                new[kind] = q
            S.append(new["S"])
            P.append(new["P"])
        return UnivWittPolys(p, n, list(S[: n + 1]), list(P[: n + 1]))


def ghost_identity_holds(p: int, n: int, term_budget: int = DEFAULT_TERM_BUDGET) -> bool:
    """Check w_n(S) = w_n(X) + w_n(Y) and w_n(P) = w_n(X) w_n(Y) exactly over Z."""
    polys = univ_witt_polys(p, n, term_budget=term_budget)
    X = [_xvar(i) for i in range(n + 1)]
    Y = [_yvar(i) for i in range(n + 1)]
    gx, gy = ghost(p, X, n, term_budget), ghost(p, Y, n, term_budget)
    ok_s = ghost(p, polys.S, n, term_budget) == _add(gx, gy)
    ok_p = ghost(p, polys.P, n, term_budget) == _mul(gx, gy, term_budget)
    return ok_s and ok_p


def format_poly(poly: dict) -> str:
    names = [f"X_{i}" for i in range(_SLOTS)] + [f"Y_{i}" for i in range(_SLOTS)]
    parts = []
    for key in sorted(poly, key=lambda k: unpack(k)[::-1]):
        c = poly[key]
        mono = "*".join(
            name if e == 1 else f"{name}^{e}" for name, e in zip(names, unpack(key)) if e
        )
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


# ---- perfect base rings ---------------------------------------------------------

class FpBase:
    """The prime field F_p; Frobenius is the identity."""

    def __init__(self, p: int):
        self.p = p
        self._compiled = {}

    def descriptor(self):
        return {"kind": "F_p", "p": self.p}

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def frob(self, a):
        return a

    def root(self, a):
        return a

    def is_unit(self, a):
        return a % self.p != 0

    def is_zero(self, a):
        return a % self.p == 0

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def random(self, rng):
        return rng.randrange(self.p)

    def compile(self, poly: dict, key):
        """Reduce mod p and fold exponents with x^p = x (valid for every x in F_p)."""
        if key in self._compiled:
            return self._compiled[key]
        p = self.p
        merged = {}
        for k, c in poly.items():
            c %= p
            if not c:
                continue
            exps = unpack(k)
            red = tuple(0 if e == 0 else (e - 1) % (p - 1) + 1 for e in exps)
            merged[red] = (merged.get(red, 0) + c) % p
        terms = [(c, [(v, e) for v, e in enumerate(exps) if e]) for exps, c in merged.items() if c]
        self._compiled[key] = terms
        return terms

    def evaluate(self, terms, values):
        p = self.p
        total = 0
        for c, factors in terms:
            t = c
            for v, e in factors:
                x = values[v]
                if not x:
                    t = 0
                    break
                t = t * pow(x, e, p) % p
            total += t
        return total % p


class TiltBase:
    """Perfect tilt-side digit rings F_p[t^(1/p^inf)][T...] truncated at t^prec."""

    def __init__(self, p: int, depth: int, prec=None, laurent=()):
        self.p = p
        self.depth = depth
        self.prec = prec
        self.laurent = tuple(laurent)
        self._compiled = {}

    def descriptor(self):
        return {
            "kind": "tilt",
            "p": self.p,
            "depth": self.depth,
            "precision": "inf" if self.prec is None else frac_str(self.prec),
            "laurent": list(self.laurent),
        }

    def _lift(self, x):
        if isinstance(x, int):
            return TiltSeries.one(self.p, self.prec, self.depth, self.laurent) * x
        if x.depth < self.depth:
            x = x.with_depth(self.depth)
        return x

    def zero(self):
        return TiltSeries.zero(self.p, self.prec, self.depth, self.laurent)

    def one(self):
        return TiltSeries.one(self.p, self.prec, self.depth, self.laurent)

    def from_int(self, n):
        return self.one() * (n % self.p)

    def add(self, a, b):
        return self._lift(a) + self._lift(b)

    def mul(self, a, b):
        return self._lift(a) * self._lift(b)

    def neg(self, a):
        return -self._lift(a)

    def frob(self, a):
        return self._lift(a).frobenius()

    def root(self, a):
        return self._lift(a).frobenius_inverse()

    def is_unit(self, a):
        return self._lift(a).is_unit()

    def is_zero(self, a):
        return self._lift(a).is_zero()

    def eq(self, a, b):
        return (self._lift(a) - self._lift(b)).is_zero()

    def random(self, rng, terms=2, qmax=2, qdepth=1):
        """A random element with few digits and exponents on the p^-qdepth grid."""
        den = self.p**qdepth
        out = self.zero()
        for _ in range(rng.randint(0, terms)):
            q = Fraction(rng.randrange(qmax * den), den)
            m = tuple(rng.randrange(2) for _ in self.laurent)
            out = out + TiltSeries.monomial(self.p, q, m, rng.randrange(1, self.p), self.prec, self.depth, self.laurent)
        return out

    def compile(self, poly: dict, key):
        if key in self._compiled:
            return self._compiled[key]
        terms = []
        for k, c in poly.items():
            c %= self.p
            if c:
                terms.append((c, [(v, e) for v, e in enumerate(unpack(k)) if e]))
        self._compiled[key] = terms
        return terms

    def evaluate(self, terms, values):
        powers = {}
        total = self.zero()
        for c, factors in terms:
            if any(values[v].is_zero() for v, _ in factors):
                continue
            t = None
            for v, e in factors:
                if (v, e) not in powers:
                    powers[(v, e)] = values[v] ** e
                t = powers[(v, e)] if t is None else t * powers[(v, e)]
            if t is None:
                t = self.one()
            total = total + t * c
        return total


# ---- Witt vectors -------------------------------------------------------------

class WittVec:
    __slots__ = ("base", "coords")

    def __init__(self, base, coords):
        self.base = base
        self.coords = tuple(base._lift(c) if isinstance(base, TiltBase) else base.from_int(c) for c in coords)

    @property
    def length(self):
        return len(self.coords)

    @property
    def p(self):
        return self.base.p

    # constructors
    @classmethod
    def zero(cls, base, N):
        return cls(base, [base.zero()] * N)

    @classmethod
    def teichmuller(cls, base, a, N):
        return cls(base, [a] + [base.zero()] * (N - 1))

    @classmethod
    def from_int(cls, base, n, N):
        one = cls.teichmuller(base, base.one(), N)
        result = cls.zero(base, N)
        acc, k = one, abs(n)
        while k:
            if k & 1:
                result = result + acc
            k >>= 1
            if k:
                acc = acc + acc
        return -result if n < 0 else result

    def _check(self, other):
        if not isinstance(other, WittVec) or other.base is not self.base and other.base.descriptor() != self.base.descriptor():
            raise DomainMismatch("Witt vectors over different bases")
        if other.length != self.length:
            raise DomainMismatch("Witt vectors of different lengths")

    def _apply(self, kind, other):
        N = self.length
        polys = univ_witt_polys(self.p, N - 1)
        values = [None] * (2 * _SLOTS)
        for i in range(N):
            values[i] = self.coords[i]
            values[_SLOTS + i] = other.coords[i]
        out = []
        for k in range(N):
            terms = self.base.compile(polys.poly(kind, k), (kind, k))
            out.append(self.base.evaluate(terms, values))
        return WittVec(self.base, out)

    def __add__(self, other):
        self._check(other)
        return self._apply("S", other)

    def __mul__(self, other):
        self._check(other)
        return self._apply("P", other)

    def __neg__(self):
        """Solve S_k(x, y) = 0 coordinate by coordinate: y_k = -x_k - C_k(x_<k, y_<k)."""
        N = self.length
        B = self.base
        polys = univ_witt_polys(self.p, N - 1)
        values = [B.zero()] * (2 * _SLOTS)
        ys = []
        for k in range(N):
            values[k] = self.coords[k]
            values[_SLOTS + k] = B.zero()
            xk = self.coords[k]
            # C_k = S_k - X_k - Y_k evaluated with y_k = 0, x_k = 0
            values[k] = B.zero()
            terms = B.compile(polys.poly("S", k), ("S", k))
            c = B.evaluate(terms, values)
            values[k] = xk
            yk = B.neg(B.add(xk, c))
            ys.append(yk)
            values[_SLOTS + k] = yk
        return WittVec(B, ys)

    def __sub__(self, other):
        return self + (-other)

    def __pow__(self, n: int):
        result = WittVec.from_int(self.base, 1, self.length)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, WittVec) or other.length != self.length:
            return NotImplemented
        return all(self.base.eq(a, b) for a, b in zip(self.coords, other.coords))

    __hash__ = None

    def frobenius(self):
        return WittVec(self.base, [self.base.frob(c) for c in self.coords])

    def verschiebung(self):
        return WittVec(self.base, [self.base.zero()] + list(self.coords[:-1]))

    def divide_by_p(self):
        """Inverse of p = F o V: (0, y_1, y_2, ...) -> (y_1^(1/p), y_2^(1/p), ...), one shorter."""
        if not self.base.is_zero(self.coords[0]):
            raise NotDivisible("coordinate 0 is nonzero")
        return WittVec(self.base, [self.base.root(c) for c in self.coords[1:]])

    def truncate(self, N):
        return WittVec(self.base, self.coords[:N])

    def __repr__(self):
        def show(c):
            return c.to_expr() if hasattr(c, "to_expr") else str(c)

        return f"WittVec({', '.join(show(c) for c in self.coords)})"

    def to_json(self):
        def enc(c):
            return c.to_json() if hasattr(c, "to_json") else c

        return {"base": self.base.descriptor(), "length": self.length, "coords": [enc(c) for c in self.coords]}


def witt_arith(x: WittVec, y: WittVec | None, op: str) -> WittVec:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    raise ValueError(f"unknown op {op!r}")


def witt_frobenius(x: WittVec) -> WittVec:
    return x.frobenius()


def witt_verschiebung(x: WittVec) -> WittVec:
    return x.verschiebung()


def delta(x: WittVec) -> WittVec:
    """delta(x) = (phi(x) - x^p) / p, of length N - 1."""
    return (x.frobenius() - x ** x.p).divide_by_p()


def teich_expansion(x: WittVec) -> list:
    """Digits a_i with x = sum [a_i] p^i, by subtracting [a_0] and dividing by p repeatedly."""
    digits = []
    cur = x
    while cur.length:
        a = cur.coords[0]
        digits.append(a)
        rest = cur - WittVec.teichmuller(cur.base, a, cur.length)
        cur = rest.divide_by_p()
    return digits


def is_distinguished(x: WittVec):
    """(answer, certificate): x is distinguished iff its Teichmuller digit a_1 is a unit."""
    if x.length < 2:
        raise DomainMismatch("need length >= 2 to read the digit a_1")
    digits = teich_expansion(x)
    a1 = digits[1]
    return x.base.is_unit(a1), {"a1": a1, "digits": digits}


def theta(x: WittVec, N=None):
    """theta(x) = sum a_i^sharp p^i over the Teichmuller digits, modulo p^N."""
    from .char0 import UntiltSeries, sharp

    if not isinstance(x.base, TiltBase):
        raise DomainMismatch("theta needs the tilt-side base")
    N = x.length if N is None else N
    digits = teich_expansion(x)
    p = x.p
    total = UntiltSeries.zero(p, N, x.base.depth, x.base.laurent)
    for i, a in enumerate(digits[: int(N)]):
        if N - i <= 0 or a.is_zero():
            continue
        total = total + sharp(a, N - i).shift(i)
    return total.truncate(N)


def random_witt(base, N, rng: random.Random):
    return WittVec(base, [base.random(rng) for _ in range(N)])
