"""Expression grammar for ring elements.

    expr     := term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('^' '(' rational ')')?
    atom     := unsigned-integer | 'p' | 't' | 'T' | 'S' | 'U' | '(' expr ')'
    rational := integer ('/' positive-integer)?

Whitespace is ignored.  Values are built as exact integer combinations of
monomials p^q * T^m (or t^q * T^m) and normalized by the series constructor.
"""

from __future__ import annotations

from fractions import Fraction

from ..char0 import UntiltSeries
from ..charp import TiltSeries
from ..errors import ExprSyntaxError, InvalidExponent, SideMismatch
from ..exact import pden_exp

VARS = ("T", "S", "U")


class _Poly:
    """dict (q, m-tuple) -> int with m padded to 3 variables."""

    __slots__ = ("d",)

    def __init__(self, d):
        self.d = {k: c for k, c in d.items() if c}

    @classmethod
    def const(cls, n):
        return cls({(Fraction(0), (Fraction(0),) * 3): n})

    @classmethod
    def mono(cls, q=0, j=None):
        m = [Fraction(0)] * 3
        if j is not None:
            m[j] = Fraction(1)
        return cls({(Fraction(q), tuple(m)): 1})

    def __add__(self, o):
        d = dict(self.d)
        for k, c in o.d.items():
            d[k] = d.get(k, 0) + c
        return _Poly(d)

    def __neg__(self):
        return _Poly({k: -c for k, c in self.d.items()})

    def __mul__(self, o):
        d = {}
        for (q1, m1), a in self.d.items():
            for (q2, m2), b in o.d.items():
                k = (q1 + q2, tuple(x + y for x, y in zip(m1, m2)))
                d[k] = d.get(k, 0) + a * b
        return _Poly(d)

    def power(self, r: Fraction, pos):
        if r.denominator == 1 and r >= 0:
            out = _Poly.const(1)
            for _ in range(int(r)):
                out = out * self
            return out
        if len(self.d) == 1:
            ((q, m), c), = self.d.items()
            if c == 1:
                return _Poly({(q * r, tuple(x * r for x in m)): 1})
        raise InvalidExponent(f"exponent {r} needs a monomial base (position {pos})")


class _Parser:
    def __init__(self, src, side):
        self.s = src
        self.i = 0
        self.side = side
        self._skip()

    def _skip(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self):
        return self.s[self.i] if self.i < len(self.s) else ""

    def take(self, ch):
        if self.peek() != ch:
            raise ExprSyntaxError(f"expected {ch!r}", self.i)
        self.i += 1
        self._skip()

    def integer(self, signed=False):
        start = self.i
        if signed and self.peek() == "-":
            self.i += 1
        j = self.i
        while self.i < len(self.s) and self.s[self.i].isdigit():
            self.i += 1
        if self.i == j:
            raise ExprSyntaxError("expected an integer", start)
        val = int(self.s[start:self.i])
        self._skip()
        return val

    def rational(self):
        num = self.integer(signed=True)
        if self.peek() == "/":
            self.take("/")
            pos = self.i
            den = self.integer()
            if den == 0:
                raise ExprSyntaxError("zero denominator", pos)
            return Fraction(num, den)
        return Fraction(num)

    def expr(self):
        val = self.term()
        while self.peek() in ("+", "-"):
            op = self.peek()
            self.take(op)
            rhs = self.term()
            val = val + rhs if op == "+" else val + (-rhs)
        return val

    def term(self):
        val = self.factor()
        while self.peek() == "*":
            self.take("*")
            val = val * self.factor()
        return val

    def factor(self):
        val = self.atom()
        if self.peek() == "^":
            self.take("^")
            self.take("(")
            pos = self.i
            r = self.rational()
            self.take(")")
            val = val.power(r, pos)
        return val

    def atom(self):
        ch = self.peek()
        pos = self.i
        if ch.isdigit():
            return _Poly.const(self.integer())
        if ch == "(":
            self.take("(")
            val = self.expr()
            self.take(")")
            return val
        if ch in ("p", "t"):
            if (ch == "p") != (self.side == "untilt"):
                raise SideMismatch(f"{ch!r} is not allowed on the {self.side} side (position {pos})")
            self.take(ch)
            return _Poly.mono(1)
        if ch in VARS:
            self.take(ch)
            return _Poly.mono(0, VARS.index(ch))
        if not ch:
            raise ExprSyntaxError("unexpected end of input", pos)
        raise ExprSyntaxError(f"unexpected character {ch!r}", pos)


def parse_poly(src: str, side: str = "untilt"):
    if side not in ("tilt", "untilt"):
        raise ValueError("side must be tilt or untilt")
    ps = _Parser(src, side)
    val = ps.expr()
    if ps.i != len(src):
        raise ExprSyntaxError(f"unexpected character {ps.peek()!r}", ps.i)
    return val


def parse_element(src: str, side: str = "untilt", p: int = 2, prec=None, depth=None, nvars=None):
    """Parse src into a TiltSeries or UntiltSeries.

    depth bounds the exponent grid (InvalidExponent beyond it); prec is the
    series precision (untilt default 4, tilt default exact).
    """
    poly = parse_poly(src, side)
    used = 0
    neg = [False] * 3
    for (q, m), _ in poly.d.items():
        for x in (q,) + m:
            e = pden_exp(x, p)
            if depth is not None and e > depth:
                raise InvalidExponent(f"exponent {x} needs depth {e} > {depth}")
        for j, x in enumerate(m):
            if x != 0:
                used = max(used, j + 1)
            if x < 0:
                neg[j] = True
    n = used if nvars is None else nvars
    laurent = tuple(neg[:n])
    terms = [(q, m[:n], c) for (q, m), c in poly.d.items()]
    if side == "untilt":
        return UntiltSeries.from_terms(p, terms, 4 if prec is None else prec, depth, laurent)
    return TiltSeries.from_terms(p, terms, prec, depth, laurent)
