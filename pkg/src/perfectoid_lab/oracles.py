"""Independent reference computations used by the invariant suites.

None of these share code paths with the digit, Witt or persistence engines:
they work in the Eisenstein model Z[x]/(x^S - p), with plain integers mod p^N,
with dense linear algebra over F_p, and with integer polynomials.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .exact import INF


# ---- Eisenstein model -----------------------------------------------------------

class Eisenstein:
    """Z[x]/(x^S - p) modulo p^N, with S = p^M; x stands for p^(1/S).

    Elements are dicts m -> coefficient list of length S (m a tuple of
    exponent numerators over S, so variables are carried along formally).
    """

    def __init__(self, p, M, N):
        self.p, self.M, self.N = p, M, N
        self.S = p**M
        self.mod = p**N

    def embed(self, series):
        if series.depth > self.M:
            raise ValueError("series is finer than the model")
        f = self.S // series.scale
        out = {}
        for (q, m), c in series.raw_digits().items():
            a = q * f
            if a < 0:
                raise ValueError("negative p-exponent")
            key = tuple(x * f for x in m)
            vec = out.setdefault(key, [0] * self.S)
            k, r = divmod(a, self.S)
            vec[r] = (vec[r] + c * self.p**k) % self.mod
        return self._clean(out)

    def _clean(self, d):
        return {m: v for m, v in d.items() if any(v)}

    def add(self, a, b):
        out = {m: list(v) for m, v in a.items()}
        for m, v in b.items():
            w = out.setdefault(m, [0] * self.S)
            for i, c in enumerate(v):
                w[i] = (w[i] + c) % self.mod
        return self._clean(out)

    def mul(self, a, b):
        out = {}
        S = self.S
        for m1, v1 in a.items():
            for m2, v2 in b.items():
                key = tuple(x + y for x, y in zip(m1, m2))
                w = out.setdefault(key, [0] * S)
                for i, c1 in enumerate(v1):
                    if not c1:
                        continue
                    for j, c2 in enumerate(v2):
                        if not c2:
                            continue
                        k = i + j
                        c = c1 * c2
                        if k >= S:
                            k -= S
                            c *= self.p
                        w[k] = (w[k] + c) % self.mod
        return self._clean(out)

    def neg(self, a):
        return {m: [(-c) % self.mod for c in v] for m, v in a.items()}


# ---- integers as Witt vectors over F_p ---------------------------------------------

def teichmuller_digits(a: int, p: int, N: int):
    """Digits d_i in 0..p-1 with a = sum [d_i] p^i mod p^N, [d] the Teichmuller lift in Z/p^N."""
    mod = p**N
    a %= mod
    digits = []
    for i in range(N):
        k = N - i
        d = a % p
        digits.append(d)
        a = (a - pow(d, p ** (k - 1), p**k)) % p**k
        a //= p
    return digits


def witt_int_value(digits, p, N):
    """sum [d_i] p^i mod p^N for Teichmuller digits d_i in F_p."""
    mod = p**N
    return sum(pow(d, p ** (N - 1), mod) * p**i for i, d in enumerate(digits)) % mod


# ---- linear algebra over F_p ---------------------------------------------------------

def rank_mod_p(rows, p):
    """Rank of a sparse matrix given as a list of dicts col -> value."""
    pivots = {}
    rank = 0
    for row in rows:
        r = {c: v % p for c, v in row.items() if v % p}
        while r:
            c = max(r)
            if c not in pivots:
                inv = pow(r[c], -1, p)
                pivots[c] = {k: v * inv % p for k, v in r.items()}
                rank += 1
                break
            piv = pivots[c]
            f = r[c]
            for k, v in piv.items():
                nv = (r.get(k, 0) - f * v) % p
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return rank


def brute_force_cech_dims(cells, p, depth, prec):
    """dim_Fp H^r of the digit-truncated complex of one monomial.

    cells: (I, t) with the module spanned by digits p^q, q in p^-depth Z,
    t <= q < prec.  The coboundary is assembled as a full matrix.
    """
    S = p**depth
    basis = {}
    for I, t in cells:
        if t == INF:
            continue
        lo = math.ceil(Fraction(t) * S)
        for k in range(lo, math.ceil(Fraction(prec) * S)):
            basis.setdefault(len(I) - 1, []).append((I, k))
    index = {r: {b: i for i, b in enumerate(bs)} for r, bs in basis.items()}
    top = max(basis, default=-1)
    ranks = {}
    for r in range(top + 1):
        rows = []
        for (I, k) in basis.get(r, []):
            row = {}
            for (J, k2), col in index.get(r + 1, {}).items():
                if k2 != k or len(J) != len(I) + 1 or not set(I) <= set(J):
                    continue
                slot = next(i for i, j in enumerate(J) if j not in I)
                row[col] = (-1) ** slot
            rows.append(row)
        ranks[r] = rank_mod_p(rows, p)
    return {r: len(basis.get(r, [])) - ranks.get(r, 0) - ranks.get(r - 1, 0) for r in range(top + 1)}


# ---- cyclotomic valuations -----------------------------------------------------------

def _poly_div(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    assert not any(num), "division is not exact"
    return out


def cyclotomic_poly(n_pow, p):
    """Coefficients (low to high) of Phi_{p^n} = (x^{p^n} - 1) / (x^{p^(n-1)} - 1)."""
    a = [-1] + [0] * (p**n_pow - 1) + [1]
    b = [-1] + [0] * (p ** (n_pow - 1) - 1) + [1]
    return _poly_div(a, b)


def cyclotomic_oracle_valuation(p, n):
    """v(1 - zeta_{p^n}) = v_p(Phi(1)) / deg Phi: the roots are conjugate, so equal valuation."""
    if n == 0:
        return INF
    phi = cyclotomic_poly(n, p)
    val = sum(phi)
    e = 0
    while val % p == 0:
        val //= p
        e += 1
    return Fraction(e, len(phi) - 1)
