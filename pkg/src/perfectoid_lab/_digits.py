"""Low-level helpers shared by the tilt and untilt digit series.

Digits are stored as ``{(qs, ms): c}`` where ``qs`` and every entry of the
tuple ``ms`` are the exponents scaled by ``p**depth``.
"""

from __future__ import annotations

from collections import defaultdict


def rescale(digits: dict, factor: int) -> dict:
    if factor == 1:
        return digits
    return {(q * factor, tuple(x * factor for x in m)): c for (q, m), c in digits.items()}


def columns(digits: dict) -> dict:
    cols = defaultdict(dict)
    for (q, m), c in digits.items():
        cols[m][q] = c
    return cols


def _pack(col: dict, lo: int, span: int, width: int) -> int:
    buf = bytearray(span * width)
    for q, c in col.items():
        i = (q - lo) * width
        buf[i:i + width] = c.to_bytes(width, "little")
    return int.from_bytes(buf, "little")


def _conv_column(ca: dict, cb: dict, cutoff):
    """Product of two non-negative sparse columns, dropping exponents >= cutoff."""
    na, nb = len(ca), len(cb)
    lo_a, hi_a = min(ca), max(ca)
    lo_b, hi_b = min(cb), max(cb)
    span_a, span_b = hi_a - lo_a + 1, hi_b - lo_b + 1
    out = {}
    if na * nb <= 4 * (span_a + span_b) or min(ca.values()) < 0 or min(cb.values()) < 0:
        for qa, a in ca.items():
            for qb, b in cb.items():
                q = qa + qb
                if cutoff is not None and q >= cutoff:
                    continue
                out[q] = out.get(q, 0) + a * b
        return out
    # Kronecker substitution: one big-integer product does the whole convolution.
    bound = max(ca.values()) * max(cb.values()) * min(na, nb)
    width = (bound.bit_length() + 8) // 8
    A = _pack(ca, lo_a, span_a, width)
    B = _pack(cb, lo_b, span_b, width)
    span = span_a + span_b - 1
    raw = (A * B).to_bytes(span * width, "little")
    base = lo_a + lo_b
    top = span if cutoff is None else min(span, cutoff - base)
    for i in range(max(top, 0)):
        c = int.from_bytes(raw[i * width:(i + 1) * width], "little")
        if c:
            out[base + i] = c
    return out


def convolve(a: dict, b: dict, cutoff=None) -> dict:
    """Raw (uncarried, unreduced) product of two digit dicts."""
    out = defaultdict(int)
    ca, cb = columns(a), columns(b)
    for ma, cola in ca.items():
        for mb, colb in cb.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            for q, c in _conv_column(cola, colb, cutoff).items():
                out[(q, m)] += c
    return out


def reduce_mod_p(coeffs: dict, p: int, cutoff=None) -> dict:
    out = {}
    for key, c in coeffs.items():
        c %= p
        if c and (cutoff is None or key[0] < cutoff):
            out[key] = c
    return out


def carry(coeffs: dict, p: int, scale: int, cutoff=None) -> dict:
    """Base-p carry normal form: the digit at qs carries into qs + scale.

    All positions with the same m and the same residue of qs mod scale form
    one p-adic integer, so Python's big integers perform the carries.  A
    negative column borrows up to the cutoff, which must then be finite.
    """
    cols = defaultdict(list)
    for (q, m), c in coeffs.items():
        if c:
            j, k = divmod(q, scale)
            cols[(m, k)].append((j, c))
    out = {}
    for (m, k), entries in cols.items():
        j0 = min(j for j, _ in entries)
        A = sum(c * p ** (j - j0) for j, c in entries)
        if cutoff is not None:
            # positions k + scale*j < cutoff, j >= j0
            jmax = -((k - cutoff) // scale)  # ceil((cutoff - k) / scale)
            count = jmax - j0
            if count <= 0:
                continue
            A %= p**count
        elif A < 0:
            raise ValueError("negative digit column needs a finite cutoff")
        j = j0
        while A:
            A, d = divmod(A, p)
            if d:
                out[(k + scale * j, m)] = d
            j += 1
    return out
