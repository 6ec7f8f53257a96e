"""Dense integer polynomial kernels.

Polynomials are tuples of Python ints, constant term first, with no trailing
zeros; the zero polynomial is the empty tuple.  Large products and exact
quotients go through Kronecker substitution so that the heavy lifting happens
inside CPython's big-integer routines.
"""
from __future__ import annotations

from functools import lru_cache
from math import gcd

import numpy as np

Poly = tuple  # tuple[int, ...]

# Below this many coefficient products the schoolbook loop wins.
_SCHOOLBOOK_LIMIT = 4096

_WIDTHS = ((8, np.uint8, np.int8), (16, np.uint16, np.int16),
           (32, np.uint32, np.int32), (64, np.uint64, np.int64))


def trim(coeffs) -> Poly:
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


def norm(a: Poly) -> int:
    return max(max(a), -min(a)) if a else 0


def content(a: Poly) -> int:
    g = 0
    for c in a:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def primitive(a: Poly) -> Poly:
    """Divide out the content and make the leading coefficient positive."""
    if not a:
        return a
    c = content(a)
    if a[-1] < 0:
        c = -c
    if c == 1:
        return tuple(a)
    return tuple(x // c for x in a)


def add(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return trim(out)


def neg(a: Poly) -> Poly:
    return tuple(-c for c in a)


def sub(a: Poly, b: Poly) -> Poly:
    return add(a, neg(b))


def scale(a: Poly, c: int) -> Poly:
    if c == 0:
        return ()
    return tuple(c * x for x in a)


# --- Kronecker substitution -------------------------------------------------

def _width_for(bound: int):
    """Smallest packing width whose balanced digit range covers ``[-bound, bound]``."""
    for bits, udt, sdt in _WIDTHS:
        if bound < (1 << (bits - 1)):
            return bits, udt, sdt
    return None


@lru_cache(maxsize=256)
def _repunit(bits: int, length: int) -> int:
    """sum_{i<length} 2^(bits*i)."""
    unit = (1).to_bytes(bits // 8, "little")
    return int.from_bytes(unit * length, "little")


def _pack(a: Poly, bits: int, udt, sdt) -> int:
    half = 1 << (bits - 1)
    arr = np.array(a, dtype=sdt).view(udt) ^ udt(half)
    return int.from_bytes(arr.tobytes(), "little") - half * _repunit(bits, len(a))


def _unpack(value: int, bits: int, udt, sdt, length: int) -> Poly:
    half = 1 << (bits - 1)
    shifted = value + half * _repunit(bits, length)
    if shifted < 0 or shifted.bit_length() > bits * length:
        raise OverflowError("digits out of range")
    raw = np.frombuffer(shifted.to_bytes(bits // 8 * length, "little"), dtype=udt)
    return trim((raw ^ udt(half)).view(sdt).tolist())


def _pack_py(a: Poly, bits: int) -> int:
    value = 0
    for c in reversed(a):
        value = (value << bits) + c
    return value


def _unpack_py(value: int, bits: int, length: int) -> Poly:
    half = 1 << (bits - 1)
    mask = (1 << bits) - 1
    out = []
    for _ in range(length):
        d = value & mask
        if d >= half:
            d -= 1 << bits
        out.append(d)
        value = (value - d) >> bits
    if value:
        raise OverflowError("digits out of range")
    return trim(out)


def _kron_mul(a: Poly, b: Poly) -> Poly:
    na, nb = norm(a), norm(b)
    bound = min(len(a), len(b)) * na * nb
    length = len(a) + len(b) - 1
    w = _width_for(max(bound, na, nb))
    if w is None:
        bits = -(-(bound.bit_length() + 2) // 8) * 8
        return _unpack_py(_pack_py(a, bits) * _pack_py(b, bits), bits, length)
    bits, udt, sdt = w
    prod = _pack(a, bits, udt, sdt) * _pack(b, bits, udt, sdt)
    return _unpack(prod, bits, udt, sdt, length)


def mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    if len(a) * len(b) <= _SCHOOLBOOK_LIMIT:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return trim(out)
    return _kron_mul(a, b)


def product(polys) -> Poly:
    polys = list(polys)
    if not polys:
        return (1,)
    while len(polys) > 1:
        polys = [mul(polys[i], polys[i + 1]) if i + 1 < len(polys) else polys[i]
                 for i in range(0, len(polys), 2)]
    return polys[0]


# --- division -----------------------------------------------------------------

def divmod_long(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Schoolbook division over Z; ``b``'s leading coefficient must divide every step."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    lead = b[-1]
    db = len(b) - 1
    if len(a) <= db:
        return (), trim(a)
    quot = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = rem[i]
        if c == 0:
            continue
        q, r = divmod(c, lead)
        if r:
            raise ArithmeticError("inexact integer division")
        quot[i - db] = q
        for j in range(db + 1):
            if b[j]:
                rem[i - db + j] -= q * b[j]
    return trim(quot), trim(rem[:db])


def divmod_monic(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b or b[-1] not in (1, -1):
        raise ValueError("divisor must be monic up to sign")
    return divmod_long(a, b)


def divexact(a: Poly, b: Poly) -> Poly | None:
    """Return ``a / b`` if ``b`` divides ``a`` in Z[x], else ``None``."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return ()
    if len(a) < len(b):
        return None
    qlen = len(a) - len(b) + 1
    if qlen * len(b) > _SCHOOLBOOK_LIMIT:
        big = max(norm(a), norm(b))
        for bits, udt, sdt in _WIDTHS:
            if big >= 1 << (bits - 1):
                continue
            num = _pack(a, bits, udt, sdt)
            den = _pack(b, bits, udt, sdt)
            q, r = divmod(num, den)
            if r:
                return None
            try:
                cand = _unpack(q, bits, udt, sdt, qlen)
            except OverflowError:
                continue
            if mul(cand, b) == tuple(a):
                return cand
    try:
        q, r = divmod_long(a, b)
    except ArithmeticError:
        return None
    return q if not r else None


# --- gcd ----------------------------------------------------------------------

def _euclid_gcd(a: Poly, b: Poly) -> Poly:
    """Primitive polynomial remainder sequence."""
    a, b = primitive(a), primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        lead = b[-1]
        k = len(a) - len(b) + 1
        r = divmod_long(scale(a, lead ** k), b)[1]
        a, b = b, primitive(r)
    return primitive(a)


def gcd_poly(a: Poly, b: Poly) -> Poly:
    """Primitive gcd of two integer polynomials, positive leading coefficient.

    Integer content is ignored, so this is the gcd over Q scaled to a
    primitive integer polynomial.  Heuristic gcd by evaluation at powers of
    two, every candidate certified by exact division; falls back to the
    primitive remainder sequence.
    """
    if not a:
        return primitive(b)
    if not b:
        return primitive(a)
    a, b = primitive(a), primitive(b)
    if len(a) == 1 or len(b) == 1:
        return (1,)
    na, nb = norm(a), norm(b)
    bound = max(2 * min(na, nb) + 2, na, nb)
    length = max(len(a), len(b))
    for bits, udt, sdt in _WIDTHS:
        if bound >= 1 << (bits - 1):
            continue
        g = gcd(_pack(a, bits, udt, sdt), _pack(b, bits, udt, sdt))
        try:
            cand = primitive(_unpack(g, bits, udt, sdt, length))
        except OverflowError:
            continue
        if cand and divexact(a, cand) is not None and divexact(b, cand) is not None:
            return cand
    return _euclid_gcd(a, b)


def compose_power(a: Poly, k: int) -> Poly:
    """a(x^k) for k >= 1."""
    if k == 1 or not a:
        return tuple(a)
    out = [0] * ((len(a) - 1) * k + 1)
    for i, c in enumerate(a):
        out[i * k] = c
    return tuple(out)
