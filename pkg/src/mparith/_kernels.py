"""Limb-level kernels for multiple-precision integers.

A limb vector is a little-endian ``numpy.uint64`` array whose entries hold
32-bit digits. Every kernel returns a normalized vector (all entries below
2**32). Two implementations exist for each kernel: a numba ``@njit`` one and
a pure-numpy one. The numba path is used unless ``MPARITH_DISABLE_NUMBA`` is
set to a true value in the environment, or numba cannot be imported.
"""

import os

import numpy as np

WORD_BITS = 32
_MASK = np.uint64(0xFFFFFFFF)
_SHIFT = np.uint64(32)
_ZERO = np.uint64(0)
_ONE = np.uint64(1)

_DISABLE = os.environ.get("MPARITH_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _DISABLE:
        raise ImportError("numba disabled by MPARITH_DISABLE_NUMBA")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# conversion (shared)
# ---------------------------------------------------------------------------

def int_to_limbs(m):
    """Nonnegative Python int -> limb vector (empty for zero)."""
    if m < 0:
        raise ValueError("limb vectors hold magnitudes only")
    if m == 0:
        return np.zeros(0, dtype=np.uint64)
    nbytes = ((m.bit_length() + 31) >> 5) << 2
    return np.frombuffer(m.to_bytes(nbytes, "little"), dtype="<u4").astype(np.uint64)


def limbs_to_int(a):
    if a.size == 0:
        return 0
    return int.from_bytes(a.astype("<u4").tobytes(), "little")


def strip(a):
    """Drop high zero limbs."""
    n = a.size
    while n and a[n - 1] == 0:
        n -= 1
    return a[:n]


# ---------------------------------------------------------------------------
# pure numpy
# ---------------------------------------------------------------------------

def _np_carry(r):
    # r may hold entries >= 2**32; the top entry must have room for the carry.
    while True:
        c = r >> _SHIFT
        if not c.any():
            return r
        r &= _MASK
        r[1:] += c[:-1]


def np_school_mul(a, b):
    la, lb = a.size, b.size
    if la == 0 or lb == 0:
        return np.zeros(la + lb, dtype=np.uint64)
    if la < lb:
        a, b, la, lb = b, a, lb, la
    acc = np.zeros(la + lb + 1, dtype=np.uint64)
    for i in range(lb):
        bi = b[i]
        if bi == 0:
            continue
        prod = a * bi
        acc[i:i + la] += prod & _MASK
        acc[i + 1:i + la + 1] += prod >> _SHIFT
    return _np_carry(acc)[:la + lb].copy()


def np_add(a, b):
    n = max(a.size, b.size)
    r = np.zeros(n + 1, dtype=np.uint64)
    r[:a.size] += a
    r[:b.size] += b
    return _np_carry(r)


def np_sub(a, b):
    """a - b for a >= b; result has len(a) limbs."""
    r = a.astype(np.int64)
    r[:b.size] -= b.astype(np.int64)
    base = np.int64(1) << np.int64(32)
    while True:
        neg = r < 0
        if not neg.any():
            return r.astype(np.uint64)
        if neg[-1]:
            raise ValueError("negative limb difference")
        r[neg] += base
        r[1:][neg[:-1]] -= 1


def np_add_into(r, src, offset):
    """r[offset:] += src in place with carry; r must have room for carries."""
    r[offset:offset + src.size] += src
    _np_carry(r)
    return r


def np_sub_into(r, src, offset):
    """r[offset:] -= src in place with borrow; r must stay nonnegative."""
    tmp = np_sub(r[offset:], src)
    r[offset:] = tmp
    return r


# ---------------------------------------------------------------------------
# numba
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def nb_school_mul(a, b):
        la = a.size
        lb = b.size
        r = np.zeros(la + lb, dtype=np.uint64)
        for i in range(la):
            ai = a[i]
            if ai == _ZERO:
                continue
            carry = _ZERO
            for j in range(lb):
                # (2^32-1)^2 + 2(2^32-1) == 2^64-1: never overflows
                t = ai * b[j] + r[i + j] + carry
                r[i + j] = t & _MASK
                carry = t >> _SHIFT
            r[i + lb] = carry
        return r

    @njit(cache=True)
    def nb_add(a, b):
        if a.size < b.size:
            a, b = b, a
        r = np.zeros(a.size + 1, dtype=np.uint64)
        carry = _ZERO
        for i in range(b.size):
            t = a[i] + b[i] + carry
            r[i] = t & _MASK
            carry = t >> _SHIFT
        for i in range(b.size, a.size):
            t = a[i] + carry
            r[i] = t & _MASK
            carry = t >> _SHIFT
        r[a.size] = carry
        return r

    @njit(cache=True)
    def nb_sub(a, b):
        r = np.zeros(a.size, dtype=np.uint64)
        borrow = _ZERO
        for i in range(a.size):
            bi = b[i] if i < b.size else _ZERO
            sub = bi + borrow
            if a[i] >= sub:
                r[i] = a[i] - sub
                borrow = _ZERO
            else:
                r[i] = (a[i] + (_MASK + _ONE)) - sub
                borrow = _ONE
        if borrow != _ZERO:
            raise ValueError("negative limb difference")
        return r

    @njit(cache=True)
    def nb_add_into(r, src, offset):
        carry = _ZERO
        i = 0
        while i < src.size:
            t = r[offset + i] + src[i] + carry
            r[offset + i] = t & _MASK
            carry = t >> _SHIFT
            i += 1
        k = offset + i
        while carry != _ZERO:
            t = r[k] + carry
            r[k] = t & _MASK
            carry = t >> _SHIFT
            k += 1
        return r

    @njit(cache=True)
    def nb_sub_into(r, src, offset):
        borrow = _ZERO
        i = 0
        n = r.size - offset
        while i < n:
            si = src[i] if i < src.size else _ZERO
            if i >= src.size and borrow == _ZERO:
                break
            sub = si + borrow
            if r[offset + i] >= sub:
                r[offset + i] = r[offset + i] - sub
                borrow = _ZERO
            else:
                r[offset + i] = (r[offset + i] + (_MASK + _ONE)) - sub
                borrow = _ONE
            i += 1
        if borrow != _ZERO:
            raise ValueError("negative limb difference")
        return r


if HAVE_NUMBA:
    BACKEND = "numba"
    school_mul = nb_school_mul
    add = nb_add
    sub = nb_sub
    add_into = nb_add_into
    sub_into = nb_sub_into
else:
    BACKEND = "numpy"
    school_mul = np_school_mul
    add = np_add
    sub = np_sub
    add_into = np_add_into
    sub_into = np_sub_into
