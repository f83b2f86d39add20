"""Full-precision multiplication of BigFloats.

Operands are truncated to the working precision, their mantissas multiplied
exactly (full double-length product), and the product truncated. Both the
schoolbook and the Karatsuba routes compute the same exact product, so they
agree bit for bit; :func:`mul` only chooses which one does the work.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .bigfrac import ZERO, BigFloat, _make, add, from_parts, shift2, sub, working_bits
from .errors import DomainError

DEFAULT_THRESHOLD = 32  # limbs


@dataclass
class WorkCounter:
    """Limb operations performed by the kernels (for growth-rate checks)."""

    limb_mults: int = 0
    limb_adds: int = 0


def _trunc_man(x, w):
    """Mantissa and exponent of ``x`` cut to at most ``w`` bits."""
    m, e = x.man, x.exp2
    bl = m.bit_length()
    if bl > w:
        m >>= bl - w
        e += bl - w
    return m, e


def _school(a, b, counter):
    if counter is not None:
        counter.limb_mults += a.size * b.size
    return K.school_mul(a, b)


def _kara(x, y, threshold, counter):
    n = x.size
    # below four limbs the half sums are no shorter than the operands
    if n <= threshold or n < 4:
        return _school(x, y, counter)
    h = (n + 1) // 2
    a, b = x[:h], x[h:]
    c, d = y[:h], y[h:]
    m1 = _kara(a, c, threshold, counter)
    m2 = _kara(b, d, threshold, counter)
    s1 = K.add(a, b)
    s2 = K.add(c, d)
    m3 = _kara(s1, s2, threshold, counter)
    r = np.zeros(max(2 * n + 2, 3 * h + 3), dtype=np.uint64)
    K.add_into(r, m1, 0)
    K.add_into(r, m2, 2 * h)
    K.add_into(r, m3, h)
    # ad + bc = m3 - (m1 + m2)
    K.sub_into(r, m1, h)
    K.sub_into(r, m2, h)
    if counter is not None:
        counter.limb_adds += 2 * h + 2 + 2 * (m1.size + m2.size) + m3.size
    return r[:2 * n]


def karatsuba_step(a, b, c, d):
    """One level of the three-product identity on digits a, b, c, d.

    Returns (m1, m2, m3, ad + bc) with m1 = ac, m2 = bd, m3 = (a+b)(c+d).
    """
    m1, m2, m3 = a * c, b * d, (a + b) * (c + d)
    return m1, m2, m3, m3 - (m1 + m2)


def _pad(a, n):
    if a.size == n:
        return a
    out = np.zeros(n, dtype=np.uint64)
    out[:a.size] = a
    return out


def int_mul_school(u, v, counter=None):
    """Exact product of nonnegative ints by the schoolbook kernel."""
    return K.limbs_to_int(_school(K.int_to_limbs(u), K.int_to_limbs(v), counter))


def int_mul_karatsuba(u, v, threshold=DEFAULT_THRESHOLD, counter=None):
    """Exact product of nonnegative ints by Karatsuba recursion."""
    if threshold < 1:
        raise DomainError("Karatsuba threshold must be at least one limb")
    a, b = K.int_to_limbs(u), K.int_to_limbs(v)
    if a.size == 0 or b.size == 0:
        return 0
    n = max(a.size, b.size)
    return K.limbs_to_int(_kara(_pad(a, n), _pad(b, n), threshold, counter))


def _charge(ledger, cls, p):
    if ledger is not None:
        ledger.charge(cls, p.n if hasattr(p, "n") else int(p))


def _product(x, y, p, intmul):
    if x.sign == 0 or y.sign == 0:
        return ZERO
    w = working_bits(p)
    mx, ex = _trunc_man(x, w)
    my, ey = _trunc_man(y, w)
    return _make(x.sign * y.sign * intmul(mx, my), ex + ey, w)


def mul_school(x, y, p, ledger=None, counter=None):
    _charge(ledger, "M", p)
    return _product(x, y, p, lambda u, v: int_mul_school(u, v, counter))


def mul_karatsuba(x, y, p, threshold=DEFAULT_THRESHOLD, ledger=None, counter=None):
    _charge(ledger, "M", p)
    return _product(x, y, p, lambda u, v: int_mul_karatsuba(u, v, threshold, counter))


def _dispatch(u, v, threshold, counter):
    limbs = (max(u.bit_length(), v.bit_length()) + 31) >> 5
    if limbs <= threshold:
        return int_mul_school(u, v, counter)
    return int_mul_karatsuba(u, v, threshold, counter)


def mul(x, y, p, ledger=None, threshold=DEFAULT_THRESHOLD, counter=None):
    """Product truncated to working precision (schoolbook or Karatsuba)."""
    _charge(ledger, "M", p)
    return _product(x, y, p, lambda u, v: _dispatch(u, v, threshold, counter))


def square(x, p, ledger=None, threshold=DEFAULT_THRESHOLD, counter=None):
    _charge(ledger, "S", p)
    return _product(x, x, p, lambda u, v: _dispatch(u, v, threshold, counter))


def mul_via_squares(x, y, p, ledger=None):
    """x*y from two squarings: 4*lam*x*y = (x + lam*y)**2 - (x - lam*y)**2.

    ``lam`` is the power of two putting |lam*y/x| in [1/2, 2], which keeps
    the subtraction free of heavy cancellation.
    """
    if x.sign == 0 or y.sign == 0:
        return ZERO
    w = working_bits(p)
    k = x.exponent - y.exponent
    ly = shift2(y, k)
    inner = w + 4
    u = add(x, ly, inner)
    v = sub(x, ly, inner)
    d = sub(square(u, inner, ledger), square(v, inner, ledger), inner)
    return from_parts(d.sign * d.man, d.exp2 - 2 - k, p)
