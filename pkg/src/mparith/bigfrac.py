"""Precision-n binary floating fractions and their linear-time operations.

A nonzero :class:`BigFloat` is ``sign * man * 2**exp2`` with ``man`` an odd
positive integer. Equivalently it is ``sign * f * 2**exponent`` with the
fraction ``f`` in [1/2, 1); both views are exposed. Trailing zero bits are
always stripped, so equal values have identical fields.

Every operation that can lose information truncates toward zero to the
working precision ``n + guard_bits`` of its :class:`Precision` argument.
Wherever a precision is expected, a plain ``int`` n is accepted as well.
"""

from dataclasses import dataclass
from fractions import Fraction
import math

from .errors import DivisionByZero, DomainError, RangeError
from ._kernels import WORD_BITS

EXP_MIN = -(2 ** 31)
EXP_MAX = 2 ** 31 - 1
DEFAULT_GUARD = 8


@dataclass(frozen=True)
class Precision:
    n: int
    guard_bits: int = DEFAULT_GUARD

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("precision must be at least one bit")
        if self.guard_bits < 2:
            raise DomainError("at least two guard bits are required")

    @property
    def working(self):
        return self.n + self.guard_bits


def as_precision(p):
    if isinstance(p, Precision):
        return p
    return Precision(int(p))


def working_bits(p):
    if isinstance(p, Precision):
        return p.n + p.guard_bits
    return int(p) + DEFAULT_GUARD


class BigFloat:
    """Immutable multiple-precision binary floating-point value.

    Build values with :func:`from_int`, :func:`from_float`,
    :func:`from_fraction` or the arithmetic functions of this package rather
    than calling the constructor directly.
    """

    __slots__ = ("sign", "man", "exp2", "precision_bits")

    def __init__(self, sign, man, exp2, precision_bits=0):
        object.__setattr__(self, "sign", sign)
        object.__setattr__(self, "man", man)
        object.__setattr__(self, "exp2", exp2)
        object.__setattr__(self, "precision_bits", max(precision_bits, man.bit_length()))

    def __setattr__(self, name, value):
        raise AttributeError("BigFloat is immutable")

    @property
    def exponent(self):
        """Binary exponent e with |x| = f * 2**e, f in [1/2, 1). Zero gives 0."""
        if self.sign == 0:
            return 0
        return self.exp2 + self.man.bit_length()

    @property
    def fraction(self):
        """Fraction digits in base 2**32, most significant first."""
        if self.sign == 0:
            return ()
        bl = self.man.bit_length()
        pad = (-bl) % WORD_BITS
        m = self.man << pad
        ndig = (bl + pad) // WORD_BITS
        mask = (1 << WORD_BITS) - 1
        return tuple((m >> (WORD_BITS * (ndig - 1 - i))) & mask for i in range(ndig))

    def is_zero(self):
        return self.sign == 0

    def __eq__(self, other):
        if not isinstance(other, BigFloat):
            return NotImplemented
        return self.sign == other.sign and self.man == other.man and self.exp2 == other.exp2

    def __hash__(self):
        return hash((self.sign, self.man, self.exp2))

    def __lt__(self, other):
        return cmp(self, other) < 0

    def __le__(self, other):
        return cmp(self, other) <= 0

    def __gt__(self, other):
        return cmp(self, other) > 0

    def __ge__(self, other):
        return cmp(self, other) >= 0

    def __neg__(self):
        return neg(self)

    def __abs__(self):
        return fabs(self)

    def __float__(self):
        return to_float(self)

    def __repr__(self):
        if self.sign == 0:
            return "BigFloat(0)"
        return "BigFloat(%s%d*2**%d)" % ("-" if self.sign < 0 else "", self.man, self.exp2)


ZERO = BigFloat(0, 0, 0)
ONE = BigFloat(1, 1, 0)


def _check_range(exp2, man):
    e = exp2 + man.bit_length()
    if e > EXP_MAX or e < EXP_MIN:
        raise RangeError("binary exponent %d outside [%d, %d]" % (e, EXP_MIN, EXP_MAX))


def _make(s, exp2, bits):
    """Truncate the exact value s * 2**exp2 (s a signed int) to ``bits`` bits."""
    if s == 0:
        return ZERO
    sign = 1
    if s < 0:
        sign, s = -1, -s
    bl = s.bit_length()
    if bl > bits:
        s >>= bl - bits
        exp2 += bl - bits
    tz = (s & -s).bit_length() - 1
    if tz:
        s >>= tz
        exp2 += tz
    _check_range(exp2, s)
    return BigFloat(sign, s, exp2, bits)


def normalize(x):
    """Canonical form of ``x``; idempotent."""
    if x.sign == 0 or x.man == 0:
        return ZERO
    return _make(x.sign * x.man, x.exp2, x.man.bit_length())


def from_int(i):
    return _make(int(i), 0, max(int(i).bit_length(), 1))


def from_float(f):
    """Exact conversion of a finite machine float."""
    if not math.isfinite(f):
        raise DomainError("NaN and infinities are not representable")
    m, e = math.frexp(f)
    return _make(int(m * (1 << 53)), e - 53, 53)


def from_fraction(q, p):
    """Truncate the rational ``q`` to working precision."""
    q = Fraction(q)
    w = working_bits(p)
    if q == 0:
        return ZERO
    num, den = abs(q.numerator), q.denominator
    shift = w + 1 - (num.bit_length() - den.bit_length())
    if shift >= 0:
        v = (num << shift) // den
    else:
        v = num // (den << -shift)
    return _make(v if q > 0 else -v, -shift, w)


def from_parts(s, exp2, p):
    """The value ``s * 2**exp2`` (s any int) truncated to working precision."""
    return _make(s, exp2, working_bits(p))


def to_fraction(x):
    if x.sign == 0:
        return Fraction(0)
    if x.exp2 >= 0:
        return Fraction(x.sign * (x.man << x.exp2))
    return Fraction(x.sign * x.man, 1 << -x.exp2)


def to_float(x):
    if x.sign == 0:
        return 0.0
    bl = x.man.bit_length()
    if bl > 60:
        return x.sign * math.ldexp(float(x.man >> (bl - 60)), x.exp2 + bl - 60)
    return x.sign * math.ldexp(float(x.man), x.exp2)


def neg(x):
    if x.sign == 0:
        return x
    return BigFloat(-x.sign, x.man, x.exp2, x.precision_bits)


def fabs(x):
    if x.sign >= 0:
        return x
    return BigFloat(1, x.man, x.exp2, x.precision_bits)


def add(x, y, p):
    """Sum truncated to ``p.working`` bits."""
    w = working_bits(p)
    if y.sign == 0:
        return _make(x.sign * x.man, x.exp2, w)
    if x.sign == 0:
        return _make(y.sign * y.man, y.exp2, w)
    ex = x.exp2 + x.man.bit_length()
    ey = y.exp2 + y.man.bit_length()
    if ey > ex:
        x, y, ex, ey = y, x, ey, ex
    # An operand lying wholly below both the rounding window and the lowest
    # bit of the other can only steer the truncation through its sign.
    floor = min(x.exp2, ex - w - 2)
    if ey < floor - 1:
        y = BigFloat(y.sign, 1, floor - 2)
    e = min(x.exp2, y.exp2)
    s = x.sign * (x.man << (x.exp2 - e)) + y.sign * (y.man << (y.exp2 - e))
    return _make(s, e, w)


def sub(x, y, p):
    return add(x, neg(y), p)


def mul_word(x, s, p):
    """Product with a single-word integer 0 <= |s| < 2**32."""
    s = int(s)
    if abs(s) >= 1 << WORD_BITS:
        raise DomainError("multiplier does not fit in one word")
    if s == 0 or x.sign == 0:
        return ZERO
    return _make(x.sign * x.man * s, x.exp2, working_bits(p))


def div_word(x, s, p):
    """Quotient by a single-word integer 0 < |s| < 2**32."""
    s = int(s)
    if s == 0:
        raise DivisionByZero("division by zero")
    if abs(s) >= 1 << WORD_BITS:
        raise DomainError("divisor does not fit in one word")
    if x.sign == 0:
        return ZERO
    w = working_bits(p)
    shift = max(0, w + 1 + abs(s).bit_length() - x.man.bit_length())
    q = (x.man << shift) // abs(s)
    sign = x.sign if s > 0 else -x.sign
    return _make(sign * q, x.exp2 - shift, w)


def shift2(x, k):
    """Exact multiplication by 2**k."""
    if x.sign == 0:
        return x
    _check_range(x.exp2 + k, x.man)
    return BigFloat(x.sign, x.man, x.exp2 + k, x.precision_bits)


def cmp(x, y):
    """-1, 0 or 1 according to the real order of x and y."""
    if x.sign != y.sign:
        return -1 if x.sign < y.sign else 1
    if x.sign == 0:
        return 0
    ex = x.exp2 + x.man.bit_length()
    ey = y.exp2 + y.man.bit_length()
    if ex != ey:
        c = 1 if ex > ey else -1
    else:
        e = min(x.exp2, y.exp2)
        a = x.man << (x.exp2 - e)
        b = y.man << (y.exp2 - e)
        c = (a > b) - (a < b)
    return c * x.sign


def round_to(x, p):
    """Truncate ``x`` to ``n`` significant bits (n = p or p.n)."""
    n = p.n if isinstance(p, Precision) else int(p)
    if n < 1:
        raise DomainError("precision must be at least one bit")
    if x.sign == 0:
        return ZERO
    return _make(x.sign * x.man, x.exp2, n)


def ulp_error(x, exact):
    """|x - exact| / |exact| as a float; ``exact`` is a Fraction (nonzero)."""
    exact = Fraction(exact)
    return float(abs(to_fraction(x) - exact) / abs(exact))
