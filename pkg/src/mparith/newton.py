"""Reciprocal, division, square root and inverse square root by Newton-type
iterations whose working precision grows geometrically.

Each iteration runs on a :class:`PrecisionSchedule`. At every level only the
products that need the full level precision are formed at that precision;
the correction terms are formed at a fraction of it. When a ``ledger`` is
given, every multiplication and squaring is charged at the precision it was
actually formed at, so the trace reflects the cost discipline directly.

Variants
--------
recip2       x <- x - x(ax - 1)                          order 2
recip3       x <- x - x(e - e^2),  e = ax - 1             order 3
rsqrt2       x <- x - x e / 2,     e = ax^2 - 1           order 2
rsqrt3       x <- x - x(e - 3e^2/4) / 2                  order 3
sqrt_newton  x <- (x + a/x) / 2                          order 2
div_km       y = bx, y <- y - x(ay - b) at the last step
sqrt_km      y = ax, y <- y - x(y^2 - a)/2 at the last step
"""

from dataclasses import dataclass
import math

from . import mulkernel as mk
from .bigfrac import (
    ONE, ZERO, BigFloat, _make, add, as_precision, from_float, from_int, mul_word,
    round_to, shift2, sub, working_bits,
)
from .costs import charge
from .errors import ConfigurationError, DivisionByZero, DomainError

START_BITS = 30
LEVEL_GUARD = 3
DEFAULT_GUARD = 8

ORDERS = {
    "recip2": 2, "recip3": 3, "rsqrt2": 2, "rsqrt3": 3,
    "sqrt_newton": 2, "div_km": 2, "sqrt_km": 3,
}


@dataclass(frozen=True)
class PrecisionSchedule:
    levels: tuple
    order: int

    def __iter__(self):
        return iter(self.levels)

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, i):
        return self.levels[i]

    @property
    def final(self):
        return self.levels[-1]


def precision_schedule(n, order, start, guard=DEFAULT_GUARD):
    """Working precisions for an order-``order`` iteration reaching n + guard.

    Divide by ``order`` (ceiling) from the top until the value drops to
    ``start`` or below, clamp that value to ``start``, reverse.
    """
    if order < 2:
        raise ConfigurationError("iteration order must be at least 2")
    if n < 1 or start < 1:
        raise DomainError("precisions must be positive")
    top = n + guard
    if n <= start:
        return PrecisionSchedule((top,), order)
    levels = [top]
    while levels[-1] > start:
        nxt = -(-levels[-1] // order)
        levels.append(max(nxt, start) if nxt > start else start)
    return PrecisionSchedule(tuple(reversed(levels)), order)


def _nbits(p):
    return as_precision(p).n


def _top_float(x):
    """(f, e) with |x| = f * 2**e approximately, f in [1/2, 1) a machine float."""
    m = x.man
    bl = m.bit_length()
    if bl > 53:
        m >>= bl - 53
    return math.ldexp(float(m), -m.bit_length()), x.exponent


def _initial_recip(a, bits):
    f, e = _top_float(a)
    return round_to(shift2(from_float(a.sign / f), -e), bits)


def _initial_rsqrt(a, bits):
    f, e = _top_float(a)
    if e % 2:
        f, e = f * 2.0, e - 1
    return round_to(shift2(from_float(1.0 / math.sqrt(f)), -(e // 2)), bits)


def _initial_sqrt(a, bits):
    f, e = _top_float(a)
    if e % 2:
        f, e = f * 2.0, e - 1
    return round_to(shift2(from_float(math.sqrt(f)), e // 2), bits)


def _frac(pm, k, d):
    return -(-pm * k // d)


# ---------------------------------------------------------------------------
# reciprocal
# ---------------------------------------------------------------------------

def _recip_core(a, n, variant, ledger, trace, start):
    order = ORDERS[variant]
    sched = precision_schedule(n, order, start)
    x = _initial_recip(a, sched[0])
    if trace is not None:
        trace.append((sched[0], x))
    for m in sched.levels[1:]:
        pm = m + LEVEL_GUARD
        t = mk.mul(a, x, pm, ledger)
        e = sub(t, ONE, pm)
        charge(ledger, "A", pm)
        if order == 2:
            d = mk.mul(x, e, _frac(pm, 1, 2), ledger)
        else:
            e2 = mk.square(e, _frac(pm, 1, 3), ledger)
            f = sub(e, e2, pm)
            charge(ledger, "A", pm)
            d = mk.mul(x, f, _frac(pm, 2, 3), ledger)
        x = sub(x, d, pm)
        charge(ledger, "A", pm)
        if trace is not None:
            trace.append((m, x))
    return x


def recip(a, p, variant="recip2", ledger=None, trace=None, start=START_BITS):
    """1/a with relative error about 2**-n.

    ``trace``, if a list, receives ``(level_bits, x)`` after every level.
    """
    if variant not in ("recip2", "recip3"):
        raise ConfigurationError("unknown reciprocal variant %r" % (variant,))
    if a.sign == 0:
        raise DivisionByZero("reciprocal of zero")
    x = _recip_core(a, _nbits(p), variant, ledger, trace, start)
    return round_to(x, working_bits(p))


# ---------------------------------------------------------------------------
# division
# ---------------------------------------------------------------------------

def div(b, a, p, variant="recip2", ledger=None):
    """b/a. ``recip2``/``recip3`` form b * (1/a); ``div_km`` folds b into the last step."""
    if a.sign == 0:
        raise DivisionByZero("division by zero")
    if b.sign == 0:
        return ZERO
    n = _nbits(p)
    if variant in ("recip2", "recip3"):
        x = recip(a, n, variant, ledger)
        return _mul_final(b, x, p, ledger)
    if variant != "div_km":
        raise ConfigurationError("unknown division variant %r" % (variant,))
    h = -(-n // 2)
    x = recip(a, h, "recip2", ledger)
    ph = h + DEFAULT_GUARD + LEVEL_GUARD
    pn = n + DEFAULT_GUARD + LEVEL_GUARD
    y = mk.mul(b, x, ph, ledger)
    r = sub(mk.mul(a, y, pn, ledger), b, pn)
    charge(ledger, "A", pn)
    y = sub(y, mk.mul(x, r, ph, ledger), pn)
    charge(ledger, "A", pn)
    return round_to(y, working_bits(p))


def _mul_final(u, v, p, ledger):
    n = _nbits(p)
    return round_to(mk.mul(u, v, n + DEFAULT_GUARD + LEVEL_GUARD, ledger), working_bits(p))


# ---------------------------------------------------------------------------
# inverse square root and square root
# ---------------------------------------------------------------------------

def _rsqrt_core(a, n, variant, ledger, trace, start):
    order = ORDERS[variant]
    sched = precision_schedule(n, order, start)
    x = _initial_rsqrt(a, sched[0])
    if trace is not None:
        trace.append((sched[0], x))
    for m in sched.levels[1:]:
        pm = m + LEVEL_GUARD
        x2 = mk.square(x, pm, ledger)
        e = sub(mk.mul(a, x2, pm, ledger), ONE, pm)
        charge(ledger, "A", pm)
        if order == 2:
            d = mk.mul(x, e, _frac(pm, 1, 2), ledger)
        else:
            e2 = mk.square(e, _frac(pm, 1, 3), ledger)
            # e - 3/4 e^2
            f = sub(e, shift2(mul_word(e2, 3, pm), -2), pm)
            charge(ledger, "A", pm)
            d = mk.mul(x, f, _frac(pm, 2, 3), ledger)
        x = sub(x, shift2(d, -1), pm)
        charge(ledger, "A", pm)
        if trace is not None:
            trace.append((m, x))
    return x


def rsqrt(a, p, variant="rsqrt3", ledger=None, trace=None, start=START_BITS):
    """a**-1/2 for a > 0."""
    if variant not in ("rsqrt2", "rsqrt3"):
        raise ConfigurationError("unknown inverse square root variant %r" % (variant,))
    if a.sign <= 0:
        raise DomainError("inverse square root needs a > 0")
    x = _rsqrt_core(a, _nbits(p), variant, ledger, trace, start)
    return round_to(x, working_bits(p))


def _quot(b, a, bits):
    """b/a truncated to ``bits`` bits by one long division (the D primitive)."""
    shift = max(0, bits + 1 + a.man.bit_length() - b.man.bit_length())
    q = (b.man << shift) // a.man
    return _make(b.sign * a.sign * q, b.exp2 - a.exp2 - shift, bits)


def sqrt(a, p, variant="rsqrt3", ledger=None, trace=None, start=START_BITS):
    """sqrt(a) for a >= 0.

    ``rsqrt3``: a * a**-1/2. ``sqrt_newton``: Heron's iteration with one
    division per level. ``sqrt_km``: inverse square root to half precision
    then one corrected step on y = a x.
    """
    if a.sign < 0:
        raise DomainError("square root of a negative number")
    if a.sign == 0:
        return ZERO
    n = _nbits(p)
    if variant == "rsqrt3":
        x = rsqrt(a, n, "rsqrt3", ledger, trace, start)
        return _mul_final(a, x, p, ledger)
    if variant == "sqrt_newton":
        sched = precision_schedule(n, 2, start)
        x = _initial_sqrt(a, sched[0])
        if trace is not None:
            trace.append((sched[0], x))
        for m in sched.levels[1:]:
            pm = m + LEVEL_GUARD
            charge(ledger, "D", pm)
            q = _quot(a, x, pm + DEFAULT_GUARD)
            x = shift2(add(x, q, pm), -1)
            charge(ledger, "A", pm)
            if trace is not None:
                trace.append((m, x))
        return round_to(x, working_bits(p))
    if variant == "sqrt_km":
        h = -(-n // 2)
        x = rsqrt(a, h, "rsqrt3", ledger)
        ph = h + DEFAULT_GUARD + LEVEL_GUARD
        pn = n + DEFAULT_GUARD + LEVEL_GUARD
        y = mk.mul(a, x, ph, ledger)
        r = sub(mk.square(y, pn, ledger), a, pn)
        charge(ledger, "A", pn)
        y = sub(y, shift2(mk.mul(x, r, ph, ledger), -1), pn)
        charge(ledger, "A", pn)
        return round_to(y, working_bits(p))
    raise ConfigurationError("unknown square root variant %r" % (variant,))


# ---------------------------------------------------------------------------
# identity-based cross-check paths
# ---------------------------------------------------------------------------

def square_via_recip(a, p, ledger=None):
    """a**2 from one reciprocal: a^2/(1 - la) = l^-2 [(1 - la)^-1 - (1 + la)].

    Works at precision N = working bits of ``p``; good to about N/3 bits.
    """
    if a.sign == 0:
        return ZERO
    w = working_bits(p)
    k = -(-w // 3)
    lam = 1 - k - a.exponent          # |l a| in [2^-k, 2^(1-k))
    la = shift2(a, lam)
    t = sub(ONE, la, w)
    charge(ledger, "I", w)
    u = recip(t, w)
    v = sub(u, sub(from_int(2), t, w + k), w)
    return round_to(shift2(v, -2 * lam), w)


def rsqrt_via_sqrts(a, p, ledger=None):
    """a**-1/2 = (sqrt(a + l) - sqrt(a - l)) / l with l/a about 2**-(N/3).

    Good to about 2N/3 bits, N = working bits of ``p``.
    """
    if a.sign <= 0:
        raise DomainError("inverse square root needs a > 0")
    w = working_bits(p)
    k = -(-w // 3)
    lam = shift2(ONE, a.exponent - k)
    ext = w + k + 2
    ap = add(a, lam, ext)
    am = sub(a, lam, ext)
    charge(ledger, "R", w)
    charge(ledger, "R", w)
    d = sub(sqrt(ap, w), sqrt(am, w), w)
    return round_to(shift2(d, k - a.exponent), w)


def div_via_sqrts(b, a, p, ledger=None):
    """b/a = (sqrt(a^2 + l b) - sqrt(a^2 - l b)) / l with l b/a^2 about 2**-(N/3)."""
    if a.sign == 0:
        raise DivisionByZero("division by zero")
    if b.sign == 0:
        return ZERO
    w = working_bits(p)
    k = -(-w // 3)
    charge(ledger, "S", w)
    a2 = mk.square(a, w)
    lam = a2.exponent - b.exponent - k
    lb = shift2(b, lam)
    ext = w + k + 2
    charge(ledger, "R", w)
    charge(ledger, "R", w)
    d = sub(sqrt(add(a2, lb, ext), w), sqrt(sub(a2, lb, ext), w), w)
    q = shift2(d, -lam)
    return round_to(q if a.sign > 0 else -q, w)
