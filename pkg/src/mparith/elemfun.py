"""Elementary functions, the constants e and pi, and radix conversion.

exp and sin scale the argument down by 2**q with q = isqrt(n), sum a short
series, then undo the scaling with q doubling steps. ln inverts exp with a
discrete (finite-difference) Newton iteration. Rational arguments and the
constants go through exact-integer binary splitting.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math
import re

from . import mulkernel as mk
from . import newton as nw
from .bigfrac import (
    ONE, ZERO, BigFloat, _make, add, as_precision, cmp, div_word, fabs, from_float,
    from_fraction, from_int, from_parts, mul_word, neg, round_to, shift2, sub,
    to_float, to_fraction, working_bits,
)
from .errors import DomainError, ParseError

GUARD = 8

EXP_DOMAIN = (-8.0, 8.0)
LN_DOMAIN = (2.0 ** -8, 2.0 ** 8)
SIN_DOMAIN = (-8.0, 8.0)


def _nbits(p):
    return as_precision(p).n


def _check_domain(x, dom, name):
    lo, hi = dom
    if cmp(x, from_float(lo)) < 0 or cmp(x, from_float(hi)) > 0:
        raise DomainError("%s argument outside [%g, %g]" % (name, lo, hi))


def _bigfloat(x):
    if isinstance(x, BigFloat):
        return x
    if isinstance(x, int):
        return from_int(x)
    if isinstance(x, float):
        return from_float(x)
    raise TypeError("expected BigFloat, int or float")


# ---------------------------------------------------------------------------
# exp
# ---------------------------------------------------------------------------

def _expm1_series(y, w, r, ledger):
    """sum_{k>=1} y^k/k! for small y >= 0, at least r terms, to relative 2^-w."""
    s = y
    t = y
    k = 1
    while True:
        k += 1
        t = div_word(mk.mul(t, y, w, ledger), k, w)
        if t.sign == 0:
            break
        s = add(s, t, w)
        if k >= r and t.exponent < s.exponent - w - 1:
            break
    return s


def exp(x, p, ledger=None, domain=EXP_DOMAIN):
    """exp(x) with relative error about 2**-n."""
    x = _bigfloat(x)
    if x.sign == 0:
        return ONE
    _check_domain(x, domain, "exp")
    n = _nbits(p)
    q = math.isqrt(n)
    w = n + q + 2 * GUARD + q.bit_length()
    y = shift2(fabs(x), -q)
    r = -(-n // max(q, 1)) + 1
    e = _expm1_series(y, w, r, ledger)
    # (1 + e)^2 - 1 = 2e + e^2 keeps e's relative accuracy
    for _ in range(q):
        e = add(shift2(e, 1), mk.square(e, w, ledger), w)
    v = add(ONE, e, w)
    if x.sign < 0:
        v = nw.recip(v, w, ledger=ledger)
    return round_to(v, working_bits(p))


# ---------------------------------------------------------------------------
# binary splitting
# ---------------------------------------------------------------------------

def _split_exp(a, b, pn, qd):
    """(P, Q, T) with T/Q = sum_{j=a}^{b-1} prod_{i=a}^{j} pn/(qd*i)."""
    if b - a == 1:
        return pn, qd * a, pn
    m = (a + b) // 2
    p1, q1, t1 = _split_exp(a, m, pn, qd)
    p2, q2, t2 = _split_exp(m, b, pn, qd)
    return p1 * p2, q1 * q2, t1 * q2 + p1 * t2


def exp_rational_terms(pnum, qden, n):
    """Number of series terms (j = 0..k) the cutoff rule keeps at precision n.

    k is the least index with (p/q)^(k+1)/(k+1)! <= 2^-n.
    """
    if pnum == 0:
        return 1
    lr = math.log2(pnum) - math.log2(qden)
    k = 0
    lt = 0.0  # log2 of (p/q)^k / k!
    while True:
        nxt = lt + lr - math.log2(k + 1)
        if nxt <= -n:
            return k + 1
        k += 1
        lt = nxt


def _expm1_rational(pnum, qden, w):
    """exp(p/q) - 1 as a BigFloat with relative error about 2^-w (p > 0)."""
    k = exp_rational_terms(pnum, qden, w + 2) - 1
    k = max(k, 1)
    _, qq, tt = _split_exp(1, k + 1, pnum, qden)
    return nw.div(from_int(tt), from_int(qq), w)


def exp_rational(pnum, qden, p):
    """exp(pnum/qden) for integers with pnum^2 <= qden <= 2^n."""
    pnum, qden = int(pnum), int(qden)
    n = _nbits(p)
    if qden <= 0:
        raise DomainError("denominator must be positive")
    if pnum * pnum > qden or qden > (1 << n):
        raise DomainError("need p^2 <= q <= 2^n")
    if pnum == 0:
        return ONE
    w = working_bits(p) + 4
    e = _expm1_rational(abs(pnum), qden, w)
    v = add(ONE, e, w)
    if pnum < 0:
        v = nw.recip(v, w)
    return round_to(v, working_bits(p))


@dataclass(frozen=True)
class DyadicDecomposition:
    """x = sum p_i / q_i with q_i = 2^(2^i) and 0 <= p_i < 2^(2^(i-1))."""

    terms: tuple

    def value(self):
        return sum((Fraction(pi, qi) for pi, qi in self.terms), Fraction(0))


def dyadic_decomposition(x, bits=None):
    """Split a fraction x in [0, 1) into dyadic blocks of doubling width.

    Block i holds fraction bits 2^(i-1)+1 .. 2^i (block 0 holds bit 1).
    ``bits`` truncates x to that many fraction bits first.
    """
    x = _bigfloat(x)
    if x.sign < 0 or cmp(x, ONE) >= 0:
        raise DomainError("dyadic decomposition needs 0 <= x < 1")
    if x.sign == 0:
        return DyadicDecomposition(())
    L = max(-x.exp2, 1)
    N = x.man if x.exp2 <= 0 else x.man << x.exp2
    if bits is not None and L > bits:
        N >>= L - bits
        L = bits
    k = (L - 1).bit_length()
    terms = []
    for i in range(k + 1):
        hi = 1 << i
        lo = 0 if i == 0 else hi >> 1
        width = hi - lo
        if L >= hi:
            block = (N >> (L - hi)) & ((1 << width) - 1)
        else:
            block = (N << (hi - L)) & ((1 << width) - 1)
        terms.append((block, 1 << hi))
    return DyadicDecomposition(tuple(terms))


def exp_fast(x, p):
    """exp(x) for x in [0, 1) as a product of exp(p_i/q_i) over dyadic blocks."""
    x = _bigfloat(x)
    if x.sign == 0:
        return ONE
    n = _nbits(p)
    w = working_bits(p) + 8
    dec = dyadic_decomposition(x, bits=w)
    terms = [(pi, qi) for pi, qi in dec.terms if pi]
    g = len(terms).bit_length()
    v = ONE
    for pi, qi in terms:
        prec = max(w + g, qi.bit_length() - 1)
        v = mk.mul(v, exp_rational(pi, qi, prec), w + g)
    return round_to(v, working_bits(p))


# ---------------------------------------------------------------------------
# ln
# ---------------------------------------------------------------------------

LN_START = 40


def ln(x, p, ledger=None, domain=LN_DOMAIN):
    """Natural log by discrete Newton on exp(z) - x.

    Each level m uses the step h = 2^-ceil(m/2) in the difference quotient
    and evaluates exp to absolute precision about 2^-m. The error is
    absolute (not relative) near x = 1.
    """
    x = _bigfloat(x)
    if x.sign <= 0:
        raise DomainError("ln needs x > 0")
    _check_domain(x, domain, "ln")
    if x == ONE:
        return ZERO
    n = _nbits(p)
    top = n + GUARD + 4
    f, e = x.man, x.exponent
    bl = f.bit_length()
    ff = math.ldexp(float(f >> max(bl - 53, 0)), -min(bl, 53))
    z = from_float(math.log(ff) + e * math.log(2.0))
    mag = max(x.exponent, 1) + 2        # exp(z) < 2^mag
    levels = nw.precision_schedule(top, 2, LN_START, guard=0).levels
    z = round_to(z, LN_START + 8)
    for m in levels[1:]:
        hb = -(-m // 2)
        h = shift2(ONE, -hb)
        ep = m + mag + GUARD
        psi0 = sub(exp(z, ep, ledger, domain=(-1e9, 1e9)), x, ep)
        psi1 = sub(exp(add(z, h, ep + 8), ep, ledger, domain=(-1e9, 1e9)), x, ep)
        mu = shift2(sub(psi1, psi0, ep), hb)
        if mu.sign == 0 or psi0.sign == 0:
            break
        d = nw.div(psi0, mu, hb + GUARD, ledger=ledger)
        z = sub(z, d, m + 2 * GUARD + max(z.exponent, 0) + max(-z.exponent, 0))
    return round_to(z, working_bits(p))


# ---------------------------------------------------------------------------
# sin
# ---------------------------------------------------------------------------

_QUARTER_PI = math.pi / 4


def _sin_series(t, w, ledger):
    s = t
    term = t
    t2 = mk.square(t, w, ledger)
    k = 1
    while True:
        term = neg(div_word(div_word(mk.mul(term, t2, w, ledger), k + 1, w), k + 2, w))
        k += 2
        if term.sign == 0:
            break
        s = add(s, term, w)
        if term.exponent < s.exponent - w - 1:
            break
    return s


def sin(x, p, ledger=None, domain=SIN_DOMAIN):
    """sin(x) by q = isqrt(n) halvings and the doubling formula.

    Going up from t_{k+1} = x/2^(k+1) to t_k, sin t_k = 2 s c with
    c = cos t_{k+1}. For |t_{k+1}| <= pi/4, c = +sqrt(1 - s^2) (the sign is
    known because |t_{k+1}| < pi/2). Above pi/4 the square root would lose
    half the digits near s = 1, so c = 1 - 2 sin^2(t_{k+1}/2) is used
    instead, which also fixes the sign.
    """
    x = _bigfloat(x)
    if x.sign == 0:
        return ZERO
    _check_domain(x, domain, "sin")
    n = _nbits(p)
    xf = abs(to_float(x))
    # at least enough halvings that the bottom argument is below pi/4
    q = max(math.isqrt(n), math.ceil(math.log2(max(xf / _QUARTER_PI, 1.0))) + 1)
    w = n + q + 2 * GUARD + q.bit_length()
    # s[k] = sin(x / 2^k), filled from k = q down to 0
    s = [None] * (q + 1)
    s[q] = _sin_series(shift2(x, -q), w, ledger)
    for k in range(q - 1, -1, -1):
        sk1 = s[k + 1]
        t_half = xf / 2.0 ** (k + 1)
        if t_half <= _QUARTER_PI:
            c = nw.sqrt(sub(ONE, mk.square(sk1, w, ledger), w), w, ledger=ledger)
        else:
            c = sub(ONE, shift2(mk.square(s[k + 2], w, ledger), 1), w)
        s[k] = shift2(mk.mul(sk1, c, w, ledger), 1)
    return round_to(s[0], working_bits(p))


# ---------------------------------------------------------------------------
# atan(1/j), e, pi
# ---------------------------------------------------------------------------

def _split_atan(a, b, j2):
    """Binary splitting for sum_{i=a}^{b-1} (-1)^i / ((2i+1) j^(2i)) (scaled).

    Returns (P, Q, B, T) with partial sum T/(B Q) in the usual sense, using
    p(i) = -1, q(i) = j^2 for i >= 1 and p(0) = q(0) = 1.
    """
    if b - a == 1:
        if a == 0:
            return 1, 1, 1, 1
        return -1, j2, 2 * a + 1, -1
    m = (a + b) // 2
    p1, q1, b1, t1 = _split_atan(a, m, j2)
    p2, q2, b2, t2 = _split_atan(m, b, j2)
    return p1 * p2, q1 * q2, b1 * b2, b2 * q2 * t1 + b1 * p1 * t2


def atan_recip_terms(j, w):
    """Terms N of the alternating series so the first omitted term is < 2^-w."""
    lj = math.log2(j)
    nt = max(1, math.ceil((w - lj) / (2 * lj)))
    while (2 * nt + 1) * j ** (2 * nt + 1) <= (1 << w):
        nt += 1
    return nt


def atan_recip(j, p):
    """arctan(1/j) for an integer j >= 2."""
    j = int(j)
    if j < 2:
        raise DomainError("atan_recip needs j >= 2")
    w = working_bits(p) + 4
    nt = atan_recip_terms(j, w)
    # remainder of an alternating series is below its first omitted term
    omitted_den = (2 * nt + 1) * j ** (2 * nt + 1)
    assert omitted_den > (1 << w), "atan series truncated too early"
    _, qq, bb, tt = _split_atan(0, nt, j * j)
    v = nw.div(from_int(tt), from_int(bb * qq * j), w)
    return round_to(v, working_bits(p))


def e_direct_terms(w):
    """Least r with r! > 2^w: sum_{j<r} 1/j! is then within 2^-w of e."""
    r, lf = 1, 0.0
    while lf <= w + 1:
        r += 1
        lf += math.log2(r)
    return r


def _e_direct(w):
    r = e_direct_terms(w)
    _, qq, tt = _split_exp(1, r, 1, 1)
    return add(ONE, nw.div(from_int(tt), from_int(qq), w), w)


def _e_scaled(w):
    m = max(1, math.isqrt(w))
    ww = w + m.bit_length() + 4
    ep = _expm1_rational(1, 1 << m, ww)
    for _ in range(m):
        ep = add(shift2(ep, 1), mk.square(ep, ww), ww)
    return add(ONE, ep, ww)


def const_e(p, method="direct"):
    """e by the factorial series (``direct``) or as exp(2^-m)^(2^m) (``scaled``)."""
    w = working_bits(p) + 4
    if method == "direct":
        v = _e_direct(w)
    elif method == "scaled":
        v = _e_scaled(w)
    else:
        raise DomainError("unknown method %r" % (method,))
    return round_to(v, working_bits(p))


@lru_cache(maxsize=32)
def _pi_cached(w, method):
    if method == "machin":
        a5 = atan_recip(5, w)
        a239 = atan_recip(239, w)
        return sub(shift2(a5, 4), shift2(a239, 2), w)
    a2 = atan_recip(2, w)
    a3 = atan_recip(3, w)
    return shift2(add(a2, a3, w), 2)


def const_pi(p, method="machin"):
    """pi = 16 atan(1/5) - 4 atan(1/239) (``machin``) or 4(atan(1/2) + atan(1/3))."""
    if method not in ("machin", "euler"):
        raise DomainError("unknown method %r" % (method,))
    w = working_bits(p) + 6
    return round_to(_pi_cached(w, method), working_bits(p))


# ---------------------------------------------------------------------------
# term counts for the worked e example
# ---------------------------------------------------------------------------

def terms_direct_decimal(digits):
    """Least r with r! >= 10^digits (terms 1/0! .. 1/(r-1)!)."""
    target = digits * math.log2(10)
    r, lf = 1, 0.0
    while lf < target:
        r += 1
        lf += math.log2(r)
    return r


def terms_scaled_decimal(digits, lam_log2):
    """Least r with r! * lam^(r-1) >= 10^digits, lam = 2^lam_log2."""
    target = digits * math.log2(10)
    r, lf = 1, 0.0
    while lf + (r - 1) * lam_log2 < target:
        r += 1
        lf += math.log2(r)
    return r


def scaled_sum_log2_bound(r, lam_log2):
    """log2(r! * lam^(r-1))."""
    return math.lgamma(r + 1) / math.log(2) + (r - 1) * lam_log2


# ---------------------------------------------------------------------------
# radix conversion
# ---------------------------------------------------------------------------

_LEAF = 36


@lru_cache(maxsize=None)
def _pow10(k):
    if k <= _LEAF:
        return 10 ** k
    h = k // 2
    return _pow10(h) * _pow10(k - h)


def _split_width(t):
    # largest power of two below t
    return 1 << ((t - 1).bit_length() - 1)


def int_to_digits(N, width):
    """Zero-padded decimal string of 0 <= N < 10^width by halving splits."""
    if width <= _LEAF:
        return "%0*d" % (width, N)
    h = _split_width(width)
    hi, lo = divmod(N, _pow10(h))
    return int_to_digits(hi, width - h) + int_to_digits(lo, h)


def digits_to_int(s):
    """Integer value of a digit string: x = x1 + 10^(t/2) x2, recursively."""
    t = len(s)
    if t <= _LEAF:
        return int(s)
    h = _split_width(t)
    return digits_to_int(s[t - h:]) + _pow10(h) * digits_to_int(s[:t - h])


def _scaled_floor(x, k):
    """floor(|x| * 10^k) for an exact BigFloat x."""
    num = x.man
    den = 1
    if k >= 0:
        num *= _pow10(k)
    else:
        den *= _pow10(-k)
    if x.exp2 >= 0:
        num <<= x.exp2
    else:
        den <<= -x.exp2
    return num // den


def format_digits(neg_, digs, E):
    """Canonical text for 0.d1d2... * 10^E (digs has no leading zero)."""
    d = len(digs)
    sgn = "-" if neg_ else ""
    if 1 <= E <= d:
        body = digs if E == d else digs[:E] + "." + digs[E:]
    elif -6 < E <= 0:
        body = "0." + "0" * (-E) + digs
    else:
        body = (digs[0] + "." + digs[1:] if d > 1 else digs) + "e%d" % (E - 1)
    return sgn + body


def to_decimal(x, digits):
    """``digits`` significant decimal digits of x, truncated toward zero."""
    digits = int(digits)
    if digits < 1:
        raise DomainError("need at least one digit")
    if x.sign == 0:
        return "0" if digits == 1 else "0." + "0" * (digits - 1)
    # decimal exponent E with 10^(E-1) <= |x| < 10^E
    E = math.floor((x.exponent - 1) * math.log10(2)) + 1
    lo, hi = _pow10(digits - 1), _pow10(digits)
    while True:
        N = _scaled_floor(x, digits - E)
        if N >= hi:
            E += 1
        elif N < lo:
            E -= 1
        else:
            break
    return format_digits(x.sign < 0, int_to_digits(N, digits), E)


def to_fixed(x, places):
    """|x| truncated to ``places`` digits after the point, with sign."""
    places = int(places)
    if places < 0:
        raise DomainError("negative number of places")
    if x.sign == 0:
        return "0" if places == 0 else "0." + "0" * places
    N = _scaled_floor(x, places)
    if N == 0:
        s = "0" if places == 0 else "0." + "0" * places
        return s
    s = str_int(N)
    if places:
        s = s.rjust(places + 1, "0")
        s = s[:-places] + "." + s[-places:]
    return ("-" if x.sign < 0 else "") + s


def str_int(N):
    """Decimal string of a nonnegative int of any size."""
    if N == 0:
        return "0"
    width = max(1, math.floor(N.bit_length() * math.log10(2)) + 1)
    s = int_to_digits(N, width + 1)
    return s.lstrip("0") or "0"


_DEC_RE = re.compile(r"(-)?([0-9]+)(?:\.([0-9]+))?(?:e(-?[0-9]+))?\Z")


def _ceil_to_bits(num, den, w):
    """(m, e) with m * 2^e >= num/den, m < 2^w, within one unit of bit w."""
    shift = w + 1 - (num.bit_length() - den.bit_length())
    if shift >= 0:
        m = -((-(num << shift)) // den)
    else:
        m = -((-num) // (den << -shift))
    e = -shift
    bl = m.bit_length()
    if bl > w:
        ex = bl - w
        m = -((-m) >> ex)
        e += ex
        if m.bit_length() > w:
            m >>= 1
            e += 1
    return m, e


def from_decimal(text, p):
    """Parse ``['-'] digits ['.' digits] ['e' ['-'] digits]``.

    The magnitude is rounded up (not truncated) to the working precision, so
    that a truncating :func:`to_decimal` gives the input digits back.
    """
    if not isinstance(text, str):
        raise ParseError("expected text")
    mt = _DEC_RE.match(text.strip())
    if not mt or not text.strip().isascii():
        raise ParseError("malformed decimal %r" % (text,))
    neg_, ip, fp, ex = mt.groups()
    fp = fp or ""
    digs = (ip + fp).lstrip("0")
    if not digs:
        return ZERO
    if len(digs) > 10 ** 6:
        raise ParseError("too many digits")
    D = digits_to_int(digs)
    k = (int(ex) if ex else 0) - len(fp)
    w = working_bits(p)
    if k >= 0:
        num, den = D * _pow10(k), 1
    else:
        num, den = D, _pow10(-k)
    m, e = _ceil_to_bits(num, den, w)
    return _make(-m if neg_ else m, e, w)
