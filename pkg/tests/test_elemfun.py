import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mparith import elemfun as ef
from mparith import mulkernel as mk
from mparith.bigfrac import ONE, ZERO, add, from_fraction, from_int, neg, shift2, sub, to_fraction
from mparith.errors import DomainError, ParseError

from oracle import abs_bits, rel_bits, rng


def _rand_x(r, lo, hi, bits=200):
    return from_fraction(Fraction(r.randint(0, 1 << bits), 1 << bits) * (hi - lo) + lo, bits)


def _e_oracle(bits):
    # factorial sum with an exact rational tail bound
    s, t, k = Fraction(0), Fraction(1), 0
    while t > Fraction(1, 1 << (bits + 8)):
        s += t
        k += 1
        t /= k
    return s


# -- exp ---------------------------------------------------------------------

def test_exp_examples():
    assert ef.exp(ZERO, 64) == ONE
    assert abs_bits(ef.exp(ONE, 128), to_fraction(ef.const_e(128))) >= 125
    r = rng(20)
    for _ in range(20):
        x = _rand_x(r, -2, 2)
        n = 256
        assert abs_bits(mk.mul(ef.exp(x, n), ef.exp(neg(x), n), 2 * n), 1) >= n - 6


def test_exp_domain():
    with pytest.raises(DomainError):
        ef.exp(from_int(9), 64)


def test_exp_rational_examples():
    assert ef.exp_rational(0, 1, 64) == ONE
    assert ef.exp_rational_terms(1, 256, 108) == 11
    # 11 terms: 11! * 256^10 exceeds 10^31
    assert math.factorial(11) * 256 ** 10 > 10 ** 31
    x = ef.exp_rational(1, 4, 128)
    x4 = mk.square(mk.square(x, 256), 256)
    assert rel_bits(x4, to_fraction(ef.exp(ONE, 256))) >= 120
    with pytest.raises(DomainError):
        ef.exp_rational(3, 4, 64)
    neg_ = ef.exp_rational(-1, 4, 128)
    assert abs_bits(mk.mul(neg_, x, 256), 1) >= 124


def test_dyadic_decomposition():
    x = from_fraction(Fraction(13, 16), 8)
    dec = ef.dyadic_decomposition(x)
    assert dec.value() == Fraction(13, 16)
    for i, (p, q) in enumerate(dec.terms):
        assert q == 2 ** (2 ** i)
        assert p * p <= q
    assert [t for t in dec.terms if t[0]] == [(1, 2), (1, 4), (1, 16)]
    with pytest.raises(DomainError):
        ef.dyadic_decomposition(ONE)


def test_exp_fast_matches_exp():
    assert ef.exp_fast(ZERO, 64) == ONE
    r = rng(21)
    for _ in range(25):
        x = from_fraction(Fraction(r.getrandbits(512), 1 << 512), 512)
        assert rel_bits(ef.exp_fast(x, 512), to_fraction(ef.exp(x, 520))) >= 506


# -- ln ----------------------------------------------------------------------

def test_ln_examples():
    assert ef.ln(ONE, 64) == ZERO
    for n in (64, 256):
        assert abs_bits(ef.ln(ef.const_e(n + 8), n), 1) >= n - 6
    r = rng(22)
    for _ in range(20):
        x = _rand_x(r, -1, 2)
        assert abs_bits(ef.ln(ef.exp(x, 300), 256), to_fraction(x)) >= 256 - 6
    with pytest.raises(DomainError):
        ef.ln(ZERO, 64)
    with pytest.raises(DomainError):
        ef.ln(from_int(-2), 64)


# -- sin ---------------------------------------------------------------------

def test_sin_examples():
    assert ef.sin(ZERO, 64) == ZERO
    for n in (64, 256, 1024):
        pi = ef.const_pi(n + 16)
        assert abs_bits(ef.sin(shift2(pi, -1), n), 1) >= n - 8
        assert abs_bits(ef.sin(pi, n), 0) >= n - 8
    r = rng(23)
    n = 256
    half_pi = shift2(ef.const_pi(n + 16), -1)
    for _ in range(20):
        x = _rand_x(r, -3, 3)
        a = mk.square(ef.sin(x, n), n)
        b = mk.square(ef.sin(sub(half_pi, x, n + 16), n), n)
        assert abs_bits(add(a, b, n), 1) >= n - 8


def test_sin_is_odd_and_bounded():
    r = rng(24)
    for _ in range(20):
        x = _rand_x(r, -8, 8)
        s = ef.sin(x, 128)
        assert ef.sin(neg(x), 128) == neg(s)
        assert abs(to_fraction(s)) <= 1


# -- atan and the constants --------------------------------------------------

def test_atan_recip():
    for j in (2, 3, 5, 7, 239):
        v = to_fraction(ef.atan_recip(j, 128))
        assert 0 < v < Fraction(1, j)
    with pytest.raises(DomainError):
        ef.atan_recip(1, 64)
    n = 512
    a5, a239 = ef.atan_recip(5, n + 8), ef.atan_recip(239, n + 8)
    machin = 16 * to_fraction(a5) - 4 * to_fraction(a239)
    pi = to_fraction(ef.const_pi(n, method="euler"))
    assert abs_bits(machin, pi) >= n - 4
    s = to_fraction(ef.atan_recip(2, n + 8)) + to_fraction(ef.atan_recip(3, n + 8))
    assert abs_bits(s, to_fraction(ef.const_pi(n)) / 4) >= n - 4


def test_const_e():
    assert ef.to_decimal(ef.const_e(120), 31) == "2.718281828459045235360287471352"
    assert ef.terms_direct_decimal(30) == 29
    assert ef.terms_scaled_decimal(30, 8) == 11
    for n in (64, 1024, 4096):
        a, b = ef.const_e(n), ef.const_e(n, method="scaled")
        assert rel_bits(a, to_fraction(b)) >= n - 2
    assert rel_bits(ef.const_e(400), _e_oracle(400)) >= 400


def test_const_pi():
    assert ef.to_decimal(ef.const_pi(80), 21) == "3.14159265358979323846"
    assert ef.to_decimal(ef.const_pi(64), 10) == "3.141592653"
    for n in (64, 1024, 4096):
        assert rel_bits(ef.const_pi(n), to_fraction(ef.const_pi(n, method="euler"))) >= n - 2
    with pytest.raises(DomainError):
        ef.const_pi(64, method="nope")


def test_scaled_e_arithmetic_for_a_million_digits():
    # 1820 terms with 1820 squarings suffice for 10^6 decimals
    assert ef.terms_direct_decimal(10 ** 6) == 205023
    assert ef.terms_scaled_decimal(10 ** 6, 1820) <= 1820
    assert ef.scaled_sum_log2_bound(1820, 1820) >= 10 ** 6 * math.log2(10)


# -- radix conversion --------------------------------------------------------

def test_decimal_examples():
    assert ef.from_decimal("1", 64) == ONE
    assert ef.to_decimal(shift2(ONE, 100), 31) == "1267650600228229401496703205376"
    assert ef.to_decimal(ef.from_decimal("-0.00125", 64), 3) == "-0.00125"
    assert ef.to_decimal(ef.from_decimal("6.02214076e23", 96), 9) == "6.02214076e23"
    for bad in ("", "1.", ".5", "1e", "--1", "1,5", "１"):
        with pytest.raises(ParseError):
            ef.from_decimal(bad, 64)


def test_int_digit_conversion_dc():
    r = rng(25)
    for _ in range(50):
        N = r.getrandbits(r.randint(1, 5000))
        s = ef.str_int(N)
        assert s == str(N)
        assert ef.digits_to_int(s) == N


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="0123456789", min_size=1, max_size=60), st.integers(-30, 30))
def test_roundtrip_canonical(digs, e10):
    digs = digs.lstrip("0") or "1"
    text = digs[0] + ("." + digs[1:] if len(digs) > 1 else "") + "e" + str(e10)
    n = int(len(digs) * math.log2(10)) + 16
    back = ef.to_decimal(ef.from_decimal(text, n), len(digs))
    assert _value(back) == _value(text)


def _value(s):
    m, _, e = s.partition("e")
    ip, _, fp = m.partition(".")
    return Fraction(int(ip + fp), 10 ** len(fp)) * Fraction(10) ** int(e or 0)


def test_to_fixed():
    assert ef.to_fixed(ef.exp(ZERO, 120), 30) == "1." + "0" * 30
    assert ef.to_fixed(ZERO, 3) == "0.000"
    assert ef.to_fixed(neg(from_fraction(Fraction(5, 4), 64)), 2) == "-1.25"


def test_noncanonical_inputs_normalize():
    ref = ef.from_decimal("1.5", 128)
    for text in ("001.50", "1.500000", "15e-1", "0.15e1", " 1.5 "):
        assert ef.from_decimal(text, 128) == ref
    assert ef.from_decimal("-0.000", 64) == ZERO


def test_exp_of_ln_is_identity():
    r = rng(26)
    for n in (64, 256, 1024):
        for _ in range(10):
            x = _rand_x(r, Fraction(1, 200), 200, bits=n)
            assert rel_bits(ef.exp(ef.ln(x, n + 16), n), to_fraction(x)) >= n - 8
