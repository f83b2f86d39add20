from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mparith import bigfrac as bf
from mparith.bigfrac import (
    ONE, ZERO, BigFloat, Precision, add, cmp, div_word, from_fraction, from_int,
    mul_word, normalize, round_to, shift2, sub, to_fraction,
)
from mparith.errors import DivisionByZero, DomainError, RangeError

from oracle import abs_bits, rand_bigfloat, rel_bits, rng


def bfs(bits_lo=64, bits_hi=4096):
    @st.composite
    def _s(draw):
        bits = draw(st.integers(bits_lo, bits_hi))
        m = draw(st.integers(1 << (bits - 1), (1 << bits) - 1))
        s = draw(st.sampled_from((-1, 1)))
        e = draw(st.integers(-60, 60))
        return bf.from_parts(s * m, e - bits, bits)
    return _s()


# -- representation ----------------------------------------------------------

def test_zero_is_unique():
    z = sub(from_int(5), from_int(5), 64)
    assert z.sign == 0 and z.fraction == () and z == ZERO


def test_normalized_fraction_top_digit_nonzero():
    x = from_fraction(Fraction(1, 3), 100)
    digs = x.fraction
    assert digs[0] != 0 and digs[0] >> 31 == 1
    # fraction length within one word of the precision carried
    assert len(digs) * 32 - x.precision_bits < 32 + 32


def test_precision_validation():
    with pytest.raises(DomainError):
        Precision(0)
    with pytest.raises(DomainError):
        Precision(10, guard_bits=1)
    assert Precision(64).working == 72


def test_immutable():
    with pytest.raises(AttributeError):
        ONE.sign = -1


def test_exponent_overflow_is_an_error():
    big = shift2(ONE, bf.EXP_MAX - 1)
    with pytest.raises(RangeError):
        shift2(big, 10)
    with pytest.raises(RangeError):
        bf.mul_word(big, 1 << 20, 64)


# -- examples ----------------------------------------------------------------

def test_add_examples():
    assert add(ONE, ONE, 64) == from_int(2)
    x = from_fraction(Fraction(22, 7), 64)
    assert add(x, ZERO, 64) == x
    assert add(shift2(ONE, -80), ONE, 64) == ONE


def test_sub_examples():
    x = from_fraction(Fraction(5, 11), 200)
    assert sub(x, x, 64) == ZERO
    assert sub(from_int(3), ONE, 64) == from_int(2)
    y = from_fraction(Fraction(3, 2) / 2 ** 64, 64)
    exact = 1 - Fraction(3, 2) / 2 ** 64
    assert rel_bits(sub(ONE, y, 64), exact) >= 64 - 2


def test_word_ops_examples():
    x = from_fraction(Fraction(7, 9), 64)
    assert mul_word(x, 1, 64) == round_to(x, 72)
    assert rel_bits(div_word(ONE, 3, 64), Fraction(1, 3)) >= 64
    assert mul_word(from_fraction(Fraction(1, 2), 64), 6, 64) == from_int(3)
    with pytest.raises(DivisionByZero):
        div_word(ONE, 0, 64)
    with pytest.raises(DomainError):
        mul_word(ONE, 1 << 32, 64)


def test_shift_examples():
    x = from_fraction(Fraction(13, 17), 64)
    assert shift2(x, 0) == x
    assert shift2(ONE, 3) == from_int(8)
    assert shift2(shift2(x, 17), -17) == x


def test_cmp_and_round_examples():
    assert cmp(ONE, from_int(2)) == -1
    assert from_int(2) > ONE
    x = from_int(12345)
    assert round_to(x, 64) == x
    third = from_fraction(Fraction(1, 3), 128)
    r = round_to(third, 64)
    assert r.man.bit_length() <= 64
    assert rel_bits(r, Fraction(1, 3)) > 63


def test_from_float_and_back():
    for v in (0.1, -3.75, 1e-300, 2.0 ** 900):
        assert bf.to_float(bf.from_float(v)) == v
    with pytest.raises(DomainError):
        bf.from_float(float("nan"))


# -- properties --------------------------------------------------------------

@settings(max_examples=150, deadline=None)
@given(bfs(), bfs(), st.integers(64, 4096))
def test_add_sub_against_rational_oracle(x, y, n):
    ex = to_fraction(x) + to_fraction(y)
    r = add(x, y, n)
    if ex == 0:
        assert r == ZERO
    else:
        # truncation of the exact sum: at most 2^-(n+8) relative
        assert rel_bits(r, ex) >= n - 2
    ed = to_fraction(x) - to_fraction(y)
    if ed:
        assert rel_bits(sub(x, y, n), ed) >= n - 2


@settings(max_examples=100, deadline=None)
@given(bfs(), st.integers(1, (1 << 32) - 1), st.integers(64, 4096))
def test_word_ops_against_oracle(x, s, n):
    assert rel_bits(mul_word(x, s, n), to_fraction(x) * s) >= n - 2
    assert rel_bits(div_word(x, s, n), to_fraction(x) / s) >= n - 2


@settings(max_examples=100, deadline=None)
@given(bfs(), bfs())
def test_add_commutative_and_roundtrip(x, y):
    n = 256
    assert add(x, y, n) == add(y, x, n)
    s = add(x, y, n)
    back = sub(s, y, n)
    # cancellation can only cost what the sum's magnitude lost relative to y
    lost = max(0, y.exponent - x.exponent)
    assert rel_bits(back, to_fraction(x)) >= n - 2 - lost - 2


@settings(max_examples=100, deadline=None)
@given(bfs())
def test_normalize_idempotent(x):
    assert normalize(normalize(x)) == normalize(x)


def test_cmp_matches_rational_order():
    r = rng(3)
    for _ in range(1000):
        bits = r.randint(1, 300)
        x = rand_bigfloat(r, bits, (-5, 5))
        y = rand_bigfloat(r, r.randint(1, 300), (-5, 5)) if r.random() < 0.8 else x
        fx, fy = to_fraction(x), to_fraction(y)
        assert cmp(x, y) == (fx > fy) - (fx < fy)


def test_ulp_error_helper():
    assert bf.ulp_error(from_int(3), 3) == 0.0
    assert abs_bits(from_int(3), Fraction(3)) == float("inf")
