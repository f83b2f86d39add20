from fractions import Fraction

import pytest

from mparith import mulkernel as mk
from mparith.bigfrac import ONE, ZERO, from_fraction, from_int, from_parts, to_fraction, working_bits
from mparith.errors import DomainError

from oracle import rand_bigfloat, rel_bits, rng


def _trunc_oracle(x, y, n):
    """Exact product of the operands truncated to working bits, then cut again."""
    w = working_bits(n)
    def cut(v):
        m, e = v.man, v.exp2
        if m.bit_length() > w:
            e += m.bit_length() - w
            m >>= m.bit_length() - w
        return m, e
    mx, ex = cut(x)
    my, ey = cut(y)
    return from_parts(x.sign * y.sign * mx * my, ex + ey, n)


def test_school_examples():
    y = from_fraction(Fraction(7, 3), 64)
    assert mk.mul_school(ZERO, y, 64) == ZERO
    assert mk.mul_school(from_fraction(Fraction(3, 2), 64), from_int(2), 64) == from_int(3)
    r = rng(5)
    x, y = rand_bigfloat(r, 512), rand_bigfloat(r, 512)
    assert mk.mul_school(x, y, 512) == _trunc_oracle(x, y, 512)


def test_karatsuba_step_example():
    assert mk.karatsuba_step(1, 2, 3, 4) == (3, 8, 21, 10)


def test_karatsuba_identity_and_threshold():
    x = from_fraction(Fraction(355, 113), 3000)
    assert mk.mul_karatsuba(x, ONE, 3000) == x
    with pytest.raises(DomainError):
        mk.int_mul_karatsuba(3, 5, threshold=0)
    # tiny thresholds still terminate and stay exact
    r = rng(6)
    for t in (1, 2, 3, 4):
        a, b = r.getrandbits(700), r.getrandbits(650)
        assert mk.int_mul_karatsuba(a, b, threshold=t) == a * b


@pytest.mark.parametrize("bits", [128, 1000, 3000, 8192])
def test_karatsuba_bit_exact_sample(bits):
    r = rng(bits)
    for _ in range(30):
        x, y = rand_bigfloat(r, bits), rand_bigfloat(r, r.randint(bits // 2, bits))
        assert mk.mul_karatsuba(x, y, bits, threshold=4) == mk.mul_school(x, y, bits)


def test_square_examples():
    assert mk.square(ZERO, 64) == ZERO
    assert mk.square(from_int(3), 64) == from_int(9)
    r = rng(7)
    for bits in (64, 700, 5000):
        x = rand_bigfloat(r, bits)
        assert mk.square(x, bits) == mk.mul(x, x, bits)


def test_mul_dispatch():
    r = rng(8)
    small = rand_bigfloat(r, 200), rand_bigfloat(r, 200)
    big = rand_bigfloat(r, 6000), rand_bigfloat(r, 6000)
    assert mk.mul(*small, 200) == mk.mul_school(*small, 200)
    assert mk.mul(*big, 6000) == mk.mul_school(*big, 6000)
    assert mk.mul(big[0], ZERO, 6000) == ZERO


def test_mul_via_squares_agrees():
    r = rng(9)
    for _ in range(100):
        n = r.choice((64, 256, 1024))
        x, y = rand_bigfloat(r, n), rand_bigfloat(r, n)
        exact = to_fraction(x) * to_fraction(y)
        assert rel_bits(mk.mul_via_squares(x, y, n), exact) >= n - 3


def test_work_growth_ratios():
    r = rng(10)
    def work(fn, bits):
        c = mk.WorkCounter()
        fn(r.getrandbits(bits) | 1 << (bits - 1), r.getrandbits(bits) | 1 << (bits - 1), counter=c)
        return c.limb_mults
    for bits in (1 << 14, 1 << 15):
        school = work(mk.int_mul_school, 2 * bits) / work(mk.int_mul_school, bits)
        kara = work(mk.int_mul_karatsuba, 2 * bits) / work(mk.int_mul_karatsuba, bits)
        assert school == pytest.approx(4.0, rel=0.10)
        assert kara == pytest.approx(3.0, rel=0.10)


def test_ledger_charges():
    from mparith.costs import CostLedger
    led = CostLedger()
    mk.mul(ONE, ONE, 100, ledger=led)
    mk.square(ONE, 100, ledger=led)
    assert [(e.cls, e.bits) for e in led.events] == [("M", 100), ("S", 100)]
