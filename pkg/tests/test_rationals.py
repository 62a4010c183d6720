from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padic_cf import (
    INFINITY,
    DigitVector,
    InvalidInput,
    InvalidPrime,
    canonical_mod,
    digits,
    fractional_part,
    integral_part,
    is_prime,
    padic_sqrt,
    unit_square_test,
    vp,
)

PRIMES = (2, 3, 5, 7, 13)

primes = st.sampled_from(PRIMES)
rationals = st.builds(
    Fraction,
    st.integers(min_value=-10**6, max_value=10**6),
    st.integers(min_value=1, max_value=10**6),
)
nonzero_rationals = rationals.filter(lambda x: x != 0)


def test_vp_examples():
    assert vp(Fraction(3, 2), 3) == 1
    assert vp(0, 5) == INFINITY
    assert vp(Fraction(1, 25), 5) == -2


def test_vp_rejects_composite_modulus():
    with pytest.raises(InvalidPrime):
        vp(Fraction(1, 2), 6)
    with pytest.raises(InvalidPrime):
        vp(Fraction(1, 2), 1)


def test_is_prime_small():
    assert [n for n in range(2, 30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)


def test_digits_examples():
    # oracle: 1/2 = inverse of 2 mod 3^4 = 41 = 2 + 3 + 9 + 27
    assert digits(Fraction(1, 2), 3, 4).digits == (2, 1, 1, 1)
    assert digits(7, 5, 2).digits == (2, 1)
    assert digits(0, 5, 3) == DigitVector(0, (0, 0, 0), 5)


def test_digits_leading_digit_nonzero():
    dv = digits(Fraction(50, 3), 5, 4)
    assert dv.start_index == 2
    assert dv.digits[0] != 0


def test_integral_part_examples():
    assert integral_part(Fraction(3, 2), 3) == 0
    assert integral_part(Fraction(1, 2), 3) == 2
    assert integral_part(Fraction(1, 5), 5) == Fraction(1, 5)


def test_unit_square_test_examples():
    assert unit_square_test(149, 5)
    assert unit_square_test(-11, 5)
    assert not unit_square_test(5, 5)
    with pytest.raises(InvalidInput):
        unit_square_test(0, 5)


def test_unit_square_test_p2():
    assert unit_square_test(17, 2)
    assert not unit_square_test(3, 2)
    assert not unit_square_test(2, 2)
    assert unit_square_test(4, 2)


@given(nonzero_rationals, nonzero_rationals, primes)
def test_vp_is_multiplicative(x, y, p):
    assert vp(x * y, p) == vp(x, p) + vp(y, p)


@given(nonzero_rationals, nonzero_rationals, primes)
def test_vp_ultrametric(x, y, p):
    if x + y == 0:
        return
    vx, vy = vp(x, p), vp(y, p)
    v = vp(x + y, p)
    assert v >= min(vx, vy)
    if vx != vy:
        assert v == min(vx, vy)


@given(rationals, primes)
def test_integral_fractional_decomposition(x, p):
    head = integral_part(x, p)
    tail = fractional_part(x, p)
    assert head + tail == x
    assert 0 <= head < p
    assert head == 0 or head.denominator == p ** max(0, -vp(x, p))
    assert tail == 0 or vp(tail, p) >= 1


@given(nonzero_rationals, primes, st.integers(min_value=1, max_value=12))
def test_digits_round_trip(x, p, count):
    dv = digits(x, p, count)
    assert dv.start_index == vp(x, p)
    assert dv.digits[0] != 0
    remainder = x - dv.value()
    assert remainder == 0 or vp(remainder, p) >= dv.start_index + count


@given(nonzero_rationals, primes, st.integers(min_value=1, max_value=20))
def test_canonical_mod_is_congruent(x, p, n):
    r = canonical_mod(x, p, n)
    assert r == x or vp(x - r, p) >= n


@given(nonzero_rationals, primes, st.integers(min_value=1, max_value=24))
def test_padic_sqrt_approximates_a_square_root(x, p, prec):
    s = padic_sqrt(x * x, p, prec)
    # s must match one of the two exact roots to the stated precision
    assert any(e == 0 or vp(e, p) >= prec for e in (x - s, x + s))


@given(nonzero_rationals, primes)
def test_padic_sqrt_branch_consistency(x, p):
    square = x * x
    lo = padic_sqrt(square, p, 6)
    hi = padic_sqrt(square, p, 14)
    diff = hi - lo
    assert diff == 0 or vp(diff, p) >= 6
