"""Integer roots, directed rounding, and Stern-Brocot enumeration."""

from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given, settings, strategies as st

from badnumlab.numutil import (ceil_frac, floor_frac, nth_root_floor,
                               rational_sqrt_exact, rationals_in_interval_bounded,
                               root_floor, simplest_between, sqrt_floor)


@given(st.integers(min_value=0, max_value=10 ** 30),
       st.integers(min_value=1, max_value=7))
def test_nth_root_floor_bracket(n, k):
    r = nth_root_floor(n, k)
    assert r ** k <= n < (r + 1) ** k


def test_nth_root_floor_matches_isqrt():
    for n in [0, 1, 2, 3, 4, 8, 9, 10 ** 18, 10 ** 18 + 1]:
        assert nth_root_floor(n, 2) == isqrt(n)


def test_root_floor_is_lower_bound():
    v = root_floor(Fraction(2), 2, digits=30)
    assert v * v <= 2 < (v + Fraction(1, 10 ** 30)) ** 2
    assert sqrt_floor(Fraction(9, 4)) == Fraction(3, 2)


def test_rational_sqrt_exact():
    assert rational_sqrt_exact(Fraction(49, 81)) == Fraction(7, 9)
    assert rational_sqrt_exact(Fraction(2)) is None
    assert rational_sqrt_exact(Fraction(-1)) is None


@given(st.fractions(min_value=-100, max_value=100))
def test_floor_ceil(x):
    assert floor_frac(x) <= x < floor_frac(x) + 1
    assert ceil_frac(x) - 1 < x <= ceil_frac(x)


@given(st.fractions(min_value=-10, max_value=10, max_denominator=500),
       st.fractions(min_value=0, max_value=3, max_denominator=500))
@settings(deadline=None)
def test_simplest_between_is_minimal(lo, width):
    hi = lo + width
    v = simplest_between(lo, hi)
    assert lo <= v <= hi
    # No rational with smaller denominator fits in the interval.
    for q in range(1, v.denominator):
        p_lo = ceil_frac(lo * q)
        p_hi = floor_frac(hi * q)
        assert p_lo > p_hi


def test_simplest_between_integer_ties():
    assert simplest_between(Fraction(-3), Fraction(5)) == 0
    assert simplest_between(Fraction(2), Fraction(7)) == 2
    assert simplest_between(Fraction(-7), Fraction(-2)) == -2
    with pytest.raises(ValueError):
        simplest_between(Fraction(1), Fraction(0))


@given(st.fractions(min_value=0, max_value=2),
       st.fractions(min_value=0, max_value=1),
       st.integers(min_value=2, max_value=40))
def test_interval_enumeration_complete(lo, width, q_cap):
    hi = lo + width
    bound = Fraction(q_cap * q_cap)  # q qualifies iff q < q_cap
    got = set(rationals_in_interval_bounded(lo, hi, bound))
    want = set()
    for q in range(1, q_cap):
        for p in range(ceil_frac(lo * q), floor_frac(hi * q) + 1):
            want.add(Fraction(p, q))
    assert got == want
