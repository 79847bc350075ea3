"""Small exact-arithmetic helpers shared across modules."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


def nth_root_floor(n: int, k: int) -> int:
    """floor(n ** (1/k)) for nonnegative integer n, exact."""
    if n < 0:
        raise ValueError("negative radicand")
    if k < 1:
        raise ValueError("root order must be >= 1")
    if n in (0, 1) or k == 1:
        return n
    if k == 2:
        return isqrt(n)
    x = 1 << (-(-n.bit_length() // k) + 1)  # upper seed
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def root_floor(x: Fraction, k: int, digits: int = 30) -> Fraction:
    """x ** (1/k) rounded toward -infinity to the given decimal precision.

    Exact when x is a perfect k-th power of a rational with denominator
    dividing the scale.
    """
    if x < 0:
        raise ValueError("negative radicand")
    scale = 10 ** digits
    num = x.numerator * scale ** k // x.denominator
    return Fraction(nth_root_floor(num, k), scale)


def sqrt_floor(x: Fraction, digits: int = 30) -> Fraction:
    return root_floor(x, 2, digits)


def is_perfect_square(n: int) -> bool:
    r = isqrt(n)
    return r * r == n


def rational_sqrt_exact(x: Fraction) -> Fraction | None:
    """sqrt(x) if it is rational, else None."""
    if x < 0:
        return None
    rn, rd = isqrt(x.numerator), isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def floor_frac(x: Fraction) -> int:
    return x.numerator // x.denominator


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with smallest denominator in the closed interval [lo, hi].

    Among integers in range, the one smallest in absolute value is
    returned (ties broken toward the nonnegative one).
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise ValueError("empty interval")
    lo_int, hi_int = ceil_frac(lo), floor_frac(hi)
    if lo_int <= hi_int:
        if lo_int <= 0 <= hi_int:
            return Fraction(0)
        return Fraction(lo_int if lo_int > 0 else hi_int)
    # Interval strictly inside (f, f+1): recurse on reciprocals.
    f = floor_frac(lo)
    inner = simplest_between(1 / (hi - f), 1 / (lo - f))
    return f + 1 / inner


def rationals_in_interval_bounded(lo: Fraction, hi: Fraction, den_sq_bound: Fraction,
                                  cap: int = 10_000) -> list[Fraction]:
    """All reduced rationals p/q in [lo, hi] with q*q < den_sq_bound.

    Stern-Brocot style: the simplest rational is found first and the
    interval is split around it; distinct qualifying rationals are at
    least 1/(q * Q) apart, which bounds the exclusion nudge.
    """
    if lo > hi or den_sq_bound <= 1:
        return []
    # Any qualifying denominator is <= q_cap.
    q_cap = isqrt(ceil_frac(den_sq_bound))
    while Fraction(q_cap * q_cap) >= den_sq_bound:
        q_cap -= 1
    if q_cap < 1:
        return []
    out: list[Fraction] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        if a > b:
            continue
        v = simplest_between(a, b)
        if v.denominator > q_cap:
            continue
        out.append(v)
        if len(out) > cap:
            raise RuntimeError("rational enumeration budget exceeded")
        eps = Fraction(1, v.denominator * (q_cap + 1))
        stack.append((a, v - eps))
        stack.append((v + eps, b))
    return sorted(out)
