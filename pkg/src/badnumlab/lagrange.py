"""Finite-scale estimation of the Lagrange constant L(x).

L(x) = liminf_q q^{1/d} dist(qx, Z^d) is not finitely computable; the
estimators here report minima over explicit windows (trailing convergent
indices, or a denominator range) and are exact rationals in dimension 1.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Callable, Sequence

from .cf import CFWord, evaluate, states
from .numutil import nth_root_floor

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class Multiplier:
    """A reduced rational multiplier i/j."""

    i: int
    j: int

    def __post_init__(self) -> None:
        if self.i < 1 or self.j < 1:
            raise ValueError("i and j must be positive")
        if gcd(self.i, self.j) != 1:
            raise ValueError(f"{self.i}/{self.j} is not reduced")

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.i, self.j)

    def __str__(self) -> str:
        return f"{self.i}/{self.j}"


@dataclass(frozen=True)
class DecaySchedule:
    """Distinct multipliers i_k/j_k with weights g(k), k = 1-based."""

    fractions: tuple[Multiplier, ...]
    weight: Callable[[int], Fraction]

    def __post_init__(self) -> None:
        if len(set(self.fractions)) != len(self.fractions):
            raise ValueError("schedule fractions must be pairwise distinct")


@dataclass(frozen=True)
class LagrangeEstimate:
    value: Fraction
    q_max: int
    window_start: int | None = None
    window_end: int | None = None
    argmin_q: int | None = None

    def __float__(self) -> float:
        return float(self.value)


def lagrange_cf(w: CFWord, window: Fraction = Fraction(1, 2)) -> LagrangeEstimate:
    """Windowed liminf proxy: min of q_n * |q_n x - p_n| over the middle
    convergent indices n in [ceil(f * N), N - ceil(f * N)], exact, where
    N = len(w) and f is the window fraction.

    The guard is symmetric: the value at index n depends on the digits
    beyond n, so indices near the end of a finite word are biased by tail
    truncation just as early indices are biased by transient convergents.
    The final index is always excluded, so a rational input never
    reports 0.
    """
    depth = len(w)
    if depth < 4:
        raise ValueError(f"word too short for a windowed estimate: {depth} < 4")
    window = Fraction(window)
    if not (0 <= window < 1):
        raise ValueError("window must be a fraction in [0, 1)")
    cut = -((-window.numerator * depth) // window.denominator)  # ceil(f * N)
    n_start = max(1, min(cut, depth - 1))
    n_end = max(n_start, min(depth - cut, depth - 1))
    x = evaluate(w)
    best = None
    best_q = None
    for s in states(w):
        if s.n > n_end:
            break
        if s.n < n_start:
            continue
        v = s.q_cur * abs(s.q_cur * x - s.p_cur)
        if best is None or v < best:
            best, best_q = v, s.q_cur
    assert best is not None
    return LagrangeEstimate(best, q_max=best_q if best_q else 0,
                            window_start=n_start, window_end=n_end, argmin_q=best_q)


def window_min(w: CFWord, n_start: int, n_end: int) -> LagrangeEstimate:
    """min of q_n * |q_n x - p_n| over explicit convergent indices."""
    if not (1 <= n_start <= n_end <= len(w)):
        raise ValueError("bad index window")
    x = evaluate(w)
    best = None
    best_q = None
    for s in states(w):
        if s.n > n_end:
            break
        if s.n < n_start:
            continue
        v = s.q_cur * abs(s.q_cur * x - s.p_cur)
        if best is None or v < best:
            best, best_q = v, s.q_cur
    assert best is not None
    return LagrangeEstimate(best, q_max=best_q, window_start=n_start,
                            window_end=n_end, argmin_q=best_q)


ROOT_DIGITS = 50


def _dist_to_int(num: int, den: int) -> int:
    """den * dist(num/den, Z), as the integer min(r, den - r)."""
    r = num % den
    return min(r, den - r)


def lagrange_direct(x: Fraction | Sequence[Fraction], q_max: int,
                    q_min: int = 1) -> LagrangeEstimate:
    """min over q in [q_min, q_max] of q^{1/d} * dist_inf(q x, Z^d).

    Exact for d = 1; for d >= 2 the root q^{1/d} is evaluated to 50
    decimal digits rounded down, so the reported value is a lower bound.
    """
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    if not (1 <= q_min <= q_max):
        raise ValueError("need 1 <= q_min <= q_max")
    if isinstance(x, Fraction):
        return _lagrange_direct_1d(x, q_max, q_min)
    xs = tuple(Fraction(c) for c in x)
    if len(xs) == 1:
        return _lagrange_direct_1d(xs[0], q_max, q_min)
    return _lagrange_direct_nd(xs, q_max, q_min)


def _lagrange_direct_1d(x: Fraction, q_max: int, q_min: int) -> LagrangeEstimate:
    a, b = x.numerator, x.denominator
    a %= b
    best_num = None
    best_q = q_min
    for q in range(q_min, q_max + 1):
        v = q * _dist_to_int(q * a, b)
        if best_num is None or v < best_num:
            best_num, best_q = v, q
            if v == 0:
                break
    return LagrangeEstimate(Fraction(best_num, b), q_max=q_max, argmin_q=best_q)


def _lagrange_direct_nd(xs: Vector, q_max: int, q_min: int) -> LagrangeEstimate:
    d = len(xs)
    scale = 10 ** ROOT_DIGITS
    best = None
    best_q = q_min
    for q in range(q_min, q_max + 1):
        dist = max(Fraction(_dist_to_int(q * c.numerator, c.denominator),
                            c.denominator) for c in xs)
        root = Fraction(nth_root_floor(q * scale ** d, d), scale)
        v = root * dist
        if best is None or v < best:
            best, best_q = v, q
            if v == 0:
                break
    return LagrangeEstimate(best, q_max=q_max, argmin_q=best_q)


DEFAULT_TOL = Fraction(1, 10 ** 9)


@dataclass(frozen=True)
class CrudeBoundReport:
    """Check of L((i/j)x) >= L(x)/(i j) at a finite denominator scale."""

    multiplier: Multiplier
    base: LagrangeEstimate
    scaled: LagrangeEstimate
    margin: Fraction
    holds: bool


def check_crude_bound(w: CFWord, m: Multiplier, q_max: int,
                      tol: Fraction = DEFAULT_TOL) -> CrudeBoundReport:
    """Verify the trivial multiplication bound on finite minima.

    The base estimate scans denominators up to i * q_max: the bound for
    (i/j)x at scale q rests on approximations of x with denominator iq.
    """
    x = evaluate(w)
    base = lagrange_direct(x, q_max=m.i * q_max)
    scaled = lagrange_direct(m.fraction * x, q_max=q_max)
    lower = base.value / (m.i * m.j)
    margin = scaled.value - lower
    return CrudeBoundReport(m, base, scaled, margin, holds=margin >= -tol)


@dataclass(frozen=True)
class DecayRow:
    k: int
    multiplier: Multiplier
    weight: Fraction
    estimate: LagrangeEstimate

    @property
    def weighted(self) -> Fraction:
        return self.weight * self.estimate.value


def decay_table(w: CFWord, schedule: DecaySchedule, q_max: int,
                q_min: int | None = None) -> list[DecayRow]:
    """One row per schedule entry: L-hat((i_k/j_k) x) and g(k) * L-hat.

    By default the scan is restricted to the tail window [sqrt(q_max),
    q_max] so early best approximations do not drown the liminf proxy.
    """
    x = evaluate(w)
    if not (0 < x < 1):
        raise ValueError("word must evaluate inside (0,1)")
    if q_min is None:
        q_min = max(1, isqrt(q_max))
    rows = []
    for k, m in enumerate(schedule.fractions, start=1):
        est = lagrange_direct(m.fraction * x, q_max=q_max, q_min=q_min)
        rows.append(DecayRow(k, m, Fraction(schedule.weight(k)), est))
    return rows


def _sig12(x: Fraction) -> str:
    return f"{float(x):.12g}"


def decay_table_csv(rows: list[DecayRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "i", "j", "L_hat", "g_times_L"])
    for r in rows:
        writer.writerow([r.k, r.multiplier.i, r.multiplier.j,
                         _sig12(r.estimate.value), _sig12(r.weighted)])
    return buf.getvalue()


def decay_table_json(rows: list[DecayRow]) -> str:
    return json.dumps([
        {
            "k": r.k,
            "i": r.multiplier.i,
            "j": r.multiplier.j,
            "L_hat": _sig12(r.estimate.value),
            "g_times_L": _sig12(r.weighted),
        }
        for r in rows
    ])
