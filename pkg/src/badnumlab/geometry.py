"""Exact-rational balls, hyperplanes, and the Simplex Lemma as a predicate.

Balls are closed and use the max norm (so they are boxes); hyperplane
thickenings use Euclidean point-to-plane distance, compared exactly via
squares.  A "rational point" in dimension d means (p_1/q, ..., p_d/q)
with one common denominator q.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .numutil import (ceil_frac, floor_frac, nth_root_floor, rational_sqrt_exact,
                      sqrt_floor)

Point = tuple[Fraction, ...]


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed its combinatorial budget."""


@dataclass(frozen=True)
class Ball:
    """Closed max-norm ball (box) with rational center and radius."""

    center: Point
    radius: Fraction

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def dimension(self) -> int:
        return len(self.center)

    def contains_point(self, x: Point) -> bool:
        return all(abs(xi - ci) <= self.radius for xi, ci in zip(x, self.center))

    def contains_ball(self, other: "Ball") -> bool:
        return all(abs(oi - ci) <= self.radius - other.radius
                   for oi, ci in zip(other.center, self.center))

    def doubled(self) -> "Ball":
        return Ball(self.center, 2 * self.radius)

    def scaled(self, factor: Fraction) -> "Ball":
        f = Fraction(factor)
        if f <= 0:
            raise ValueError("scale factor must be positive")
        return Ball(tuple(f * c for c in self.center), f * self.radius)

    @classmethod
    def interval(cls, center: Fraction, radius: Fraction) -> "Ball":
        return cls((Fraction(center),), Fraction(radius))


@dataclass(frozen=True)
class Hyperplane:
    """<normal, x> = offset with an integer normal, gcd 1, first nonzero > 0."""

    normal: tuple[int, ...]
    offset: Fraction

    def __post_init__(self) -> None:
        if all(n == 0 for n in self.normal):
            raise ValueError("normal must be nonzero")

    @classmethod
    def from_rational(cls, normal: Sequence[Fraction], offset: Fraction) -> "Hyperplane":
        normal = [Fraction(n) for n in normal]
        if all(n == 0 for n in normal):
            raise ValueError("normal must be nonzero")
        lcm = 1
        for n in normal:
            lcm = lcm * n.denominator // gcd(lcm, n.denominator)
        ints = [int(n * lcm) for n in normal]
        g = 0
        for v in ints:
            g = gcd(g, v)
        ints = [v // g for v in ints]
        offset = Fraction(offset) * lcm / g
        lead = next(v for v in ints if v != 0)
        if lead < 0:
            ints = [-v for v in ints]
            offset = -offset
        return cls(tuple(ints), offset)

    @classmethod
    def point(cls, x: Fraction) -> "Hyperplane":
        """The dimension-1 hyperplane {x}."""
        return cls.from_rational((Fraction(1),), Fraction(x))

    def contains(self, x: Point) -> bool:
        return self.eval_at(x) == 0

    def eval_at(self, x: Point) -> Fraction:
        return sum(n * xi for n, xi in zip(self.normal, x)) - self.offset

    def norm_sq(self) -> int:
        return sum(n * n for n in self.normal)


def point_plane_distance_sq(x: Point, h: Hyperplane) -> Fraction:
    """Squared Euclidean distance from x to h, exact."""
    delta = h.eval_at(x)
    return delta * delta / h.norm_sq()


def point_plane_distance(x: Point, h: Hyperplane) -> Fraction:
    """Euclidean distance from x to h: exact if rational, otherwise a
    30-digit lower bound."""
    dsq = point_plane_distance_sq(x, h)
    exact = rational_sqrt_exact(dsq)
    return exact if exact is not None else sqrt_floor(dsq)


@dataclass(frozen=True)
class HyperplaneNeighborhood:
    """All points within `thickness` (Euclidean) of the plane."""

    plane: Hyperplane
    thickness: Fraction

    def __post_init__(self) -> None:
        if self.thickness <= 0:
            raise ValueError("thickness must be positive")

    def contains_point(self, x: Point) -> bool:
        delta = self.plane.eval_at(x)
        return delta * delta <= self.thickness ** 2 * self.plane.norm_sq()

    def intersects_ball(self, b: Ball) -> bool:
        """Exact box-vs-thickened-plane intersection test."""
        n = self.plane.normal
        mid = sum(ni * ci for ni, ci in zip(n, b.center))
        spread = b.radius * sum(abs(ni) for ni in n)
        lo, hi = mid - spread, mid + spread
        if lo <= self.plane.offset <= hi:
            return True
        delta = max(lo - self.plane.offset, self.plane.offset - hi)
        return delta * delta <= self.thickness ** 2 * self.plane.norm_sq()


def denominator_threshold(d: int, r: Fraction) -> Fraction:
    """(2 d! r)^{-d/(d+1)}: the Simplex Lemma denominator bound, rounded
    toward -infinity (exact when the power is rational)."""
    if r <= 0:
        raise ValueError("radius must be positive")
    fact = 1
    for k in range(2, d + 1):
        fact *= k
    s = 1 / (2 * fact * Fraction(r))
    u = s ** d
    digits = 30
    scale = 10 ** digits
    num = u.numerator * scale ** (d + 1) // u.denominator
    return Fraction(nth_root_floor(num, d + 1), scale)


def rationals_in_ball(b: Ball, q_max: int, budget: int = 2_000_000) -> list[Point]:
    """All rational points (p_1/q, ..., p_d/q) with 1 <= q <= q_max in the
    closed ball, each listed once, ordered by (minimal joint q, p lex)."""
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    seen: set[Point] = set()
    out: list[Point] = []
    spent = 0
    for q in range(1, q_max + 1):
        ranges = []
        for c in b.center:
            lo = ceil_frac(q * (c - b.radius))
            hi = floor_frac(q * (c + b.radius))
            if lo > hi:
                ranges = None
                break
            ranges.append((lo, hi))
        if ranges is None:
            continue
        count = 1
        for lo, hi in ranges:
            count *= hi - lo + 1
        spent += count
        if spent > budget:
            raise BudgetExceededError(
                f"rational enumeration budget exceeded at q={q} "
                f"({spent} > {budget} candidates)")
        def emit(prefix: list[Fraction], rest: list[tuple[int, int]]) -> None:
            if not rest:
                pt = tuple(prefix)
                if pt not in seen:
                    seen.add(pt)
                    out.append(pt)
                return
            lo, hi = rest[0]
            for p in range(lo, hi + 1):
                emit(prefix + [Fraction(p, q)], rest[1:])
        emit([], ranges)
    return out


@dataclass(frozen=True)
class SimplexResult:
    """Outcome of the Simplex Lemma check on one ball."""

    threshold: Fraction
    points: tuple[Point, ...]
    hyperplane: Hyperplane | None
    witness: tuple[Point, ...] | None

    @property
    def vacuous(self) -> bool:
        return not self.points

    @property
    def holds(self) -> bool:
        return self.witness is None


def affine_fit(points: Sequence[Point], d: int) -> tuple[Hyperplane | None, tuple[Point, ...] | None]:
    """A hyperplane containing all points, or d+1 affinely independent
    witnesses if none exists."""
    if not points:
        return None, None
    base = points[0]
    rows: list[list[Fraction]] = []
    row_sources: list[Point] = []
    pivots: list[int] = []
    for pt in points[1:]:
        vec = [pi - bi for pi, bi in zip(pt, base)]
        for r, c in zip(rows, pivots):
            if vec[c] != 0:
                f = vec[c] / r[c]
                vec = [v - f * rv for v, rv in zip(vec, r)]
        lead = next((c for c, v in enumerate(vec) if v != 0), None)
        if lead is not None:
            rows.append(vec)
            pivots.append(lead)
            row_sources.append(pt)
            if len(rows) == d:
                return None, (base, *row_sources)
    # Nullspace vector: set one free coordinate to 1, back-substitute.
    free = next(c for c in range(d) if c not in pivots)
    normal = [Fraction(0)] * d
    normal[free] = Fraction(1)
    for r, c in reversed(list(zip(rows, pivots))):
        normal[c] = -sum(r[k] * normal[k] for k in range(d) if k != c) / r[c]
    offset = sum(n * b for n, b in zip(normal, base))
    return Hyperplane.from_rational(normal, offset), None


def verify_simplex(b: Ball, budget: int = 2_000_000) -> SimplexResult:
    """Enumerate the rationals below the lemma's denominator threshold and
    exhibit a common hyperplane (or a violating affine simplex)."""
    threshold = denominator_threshold(b.dimension, b.radius)
    q_max = floor_frac(threshold)
    if q_max < 1:
        return SimplexResult(threshold, (), None, None)
    points = rationals_in_ball(b, q_max, budget=budget)
    if not points:
        return SimplexResult(threshold, (), None, None)
    plane, witness = affine_fit(points, b.dimension)
    return SimplexResult(threshold, tuple(points), plane, witness)


def format_point(pt: Point) -> list[str]:
    return [f"{c.numerator}/{c.denominator}" for c in pt]


def witness_json(witness: Sequence[Point]) -> str:
    return json.dumps([format_point(pt) for pt in witness])
