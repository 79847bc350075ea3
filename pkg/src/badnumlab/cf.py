"""Exact continued-fraction arithmetic on finite digit words.

Everything here is arbitrary-precision and pure; no floats. The word
[0; a_1, ..., a_n] with all a_k >= 1 denotes a rational in (0, 1].
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator


class EmptyWordError(ValueError):
    pass


_WORD_RE = re.compile(r"^\[0;([0-9,\s]*)\]$")


@dataclass(frozen=True)
class CFWord:
    """A finite continued-fraction digit sequence [0; a_1, ..., a_n]."""

    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        for a in self.digits:
            if not isinstance(a, int) or a < 1:
                raise ValueError(f"partial quotients must be integers >= 1, got {a!r}")

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.digits)

    def __str__(self) -> str:
        return "[0;" + ",".join(str(a) for a in self.digits) + "]"

    def max_digit(self) -> int:
        return max(self.digits) if self.digits else 0

    @classmethod
    def of(cls, digits: Iterable[int]) -> "CFWord":
        return cls(tuple(int(a) for a in digits))

    @classmethod
    def parse(cls, text: str) -> "CFWord":
        """Parse the ASCII form "[0;a1,a2,...,an]"."""
        m = _WORD_RE.match(text.strip())
        if m is None:
            raise ValueError(f"not a continued-fraction word: {text!r}")
        body = m.group(1).strip()
        if not body:
            return cls(())
        return cls(tuple(int(part) for part in body.split(",")))

    def to_json(self) -> str:
        return json.dumps(list(self.digits))

    @classmethod
    def from_json(cls, text: str) -> "CFWord":
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError("expected a JSON array of digits")
        return cls.of(data)


@dataclass(frozen=True)
class ConvergentState:
    """The matrix ((p_prev, q_prev), (p_cur, q_cur)) after n digits.

    Appending a digit a left-multiplies by [[0,1],[1,a]], so the bottom
    row always carries the latest convergent p_n/q_n.
    """

    p_prev: int
    q_prev: int
    p_cur: int
    q_cur: int
    n: int = 0

    def determinant(self) -> int:
        return self.p_prev * self.q_cur - self.p_cur * self.q_prev

    def fraction(self) -> Fraction:
        if self.n == 0:
            raise EmptyWordError("empty expansion")
        return Fraction(self.p_cur, self.q_cur)

    def rows(self) -> tuple[int, int, int, int]:
        return (self.p_prev, self.q_prev, self.p_cur, self.q_cur)


def initial_state() -> ConvergentState:
    """Seed state for the empty expansion: ((1,0),(0,1)), n = 0."""
    return ConvergentState(1, 0, 0, 1, 0)


def step(s: ConvergentState, a: int) -> ConvergentState:
    """Append partial quotient a, advancing the convergent recurrence."""
    if a < 1:
        raise ValueError(f"partial quotient must be >= 1, got {a}")
    return ConvergentState(
        s.p_cur,
        s.q_cur,
        a * s.p_cur + s.p_prev,
        a * s.q_cur + s.q_prev,
        s.n + 1,
    )


def states(w: CFWord) -> Iterator[ConvergentState]:
    """Yield the state after each digit of w (n = 1, ..., len(w))."""
    s = initial_state()
    for a in w:
        s = step(s, a)
        yield s


def evaluate(w: CFWord) -> Fraction:
    """The rational value of [0; a_1, ..., a_n], reduced."""
    if len(w) == 0:
        raise EmptyWordError("empty expansion")
    s = initial_state()
    for a in w:
        s = step(s, a)
    return s.fraction()


def convergents(w: CFWord) -> list[Fraction]:
    """p_1/q_1, ..., p_n/q_n for the successive truncations of w."""
    return [s.fraction() for s in states(w)]


def cf_of_rational(x: Fraction) -> CFWord:
    """Canonical expansion of x in (0,1): last digit >= 2 unless length 1.

    The plain Euclidean algorithm already produces this form.
    """
    x = Fraction(x)
    if not (0 < x < 1):
        raise ValueError(f"expected a rational in (0,1), got {x}")
    digits = []
    num, den = x.denominator, x.numerator  # invert: a_1 = floor(1/x)
    while den != 0:
        digits.append(num // den)
        num, den = den, num % den
    return CFWord.of(digits)


def check_determinants(digits: Iterable[int]) -> bool:
    """True iff p_prev*q_cur - p_cur*q_prev = (-1)^n at every prefix.

    Tight loop on bare integers; used by the bulk identity check.
    """
    pp, qp, pc, qc = 1, 0, 0, 1
    sign = 1
    for a in digits:
        pp, qp, pc, qc = pc, qc, a * pc + pp, a * qc + qp
        sign = -sign
        if pp * qc - pc * qp != sign:
            return False
    return True
