"""Deterministic construction of decaying badly approximable numbers.

The digit stream is driven by a round-robin schedule of reduced fractions
i/j; for each scheduled fraction a digit block is appended that forces a
convergent with numerator in jN and denominator in iN, then the block is
padded to the uniform length T(i, j, M) with 1s.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator

from .cf import CFWord, ConvergentState, evaluate, initial_state, states, step
from .congruence import T_bound, extend_to_congruence
from .lagrange import Multiplier


def fraction_round(r: int) -> list[Multiplier]:
    """All reduced i/j with 1 <= i, j <= r, in (i+j, i) lexicographic order."""
    pairs = [(i, j) for i in range(1, r + 1) for j in range(1, r + 1)
             if gcd(i, j) == 1]
    pairs.sort(key=lambda p: (p[0] + p[1], p[0]))
    return [Multiplier(i, j) for i, j in pairs]


def fraction_schedule(max_round: int | None = None) -> Iterator[Multiplier]:
    """Rounds r = 1, 2, ...; with max_round given, the final round repeats
    forever so every listed fraction still recurs infinitely often."""
    r = 1
    while True:
        yield from fraction_round(r)
        if max_round is None or r < max_round:
            r += 1


@dataclass(frozen=True)
class LogEntry:
    """One achieved congruent convergent: index k with j | p_k and i | q_k."""

    i: int
    j: int
    k: int
    block: tuple[int, ...]
    padding: int


@dataclass(frozen=True)
class ConstructionLog:
    entries: tuple[LogEntry, ...]

    def for_multiplier(self, m: Multiplier) -> list[LogEntry]:
        return [e for e in self.entries if (e.i, e.j) == (m.i, m.j)]

    def to_json(self) -> str:
        return json.dumps([
            {"i": e.i, "j": e.j, "k": e.k, "block": list(e.block),
             "padding": e.padding}
            for e in self.entries
        ])


def build_decaying(M: int, depth: int, schedule: Iterable[Multiplier],
                   pad: bool = True) -> tuple[CFWord, ConstructionLog]:
    """Emit digits in {1, ..., M} until at least `depth` of them exist.

    Each schedule entry appends its congruence-forcing block (recorded in
    the log) and, when `pad` is set, filler 1s up to the uniform block
    length T(i, j, M).
    """
    if M < 2:
        raise ValueError("alphabet bound M must be >= 2")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    digits: list[int] = []
    entries: list[LogEntry] = []
    s = initial_state()
    for m in schedule:
        result = extend_to_congruence(s, m.i, m.j, M)
        for a in result.word:
            s = step(s, a)
            digits.append(a)
        padding = T_bound(m.i, m.j, M) - result.length if pad else 0
        entries.append(LogEntry(m.i, m.j, s.n, result.word, padding))
        for _ in range(padding):
            s = step(s, 1)
            digits.append(1)
        if len(digits) >= depth:
            break
    return CFWord.of(digits), ConstructionLog(tuple(entries))


@dataclass(frozen=True)
class QualifyingConvergent:
    k: int
    p: int
    q: int
    ratio: Fraction  # q'^2 * i * j * |(i/j) x - p'/q'| with p' = p/j, q' = q/i


@dataclass(frozen=True)
class DecayReport:
    """Exact check of the good-approximation chain for one multiplier."""

    multiplier: Multiplier
    found: tuple[QualifyingConvergent, ...]
    chain_ok: bool

    @property
    def count(self) -> int:
        return len(self.found)

    @property
    def sharpest_ratio(self) -> Fraction | None:
        return max((c.ratio for c in self.found), default=None)

    @property
    def all_within_bound(self) -> bool:
        return self.chain_ok and all(c.ratio <= 1 for c in self.found)

    def to_json(self) -> str:
        return json.dumps({
            "i": self.multiplier.i,
            "j": self.multiplier.j,
            "count": self.count,
            "chain_ok": self.chain_ok,
            "sharpest_ratio": (None if self.sharpest_ratio is None
                               else f"{self.sharpest_ratio.numerator}/"
                                    f"{self.sharpest_ratio.denominator}"),
            "convergents": [{"k": c.k, "p": c.p, "q": c.q} for c in self.found],
        })


def verify_decaying(w: CFWord, m: Multiplier) -> DecayReport:
    """Find convergents p_k/q_k with j | p_k and i | q_k and check, exactly:
    |x - p_k/q_k| <= 1/(q_{k+1} q_k) <= 1/(i q')^2 and
    |(i/j)x - p'/q'| <= 1/(i j q'^2), where p' = p_k/j, q' = q_k/i.

    The final convergent (which equals x) is excluded: its successor does
    not exist.
    """
    x = evaluate(w)
    y = m.fraction * x
    all_states = list(states(w))
    found: list[QualifyingConvergent] = []
    chain_ok = True
    for idx, s in enumerate(all_states[:-1]):
        if s.p_cur % m.j != 0 or s.q_cur % m.i != 0 or s.p_cur == 0:
            continue
        q_next = all_states[idx + 1].q_cur
        pr, qr = s.p_cur // m.j, s.q_cur // m.i
        gap = abs(x - Fraction(s.p_cur, s.q_cur))
        if not (gap <= Fraction(1, q_next * s.q_cur) <= Fraction(1, (m.i * qr) ** 2)):
            chain_ok = False
        ratio = qr * qr * m.i * m.j * abs(y - Fraction(pr, qr))
        found.append(QualifyingConvergent(s.n, s.p_cur, s.q_cur, ratio))
    return DecayReport(m, tuple(found), chain_ok)


def good_approximations(w: CFWord) -> list[tuple[Fraction, Fraction]]:
    """All convergents with their exact quality q^2 |x - p/q| (always < 1)."""
    if len(w) < 2:
        raise ValueError("need at least two digits")
    x = evaluate(w)
    out = []
    for s in states(w):
        pq = Fraction(s.p_cur, s.q_cur)
        out.append((pq, s.q_cur * s.q_cur * abs(x - pq)))
    return out
