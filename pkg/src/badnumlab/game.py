"""The hyperplane absolute game and the symbolic word game, with verifiers.

In the hyperplane game Bob shrinks closed balls by an exact factor beta
per round while Alice deletes thickened hyperplanes.  Alice's avoidance
strategy protects, for each schedule index k, denominator windows
[Q_{m-1}, Q_m) of rationals near (i_k/j_k) times the eventual result.
All bookkeeping is exact: irrational thresholds (square roots) are only
ever compared through their squares.

The symbolic game plays directly on digit words: Bob appends arbitrary
digits, Alice appends exactly T digits that force a congruent convergent.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterable, Sequence

from .cf import CFWord, ConvergentState, initial_state, step
from .congruence import T_bound, extend_to_congruence
from .constructor import LogEntry
from .geometry import (Ball, BudgetExceededError, Hyperplane,
                       HyperplaneNeighborhood, affine_fit, rationals_in_ball)
from .lagrange import Multiplier
from .numutil import (ceil_frac, floor_frac, simplest_between, sqrt_floor,
                      rationals_in_interval_bounded)


def turn_assignment(ell: int) -> tuple[int, int]:
    """Invert ell = 2^{k-1} + 2^k m: the progressions P_k partition N."""
    if ell < 1:
        raise ValueError("turn index must be >= 1")
    k = (ell & -ell).bit_length()  # trailing zeros + 1
    return k, ell >> k


@dataclass(frozen=True)
class GameSchedule:
    """Multipliers i_k/j_k with weights g(k); g must be nondecreasing and
    unbounded so the winning-threshold subsequence extraction terminates."""

    fraction: Callable[[int], Multiplier]
    weight: Callable[[int], Fraction]

    @staticmethod
    def naturals() -> "GameSchedule":
        return GameSchedule(lambda k: Multiplier(k, 1), lambda k: Fraction(k))

    @staticmethod
    def powers(i: int, j: int,
               weight: Callable[[int], Fraction] | None = None) -> "GameSchedule":
        base = Multiplier(i, j)
        if weight is None:
            weight = lambda k: Fraction(2) ** (k // 2)
        return GameSchedule(lambda k: Multiplier(base.i ** k, base.j ** k), weight)


@dataclass(frozen=True)
class SelectedIndex:
    """One extracted schedule entry: game index k plays original index."""

    game_k: int
    original: int
    multiplier: Multiplier
    weight: Fraction  # g at the original index; epsilon_k^2 = 1/weight


def _factorial(d: int) -> int:
    out = 1
    for v in range(2, d + 1):
        out *= v
    return out


def extract_subsequence(schedule: GameSchedule, beta: Fraction, d: int,
                        k_max: int) -> list[SelectedIndex]:
    """Greedy subsequence with g(original) >= (4 d! / beta^{2^k+1})^2, so
    that epsilon_k = g^{-1/2} <= beta^{2^k+1} / (4 d!)."""
    fact = _factorial(d)
    picks: list[SelectedIndex] = []
    prev = 0
    for k in range(1, k_max + 1):
        threshold = (4 * fact / beta ** (2 ** k + 1)) ** 2
        lo = prev + 1
        # Exponential then binary search; relies on nondecreasing weights.
        span = 1
        while schedule.weight(lo + span) < threshold:
            span *= 2
        hi = lo + span
        while lo < hi:
            mid = (lo + hi) // 2
            if schedule.weight(mid) >= threshold:
                hi = mid
            else:
                lo = mid + 1
        picks.append(SelectedIndex(k, lo, schedule.fraction(lo),
                                   Fraction(schedule.weight(lo))))
        prev = lo
    return picks


@dataclass(frozen=True)
class HGameConfig:
    dimension: int
    beta: Fraction
    initial_ball: Ball
    schedule: GameSchedule
    rounds: int

    def __post_init__(self) -> None:
        if not (0 < self.beta < Fraction(1, 3)):
            raise ValueError("beta must lie in (0, 1/3)")
        if self.initial_ball.dimension != self.dimension:
            raise ValueError("initial ball dimension mismatch")
        if self.rounds < 1:
            raise ValueError("round budget must be >= 1")


class MoveRejected(ValueError):
    """An illegal move; `reason` is machine readable."""

    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason


@dataclass(frozen=True)
class TranscriptMove:
    round: int
    actor: str  # "A" or "B"
    ball: Ball | None = None
    neighborhood: HyperplaneNeighborhood | None = None

    def to_json(self) -> str:
        def frac(x: Fraction) -> str:
            return f"{x.numerator}/{x.denominator}"
        doc: dict = {"round": self.round, "actor": self.actor}
        if self.ball is not None:
            doc["ball"] = {"center": [frac(c) for c in self.ball.center],
                           "radius": frac(self.ball.radius)}
        if self.neighborhood is not None:
            doc["plane"] = {"normal": list(self.neighborhood.plane.normal),
                            "offset": frac(self.neighborhood.plane.offset)}
            doc["thickness"] = frac(self.neighborhood.thickness)
        return json.dumps(doc)


@dataclass
class GameTranscript:
    moves: list[TranscriptMove] = field(default_factory=list)

    def to_jsonl(self) -> str:
        return "\n".join(m.to_json() for m in self.moves) + "\n"

    def bob_balls(self) -> list[Ball]:
        return [m.ball for m in self.moves if m.actor == "B"]

    def validate_nesting(self, beta: Fraction) -> bool:
        balls = self.bob_balls()
        return all(prev.contains_ball(cur) and cur.radius == beta * prev.radius
                   for prev, cur in zip(balls, balls[1:]))


class HyperplaneGame:
    """State machine enforcing the game rules exactly."""

    def __init__(self, config: HGameConfig):
        self.config = config
        self.transcript = GameTranscript()
        self.current_ball = config.initial_ball
        self.last_neighborhood: HyperplaneNeighborhood | None = None
        self.turn = 0  # Alice turns taken
        self.transcript.moves.append(TranscriptMove(0, "B", ball=config.initial_ball))

    def apply_alice(self, nbhd: HyperplaneNeighborhood) -> None:
        if nbhd.thickness > self.config.beta * self.current_ball.radius:
            raise MoveRejected("thickness", "exceeds beta * current radius")
        self.turn += 1
        self.last_neighborhood = nbhd
        self.transcript.moves.append(TranscriptMove(self.turn, "A",
                                                    neighborhood=nbhd))

    def apply_bob(self, ball: Ball) -> None:
        prev = self.current_ball
        if ball.radius != self.config.beta * prev.radius:
            raise MoveRejected("radius", "radius must equal beta * previous radius")
        if not prev.contains_ball(ball):
            raise MoveRejected("containment", "ball not inside previous ball")
        if self.last_neighborhood is not None and \
                self.last_neighborhood.intersects_ball(ball):
            raise MoveRejected("intersection", "ball meets Alice's neighborhood")
        self.current_ball = ball
        self.transcript.moves.append(TranscriptMove(self.turn, "B", ball=ball))


class AliceWindowAvoider:
    """Alice's window-avoidance strategy.

    At turn ell (examining the ball of radius beta^{ell-1} rho_0, with
    (k, m) = turn_assignment(ell)), all rationals (j p)/(i q) in the
    doubled ball with q below Q_m lie on one hyperplane by the Simplex
    Lemma; Alice thickens that hyperplane by beta times the examined
    radius.
    """

    def __init__(self, config: HGameConfig, budget: int = 500_000):
        self.config = config
        k_max = max(turn_assignment(ell)[0] for ell in range(1, config.rounds + 1))
        self.selection = extract_subsequence(config.schedule, config.beta,
                                             config.dimension, k_max)
        self.budget = budget
        self._fact = _factorial(config.dimension)

    def selected(self, k: int) -> SelectedIndex:
        return self.selection[k - 1]

    def window_denominator_power(self, k: int, m: int) -> Fraction:
        """W with Q_m = W^{d/(d+1)}: for the turn ell(k, m), W is the
        reciprocal of 4 d! (i_k/j_k) times the examined radius (exact)."""
        ell = (1 << (k - 1)) + (m << k)
        radius = self.config.beta ** (ell - 1) * self.config.initial_ball.radius
        frac = self.selected(k).multiplier.fraction
        return 1 / (4 * self._fact * frac * radius)

    def move(self, game: HyperplaneGame) -> HyperplaneNeighborhood:
        ell = game.turn + 1
        k, m = turn_assignment(ell)
        ball = game.current_ball
        thickness = self.config.beta * ball.radius
        frac = self.selected(k).multiplier.fraction
        scaled = ball.doubled().scaled(frac)
        w_cap = self.window_denominator_power(k, m)
        plane = self._containing_plane(scaled, w_cap)
        if plane is None:
            # Vacuous window: any hyperplane well away from the ball works,
            # but one through the center is equally legal.
            plane = Hyperplane.from_rational(
                (Fraction(1),) + (Fraction(0),) * (ball.dimension - 1),
                ball.center[0])
        else:
            plane = _scale_plane(plane, 1 / frac)
        return HyperplaneNeighborhood(plane, thickness)

    def _containing_plane(self, scaled: Ball, w_cap: Fraction) -> Hyperplane | None:
        d = scaled.dimension
        if d == 1:
            lo = scaled.center[0] - scaled.radius
            hi = scaled.center[0] + scaled.radius
            v = simplest_between(lo, hi)
            if Fraction(v.denominator) ** 2 < w_cap:
                return Hyperplane.point(v)
            return None
        # q < Q_m  <=>  q^{d+1} < W^d
        q_max = _power_cap(w_cap, d)
        if q_max < 1:
            return None
        points = rationals_in_ball(scaled, q_max, budget=self.budget)
        if not points:
            return None
        plane, witness = affine_fit(points, d)
        if witness is not None:
            raise RuntimeError("Simplex Lemma violated; this is a bug")
        return plane


def _power_cap(w: Fraction, d: int) -> int:
    """Largest integer q with q^{d+1} < w^d."""
    target = w ** d
    if target <= 1:
        return 0
    from .numutil import nth_root_floor
    q = nth_root_floor(floor_frac(target), d + 1) + 1
    while q > 0 and Fraction(q) ** (d + 1) >= target:
        q -= 1
    return q


def _scale_plane(plane: Hyperplane, factor: Fraction) -> Hyperplane:
    """Image of the plane under x -> factor * x."""
    return Hyperplane.from_rational([Fraction(n) for n in plane.normal],
                                    plane.offset * factor)


class BobRandom:
    """Picks uniformly among legal balls centered on a rational grid."""

    def __init__(self, seed: int, pitch_factor: Fraction | None = None):
        self.rng = random.Random(seed)
        self.pitch_factor = pitch_factor

    def move(self, game: HyperplaneGame) -> Ball:
        cfg = game.config
        prev = game.current_ball
        new_radius = cfg.beta * prev.radius
        span = prev.radius - new_radius
        pitch = (self.pitch_factor or cfg.beta ** 2) * prev.radius
        steps = floor_frac(2 * span / pitch)
        candidates = []
        for combo in _grid(prev.dimension, steps):
            center = tuple(c - span + k * pitch for c, k in zip(prev.center, combo))
            ball = Ball(center, new_radius)
            if game.last_neighborhood is None or \
                    not game.last_neighborhood.intersects_ball(ball):
                candidates.append(ball)
        if not candidates:
            raise MoveRejected("no-legal-move", "grid too coarse for this turn")
        return self.rng.choice(candidates)


def _grid(d: int, steps: int) -> Iterable[tuple[int, ...]]:
    if d == 1:
        return ((k,) for k in range(steps + 1))
    out = [()]
    for _ in range(d):
        out = [c + (k,) for c in out for k in range(steps + 1)]
    return out


class BobGreedyRational:
    """Centers as close as legally possible to the lowest-denominator
    rational in the current ball (dimension 1)."""

    def __init__(self, target: Fraction | None = None):
        self.target = target  # override: chase a fixed point instead

    def move(self, game: HyperplaneGame) -> Ball:
        prev = game.current_ball
        if prev.dimension != 1:
            raise NotImplementedError("greedy Bob is dimension-1 only")
        cfg = game.config
        new_radius = cfg.beta * prev.radius
        span = prev.radius - new_radius
        c = prev.center[0]
        if self.target is not None:
            want = self.target
        else:
            want = simplest_between(c - prev.radius, c + prev.radius)
        lo, hi = c - span, c + span
        desired = min(max(want, lo), hi)
        candidates = [desired]
        nb = game.last_neighborhood
        if nb is not None:
            y = Fraction(nb.plane.offset, nb.plane.normal[0])
            block = nb.thickness + new_radius
            for edge, inward in ((y - block, -1), (y + block, 1)):
                room = (edge - lo) if inward < 0 else (hi - edge)
                if room > 0:
                    margin = min(room / 2, cfg.beta ** 2 * prev.radius)
                    candidates.append(min(max(edge + inward * margin, lo), hi))
        best = None
        for cand in candidates:
            ball = Ball((cand,), new_radius)
            if nb is not None and nb.intersects_ball(ball):
                continue
            if best is None or abs(cand - want) < abs(best.center[0] - want):
                best = ball
        if best is None:
            raise MoveRejected("no-legal-move", "greedy Bob found no candidate")
        return best


@dataclass(frozen=True)
class GameResult:
    transcript: GameTranscript
    final_ball: Ball
    rounds_played: int
    aborted: str | None = None


def run_hgame(config: HGameConfig, alice, bob) -> GameResult:
    """Play `rounds` full rounds (Alice then Bob); an illegal move aborts
    with the transcript prefix."""
    game = HyperplaneGame(config)
    for _ in range(config.rounds):
        try:
            game.apply_alice(alice.move(game))
            game.apply_bob(bob.move(game))
        except MoveRejected as exc:
            return GameResult(game.transcript, game.current_ball, game.turn,
                              aborted=exc.reason)
    return GameResult(game.transcript, game.current_ball, config.rounds)


class CorruptedAlice:
    """Fault injection: replaces the move of one turn with a far-away plane."""

    def __init__(self, inner: AliceWindowAvoider, corrupt_turn: int):
        self.inner = inner
        self.corrupt_turn = corrupt_turn

    def move(self, game: HyperplaneGame) -> HyperplaneNeighborhood:
        nbhd = self.inner.move(game)
        if game.turn + 1 == self.corrupt_turn:
            ball = game.current_ball
            far = ball.center[0] + 10 * ball.radius + 10
            plane = Hyperplane.from_rational(
                (Fraction(1),) + (Fraction(0),) * (ball.dimension - 1), far)
            return HyperplaneNeighborhood(plane, nbhd.thickness)
        return nbhd


@dataclass(frozen=True)
class Violation:
    k: int
    m: int
    p: int
    q: int
    value: Fraction  # the offending rational in the multiplied frame


@dataclass(frozen=True)
class WindowRange:
    k: int
    m: int
    q_lo: int  # smallest integer q in the window (0 if empty)
    q_hi: int


@dataclass(frozen=True)
class VerifierReport:
    violations: tuple[Violation, ...]
    windows: tuple[WindowRange, ...]
    excluded: dict[int, int]  # per game index k: q below this were never claimed

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> str:
        return json.dumps({
            "ok": self.ok,
            "violations": [{"k": v.k, "m": v.m, "p": v.p, "q": v.q}
                           for v in self.violations],
            "windows": [{"k": w.k, "m": w.m, "q_lo": w.q_lo, "q_hi": w.q_hi}
                        for w in self.windows],
            "excluded_below": self.excluded,
        })


def _sqrt_ceil_frac(x: Fraction) -> int:
    """Smallest integer r with r^2 >= x."""
    if x <= 0:
        return 0
    r = isqrt(floor_frac(x))
    while Fraction(r) ** 2 < x:
        r += 1
    return r


def verify_hgame_outcome(result: GameResult, alice: AliceWindowAvoider) -> VerifierReport:
    """Exhaustively check, for every processed window [Q_{m-1}, Q_m) of
    every game index k, that no rational p/q with q in the window comes
    within epsilon_k q^{-2} of (i_k/j_k) x for any x in the final ball.

    Coverage is complete: every reduced rational near the scaled final
    interval with denominator below Q_m is enumerated via Stern-Brocot
    search, and non-reduced representations are handled through their
    smallest in-window multiple.  Comparisons go through squares, so
    irrational epsilon_k never forces approximation.
    """
    if result.final_ball.dimension != 1:
        raise NotImplementedError("outcome verifier is dimension-1 only")
    # On abort the last Alice turn has no Bob response, so its window is
    # not actually protected; drop it.
    rounds = result.rounds_played if result.aborted is None \
        else max(0, result.rounds_played - 1)
    final = result.final_ball
    x_lo = final.center[0] - final.radius
    x_hi = final.center[0] + final.radius
    violations: list[Violation] = []
    windows: list[WindowRange] = []
    excluded: dict[int, int] = {}
    k_max = max((turn_assignment(ell)[0] for ell in range(1, rounds + 1)), default=0)
    for k in range(1, k_max + 1):
        sel = alice.selected(k)
        g = sel.weight
        frac = sel.multiplier.fraction
        j_lo, j_hi = frac * x_lo, frac * x_hi
        w0 = alice.window_denominator_power(k, 0)
        excluded[k] = _sqrt_ceil_frac(w0)
        m = 1
        while (1 << (k - 1)) + (m << k) <= rounds:
            w_prev = alice.window_denominator_power(k, m - 1)
            w_cap = alice.window_denominator_power(k, m)
            q_lo = _sqrt_ceil_frac(w_prev)
            q_hi = _sqrt_ceil_frac(w_cap) - 1
            windows.append(WindowRange(k, m, q_lo if q_lo <= q_hi else 0, q_hi))
            if q_lo <= q_hi and q_hi >= 1:
                eps_ub = 1 / sqrt_floor(g)  # rational upper bound on g^{-1/2}
                slack = eps_ub / w_prev
                for v in rationals_in_interval_bounded(j_lo - slack, j_hi + slack,
                                                       w_cap):
                    q0 = v.denominator
                    lam = max(1, -(-q_lo // q0))
                    q = lam * q0
                    if Fraction(q) ** 2 >= w_cap:
                        continue
                    if Fraction(q) ** 2 < w_prev:
                        continue
                    dist = max(Fraction(0), j_lo - v, v - j_hi)
                    # Require dist >= eps_k / q^2, i.e. dist^2 q^4 g >= 1.
                    if dist == 0 or dist * dist * q ** 4 * g < 1:
                        violations.append(Violation(k, m, lam * v.numerator, q, v))
            m += 1
    return VerifierReport(tuple(violations), tuple(windows), excluded)


# --- Symbolic Banach-Mazur/Schmidt word game -------------------------------


@dataclass
class BMSWordState:
    """Shared word state: Alice extends by exactly T letters per turn."""

    M: int
    T: int
    state: ConvergentState
    digits: list[int] = field(default_factory=list)

    @property
    def word(self) -> CFWord:
        return CFWord.of(self.digits)

    def extend(self, extension: Sequence[int]) -> None:
        for a in extension:
            if not (1 <= a <= self.M):
                raise MoveRejected("alphabet", f"digit {a} outside 1..{self.M}")
            self.state = step(self.state, a)
            self.digits.append(a)


@dataclass(frozen=True)
class BMSResult:
    word: CFWord
    log: tuple[LogEntry, ...]


def bob_random_extension(seed: int, max_len: int = 3) -> Callable[[BMSWordState], list[int]]:
    rng = random.Random(seed)

    def strategy(state: BMSWordState) -> list[int]:
        return [rng.randint(1, state.M) for _ in range(rng.randint(0, max_len))]

    return strategy


def run_bms_symbolic(m: Multiplier, M: int, rounds: int,
                     bob: Callable[[BMSWordState], list[int]],
                     T: int | None = None) -> BMSResult:
    """Alternate Bob (arbitrary finite extension) and Alice (exactly T
    letters forcing a congruent convergent, padded with 1s)."""
    if M < 2:
        raise ValueError("alphabet bound M must be >= 2")
    if T is None:
        T = T_bound(m.i, m.j, M)
    ws = BMSWordState(M, T, initial_state())
    log: list[LogEntry] = []
    for _ in range(rounds):
        ws.extend(bob(ws))
        result = extend_to_congruence(ws.state, m.i, m.j, M)
        if result.length > T:
            raise RuntimeError("congruence block exceeds the stride T")
        ws.extend(result.word)
        log.append(LogEntry(m.i, m.j, ws.state.n, result.word,
                            T - result.length))
        ws.extend([1] * (T - result.length))
    return BMSResult(ws.word, tuple(log))
