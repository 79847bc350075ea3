"""Hyperplane game engine, strategies, verifier, and symbolic word game."""

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from badnumlab.cf import CFWord
from badnumlab.constructor import verify_decaying
from badnumlab.game import (AliceWindowAvoider, BobGreedyRational, BobRandom,
                            CorruptedAlice, GameSchedule, HGameConfig,
                            HyperplaneGame, MoveRejected, bob_random_extension,
                            extract_subsequence, run_bms_symbolic, run_hgame,
                            turn_assignment, verify_hgame_outcome)
from badnumlab.geometry import Ball, Hyperplane, HyperplaneNeighborhood
from badnumlab.lagrange import Multiplier


def test_turn_assignment_partitions_naturals():
    # ell = 2^{k-1} + 2^k m is a bijection from (k, m) pairs onto N.
    seen = {}
    for ell in range(1, 513):
        k, m = turn_assignment(ell)
        assert ell == (1 << (k - 1)) + (m << k)
        assert (k, m) not in seen
        seen[(k, m)] = ell
    with pytest.raises(ValueError):
        turn_assignment(0)


def test_subsequence_thresholds():
    picks = extract_subsequence(GameSchedule.naturals(), Fraction(1, 4), 1, 3)
    for k, sel in enumerate(picks, start=1):
        threshold = (4 * Fraction(4) ** (2 ** k + 1)) ** 2
        assert sel.weight >= threshold
        # Minimality: the previous index misses the threshold (or is the
        # successor of the previous pick).
        if sel.original - 1 > (picks[k - 2].original if k > 1 else 0):
            assert Fraction(sel.original - 1) < threshold
    assert [s.game_k for s in picks] == [1, 2, 3]
    originals = [s.original for s in picks]
    assert originals == sorted(originals) and len(set(originals)) == 3


def unit_config(rounds=8, beta=Fraction(1, 4), schedule=None):
    return HGameConfig(1, beta, Ball.interval(Fraction(1, 2), Fraction(1, 2)),
                       schedule or GameSchedule.naturals(), rounds)


def test_config_validation():
    with pytest.raises(ValueError):
        unit_config(beta=Fraction(1, 3))
    with pytest.raises(ValueError):
        unit_config(rounds=0)
    with pytest.raises(ValueError):
        HGameConfig(2, Fraction(1, 4), Ball.interval(Fraction(0), Fraction(1)),
                    GameSchedule.naturals(), 5)


def test_rule_enforcement():
    cfg = unit_config()
    game = HyperplaneGame(cfg)
    thick = HyperplaneNeighborhood(Hyperplane.point(Fraction(1, 2)), Fraction(1))
    with pytest.raises(MoveRejected):
        game.apply_alice(thick)  # thicker than beta * radius
    game.apply_alice(HyperplaneNeighborhood(Hyperplane.point(Fraction(1, 2)),
                                            Fraction(1, 8)))
    with pytest.raises(MoveRejected):
        game.apply_bob(Ball.interval(Fraction(1, 2), Fraction(1, 3)))  # radius
    with pytest.raises(MoveRejected):
        game.apply_bob(Ball.interval(Fraction(2), Fraction(1, 8)))  # outside
    with pytest.raises(MoveRejected):
        game.apply_bob(Ball.interval(Fraction(1, 2), Fraction(1, 8)))  # hits plane
    game.apply_bob(Ball.interval(Fraction(1, 8), Fraction(1, 8)))
    assert game.current_ball.radius == Fraction(1, 8)


@pytest.mark.parametrize("seed", [0, 1])
def test_random_game_nests_and_verifies(seed):
    cfg = unit_config(rounds=16)
    alice = AliceWindowAvoider(cfg)
    result = run_hgame(cfg, alice, BobRandom(seed))
    assert result.aborted is None
    assert result.rounds_played == 16
    assert result.transcript.validate_nesting(cfg.beta)
    assert result.final_ball.radius == cfg.beta ** 16 * Fraction(1, 2)
    report = verify_hgame_outcome(result, alice)
    assert report.ok
    assert any(w.q_lo >= 1 and w.q_hi >= w.q_lo for w in report.windows)


def test_greedy_bob_verifies():
    cfg = unit_config(rounds=20)
    alice = AliceWindowAvoider(cfg)
    result = run_hgame(cfg, alice, BobGreedyRational())
    assert result.aborted is None
    assert verify_hgame_outcome(result, alice).ok


def test_transcript_jsonl_format():
    cfg = unit_config(rounds=4)
    alice = AliceWindowAvoider(cfg)
    result = run_hgame(cfg, alice, BobRandom(5))
    lines = result.transcript.to_jsonl().strip().split("\n")
    assert len(lines) == 1 + 2 * 4  # initial ball + (Alice, Bob) per round
    first = json.loads(lines[0])
    assert first == {"round": 0, "actor": "B",
                     "ball": {"center": ["1/2"], "radius": "1/2"}}
    second = json.loads(lines[1])
    assert second["actor"] == "A" and "plane" in second and "thickness" in second


def test_fault_injection_detected():
    cfg = unit_config(rounds=16)
    alice = AliceWindowAvoider(cfg)
    corrupted = CorruptedAlice(alice, corrupt_turn=11)
    bob = BobGreedyRational(target=Fraction(1, 2))
    result = run_hgame(cfg, corrupted, bob)
    report = verify_hgame_outcome(result, alice)
    assert not report.ok
    # Control: the honest strategy under the same adversary stays clean.
    control = run_hgame(cfg, alice, BobGreedyRational(target=Fraction(1, 2)))
    assert verify_hgame_outcome(control, alice).ok


def test_powers_schedule_game():
    cfg = unit_config(rounds=12, beta=Fraction(1, 5),
                      schedule=GameSchedule.powers(2, 1))
    alice = AliceWindowAvoider(cfg)
    result = run_hgame(cfg, alice, BobRandom(2))
    assert result.aborted is None
    assert verify_hgame_outcome(result, alice).ok


def test_two_dimensional_game_smoke():
    cfg = HGameConfig(2, Fraction(1, 4),
                      Ball((Fraction(1, 2), Fraction(1, 2)), Fraction(1, 2)),
                      GameSchedule.naturals(), 3)
    alice = AliceWindowAvoider(cfg)
    result = run_hgame(cfg, alice, BobRandom(0))
    assert result.aborted is None
    assert result.transcript.validate_nesting(cfg.beta)


def test_verifier_skips_unprotected_window_on_abort():
    cfg = unit_config(rounds=6)
    alice = AliceWindowAvoider(cfg)

    class StallingBob:
        def __init__(self):
            self.turns = 0

        def move(self, game):
            self.turns += 1
            if self.turns >= 4:
                raise MoveRejected("no-legal-move", "simulated stall")
            return BobRandom(1).move(game)

    result = run_hgame(cfg, alice, StallingBob())
    assert result.aborted == "no-legal-move"
    report = verify_hgame_outcome(result, alice)
    # Only fully answered turns contribute windows.
    assert all((1 << (w.k - 1)) + (w.m << w.k) <= result.rounds_played - 1
               for w in report.windows)


def test_bms_symbolic_game():
    m = Multiplier(2, 1)
    result = run_bms_symbolic(m, M=2, rounds=12, bob=bob_random_extension(9))
    assert len(result.log) == 12
    assert result.word.max_digit() <= 2
    report = verify_decaying(result.word, m)
    assert report.count >= 12
    assert report.all_within_bound


def test_bms_rejects_out_of_alphabet_bob():
    m = Multiplier(2, 1)
    with pytest.raises(MoveRejected):
        run_bms_symbolic(m, M=2, rounds=1, bob=lambda ws: [3])
