"""End-to-end acceptance checks, one test per criterion.

Each test is a single pass/fail line under `pytest -v` and enforces its
own wall-clock budget.  Tolerances are absolute unless stated otherwise.
"""

import random
import time
from fractions import Fraction
from math import gcd

from badnumlab.cf import CFWord, check_determinants, evaluate, step, initial_state
from badnumlab.congruence import T_bound, extend_to_congruence, group_closure
from badnumlab.constructor import build_decaying, fraction_schedule, verify_decaying
from badnumlab.game import (AliceWindowAvoider, BobGreedyRational, BobRandom,
                            CorruptedAlice, GameSchedule, HGameConfig,
                            bob_random_extension, run_bms_symbolic, run_hgame,
                            verify_hgame_outcome)
from badnumlab.geometry import Ball, verify_simplex
from badnumlab.lagrange import (Multiplier, check_crude_bound, lagrange_cf,
                                lagrange_direct)


def reduced_fractions(bound):
    return [Multiplier(i, j) for i in range(1, bound + 1)
            for j in range(1, bound + 1) if gcd(i, j) == 1]


def test_criterion_1_determinant_identity_bulk():
    rng = random.Random(12345)
    start = time.perf_counter()
    for _ in range(100_000):
        depth = rng.randint(1, 200)
        assert check_determinants(rng.choices(range(1, 10), k=depth))
    assert time.perf_counter() - start < 10


def test_criterion_2_lagrange_oracles():
    start = time.perf_counter()
    for digit, expected in [(1, 0.4472135955), (2, 0.3535533906)]:
        est = lagrange_cf(CFWord.of([digit] * 60))
        surrogate = evaluate(CFWord.of([digit] * 200))
        oracle = lagrange_direct(surrogate, q_max=10 ** 6, q_min=10 ** 5)
        assert abs(float(est.value) - float(oracle.value)) < 1e-9
        assert abs(float(est.value) - expected) < 1e-9
    assert time.perf_counter() - start < 30


def test_criterion_3_crude_bound_zero_violations():
    start = time.perf_counter()
    rng = random.Random(777)
    fractions = reduced_fractions(4)
    for _ in range(100):
        w = CFWord.of(rng.choices(range(1, 6), k=50))
        for m in fractions:
            report = check_crude_bound(w, m, q_max=2000, tol=Fraction(1, 10 ** 9))
            assert report.holds
    assert time.perf_counter() - start < 120


def test_criterion_4_group_closure_counts():
    start = time.perf_counter()
    for n in range(1, 31):
        targets = {1 % n, (-1) % n}
        brute = sum(1 for a in range(n) for b in range(n) for c in range(n)
                    for d in range(n) if (a * d - b * c) % n in targets)
        assert len(group_closure(n, 2)) == brute
    assert len(group_closure(2, 2)) == 6
    assert len(group_closure(6, 2)) == 288
    assert time.perf_counter() - start < 60


def test_criterion_5_extension_soundness():
    start = time.perf_counter()
    pairs = [(i, j) for i in range(1, 25) for j in range(1, 25)
             if gcd(i, j) == 1 and i * j <= 24]
    rng = random.Random(31337)
    for i, j in pairs:
        for M in (2, 3):
            bound = T_bound(i, j, M)
            for _ in range(500):
                s = initial_state()
                for _ in range(rng.randint(0, 12)):
                    s = step(s, rng.randint(1, 9))
                result = extend_to_congruence(s, i, j, M)
                assert 1 <= result.length <= bound
                t = s
                for a in result.word:
                    assert 1 <= a <= M
                    t = step(t, a)
                assert t.p_cur >= 1 and t.p_cur % j == 0 and t.q_cur % i == 0
    assert time.perf_counter() - start < 120


def test_criterion_6_constructor_inequality():
    start = time.perf_counter()
    word, _ = build_decaying(2, 2000, fraction_schedule(4))
    for m in reduced_fractions(4):
        report = verify_decaying(word, m)
        assert report.count >= 3
        assert report.chain_ok
        assert report.all_within_bound  # q'^2 ij |(i/j)x - p'/q'| <= 1, exact
    assert time.perf_counter() - start < 180


def test_criterion_7_simplex_brute_force():
    start = time.perf_counter()
    rng = random.Random(2024)
    for d, radius in [(1, Fraction(1, 100)), (2, Fraction(1, 1000))]:
        for _ in range(100):
            center = tuple(Fraction(rng.randrange(0, 10 ** 6), 10 ** 6)
                           for _ in range(d))
            result = verify_simplex(Ball(center, radius))
            assert result.holds, f"witness in d={d} at {center}"
    assert time.perf_counter() - start < 120


def test_criterion_8_game_verifier_and_fault_injection():
    start = time.perf_counter()
    cfg = HGameConfig(1, Fraction(1, 4),
                      Ball.interval(Fraction(1, 2), Fraction(1, 2)),
                      GameSchedule.naturals(), 40)
    alice = AliceWindowAvoider(cfg)
    bobs = [BobRandom(seed) for seed in (1, 2, 3)] + [BobGreedyRational()]
    for bob in bobs:
        result = run_hgame(cfg, alice, bob)
        assert result.aborted is None
        report = verify_hgame_outcome(result, alice)
        assert report.ok, report.to_json()
    # One corrupted Alice move must be flagged by the same verifier.
    short = HGameConfig(1, Fraction(1, 4),
                        Ball.interval(Fraction(1, 2), Fraction(1, 2)),
                        GameSchedule.naturals(), 16)
    honest = AliceWindowAvoider(short)
    bad = run_hgame(short, CorruptedAlice(honest, corrupt_turn=11),
                    BobGreedyRational(target=Fraction(1, 2)))
    assert not verify_hgame_outcome(bad, honest).ok
    assert time.perf_counter() - start < 300


def test_criterion_9_symbolic_game_robustness():
    start = time.perf_counter()
    m = Multiplier(2, 1)
    result = run_bms_symbolic(m, M=2, rounds=30, bob=bob_random_extension(7))
    assert len(result.log) == 30
    # Independent recount of divisibility-qualifying convergents.
    from badnumlab.cf import states
    count = sum(1 for s in states(result.word)
                if s.p_cur >= 1 and s.q_cur % 2 == 0)
    assert count >= 30
    report = verify_decaying(result.word, m)
    assert report.count >= 30
    assert report.all_within_bound
    assert time.perf_counter() - start < 60
