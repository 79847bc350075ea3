"""Command-line surface: reproducible experiments over all modules.

Exit codes: 0 success, 1 property violation found, 2 usage/parse error,
3 resource budget exceeded.  Machine output is JSON (with the full
config and a format-version field embedded); tabular data is CSV.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from fractions import Fraction
from math import gcd

from .cf import CFWord, cf_of_rational, evaluate
from .congruence import T_bound, group_closure, sl_pm_order
from .constructor import build_decaying, fraction_schedule, verify_decaying
from .game import (AliceWindowAvoider, BobGreedyRational, BobRandom, GameSchedule,
                   HGameConfig, run_hgame, verify_hgame_outcome)
from .geometry import Ball, BudgetExceededError, verify_simplex, witness_json
from .lagrange import (DecaySchedule, Multiplier, decay_table, decay_table_csv,
                       lagrange_cf, lagrange_direct)

FORMAT_VERSION = "badnumlab/1"

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"cannot parse rational {text!r}: {exc}")


def _parse_word(text: str) -> CFWord:
    try:
        return CFWord.parse(text)
    except ValueError as exc:
        raise CliError(f"cannot parse word: {exc}")


def _load_word(path: str) -> CFWord:
    try:
        with open(path) as fh:
            text = fh.read().strip()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")
    if text.startswith("["):
        if text.startswith("[0;"):
            return _parse_word(text)
        return CFWord.from_json(text)
    raise CliError(f"{path}: unrecognized word format")


def _out_path(path: str) -> str:
    base = os.environ.get("BADNUMLAB_OUT", "")
    return os.path.join(base, path) if base and not os.path.isabs(path) else path


def _emit(doc: dict, config: dict) -> None:
    doc = {"format_version": FORMAT_VERSION, "config": config, **doc}
    print(json.dumps(doc, indent=2, default=str))


def cmd_lagrange(args) -> int:
    config = {"cf": args.cf, "rational": args.rational, "window": args.window,
              "qmax": args.qmax, "qmin": args.qmin}
    if args.cf:
        w = _parse_word(args.cf)
        est = lagrange_cf(w, _parse_fraction(args.window))
    elif args.rational:
        x = _parse_fraction(args.rational)
        if not (0 < x < 1):
            raise CliError("rational must lie in (0,1)")
        est = lagrange_direct(x, q_max=args.qmax, q_min=args.qmin)
    else:
        raise CliError("one of --cf / --rational is required")
    _emit({"estimate": {"value": f"{float(est.value):.12g}",
                        "value_exact": str(est.value),
                        "window_start": est.window_start,
                        "window_end": est.window_end,
                        "argmin_q": est.argmin_q,
                        "q_max": est.q_max}}, config)
    return EXIT_OK


def cmd_construct(args) -> int:
    if args.M < 2:
        raise CliError("M must be >= 2")
    config = {"M": args.M, "depth": args.depth, "rounds": args.rounds}
    word, log = build_decaying(args.M, args.depth, fraction_schedule(args.rounds))
    word_path = _out_path(args.out_word)
    log_path = _out_path(args.out_log)
    try:
        with open(word_path, "w") as fh:
            fh.write(str(word) + "\n")
        with open(log_path, "w") as fh:
            fh.write(log.to_json() + "\n")
    except OSError as exc:
        raise CliError(f"cannot write output: {exc}")
    counts: dict[str, int] = {}
    for e in log.entries:
        counts[f"{e.i}/{e.j}"] = counts.get(f"{e.i}/{e.j}", 0) + 1
    _emit({"depth": len(word), "word_file": word_path, "log_file": log_path,
           "blocks_per_fraction": counts}, config)
    return EXIT_OK


def cmd_verify(args) -> int:
    if gcd(args.i, args.j) != 1:
        raise CliError("reduce the fraction: gcd(i, j) must be 1")
    config = {"word_file": args.word_file, "i": args.i, "j": args.j}
    w = _load_word(args.word_file)
    report = verify_decaying(w, Multiplier(args.i, args.j))
    _emit({"report": json.loads(report.to_json())}, config)
    return EXIT_OK if report.count == 0 or report.all_within_bound else EXIT_VIOLATION


def _parse_schedule(text: str, count: int) -> DecaySchedule:
    if text == "naturals":
        return DecaySchedule(tuple(Multiplier(k, 1) for k in range(1, count + 1)),
                             lambda k: Fraction(k))
    if text.startswith("powers:"):
        base = text.split(":", 1)[1]
        if "/" in base:
            i, j = (int(v) for v in base.split("/"))
        else:
            i, j = int(base), 1
        if gcd(i, j) != 1:
            raise CliError("reduce the fraction: gcd(i, j) must be 1")
        fractions = tuple(Multiplier(i ** k, j ** k) for k in range(1, count + 1))
        return DecaySchedule(fractions, lambda k: Fraction(2) ** (k // 2))
    raise CliError(f"unknown schedule {text!r} (use naturals or powers:i/j)")


def cmd_decay_table(args) -> int:
    config = {"word_file": args.word_file, "schedule": args.schedule,
              "count": args.count, "qmax": args.qmax}
    w = _load_word(args.word_file)
    schedule = _parse_schedule(args.schedule, args.count)
    rows = decay_table(w, schedule, q_max=args.qmax)
    text = decay_table_csv(rows)
    if args.csv:
        with open(_out_path(args.csv), "w") as fh:
            fh.write(text)
        _emit({"csv_file": _out_path(args.csv), "rows": len(rows)}, config)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_group(args) -> int:
    lo, hi = args.n_min, args.n_max
    if lo < 1 or hi < lo:
        raise CliError("need 1 <= n-min <= n-max")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "M", "size"])
    mismatch = False
    for n in range(lo, hi + 1):
        size = len(group_closure(n, args.M))
        writer.writerow([n, args.M, size])
        if size != sl_pm_order(n):
            mismatch = True
    sys.stdout.write(buf.getvalue())
    return EXIT_VIOLATION if mismatch else EXIT_OK


def cmd_tbound(args) -> int:
    if gcd(args.i, args.j) != 1:
        raise CliError("reduce the fraction: gcd(i, j) must be 1")
    config = {"i": args.i, "j": args.j, "M": args.M}
    _emit({"T": T_bound(args.i, args.j, args.M)}, config)
    return EXIT_OK


def cmd_simplex(args) -> int:
    config = {"d": args.d, "trials": args.trials, "radius": args.radius,
              "seed": args.seed}
    radius = _parse_fraction(args.radius)
    rng = random.Random(args.seed)
    violations = []
    vacuous = 0
    for _ in range(args.trials):
        center = tuple(Fraction(rng.randrange(0, 10 ** 6), 10 ** 6)
                       for _ in range(args.d))
        try:
            result = verify_simplex(Ball(center, radius))
        except BudgetExceededError as exc:
            raise CliError(str(exc), code=EXIT_BUDGET)
        if result.vacuous:
            vacuous += 1
        elif not result.holds:
            violations.append(json.loads(witness_json(result.witness)))
    _emit({"trials": args.trials, "vacuous": vacuous,
           "violations": violations}, config)
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_play(args) -> int:
    config = {"beta": args.beta, "rounds": args.rounds, "bob": args.bob,
              "seed": args.seed, "schedule": args.schedule,
              "center": args.center, "radius": args.radius}
    beta = _parse_fraction(args.beta)
    if args.schedule == "naturals":
        schedule = GameSchedule.naturals()
    elif args.schedule.startswith("powers:"):
        base = args.schedule.split(":", 1)[1]
        i, j = (int(v) for v in base.split("/")) if "/" in base else (int(base), 1)
        schedule = GameSchedule.powers(i, j)
    else:
        raise CliError(f"unknown schedule {args.schedule!r}")
    try:
        cfg = HGameConfig(1, beta,
                          Ball.interval(_parse_fraction(args.center),
                                        _parse_fraction(args.radius)),
                          schedule, args.rounds)
    except ValueError as exc:
        raise CliError(str(exc))
    alice = AliceWindowAvoider(cfg)
    bob = BobRandom(args.seed) if args.bob == "random" else BobGreedyRational()
    result = run_hgame(cfg, alice, bob)
    if args.transcript:
        with open(_out_path(args.transcript), "w") as fh:
            fh.write(result.transcript.to_jsonl())
    report = verify_hgame_outcome(result, alice)
    _emit({"rounds_played": result.rounds_played, "aborted": result.aborted,
           "final_center": str(result.final_ball.center[0]),
           "final_radius": str(result.final_ball.radius),
           "verifier": json.loads(report.to_json())}, config)
    return EXIT_OK if report.ok and result.aborted is None else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="badnumlab",
        description="Experiments on badly approximable numbers: Lagrange "
                    "constants, congruent convergents, simplex checks, and "
                    "avoidance games.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lagrange", help="estimate the Lagrange constant")
    p.add_argument("--cf", help='continued-fraction word "[0;a1,a2,...]"')
    p.add_argument("--rational", help='rational in (0,1) as "p/q"')
    p.add_argument("--window", default="1/2")
    p.add_argument("--qmax", type=int, default=10 ** 6)
    p.add_argument("--qmin", type=int, default=1)
    p.set_defaults(func=cmd_lagrange)

    p = sub.add_parser("construct", help="build a decaying word")
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--depth", type=int, default=2000)
    p.add_argument("--rounds", type=int, default=4)
    p.add_argument("--out-word", default="word.txt")
    p.add_argument("--out-log", default="log.json")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check the decay inequalities")
    p.add_argument("--word-file", required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decay-table", help="tabulate weighted estimates")
    p.add_argument("--word-file", required=True)
    p.add_argument("--schedule", default="naturals")
    p.add_argument("--count", type=int, default=8)
    p.add_argument("--qmax", type=int, default=10 ** 6)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_decay_table)

    p = sub.add_parser("group", help="closure sizes over Z/nZ")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--M", type=int, default=2)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("tbound", help="uniform congruence digit bound")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--M", type=int, default=2)
    p.set_defaults(func=cmd_tbound)

    p = sub.add_parser("simplex", help="brute-force Simplex Lemma trials")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--radius", default="1/100")
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_simplex)

    p = sub.add_parser("play", help="run a hyperplane game and verify it")
    p.add_argument("--beta", default="1/4")
    p.add_argument("--rounds", type=int, default=40)
    p.add_argument("--bob", choices=["random", "greedy"], default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--schedule", default="naturals")
    p.add_argument("--center", default="1/2")
    p.add_argument("--radius", default="1/2")
    p.add_argument("--transcript")
    p.set_defaults(func=cmd_play)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
