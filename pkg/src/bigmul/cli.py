"""Command line front end: bench, calibrate, ll and verify subcommands."""

from __future__ import annotations

import argparse
import sys

from .basecase import ThresholdTable, default_thresholds, set_default_thresholds
from .bench import (
    BenchCorrectnessError,
    calibrate_thresholds,
    default_size_grid,
    lucas_lehmer,
    random_operand,
    run_bench,
    write_csv,
)
from .dispatch import ALGORITHMS
from .words import ScratchArena

import random


def _parse_sizes(text):
    return sorted(int(s) for s in text.split(",") if s)


def _parse_algos(text):
    algos = [a.strip() for a in text.split(",") if a.strip()]
    for a in algos:
        if a not in ALGORITHMS:
            raise SystemExit(f"unknown algorithm {a!r}, pick from {sorted(ALGORITHMS)}")
    return algos


def _load_thresholds(path):
    if path:
        table = ThresholdTable.load(path)
        set_default_thresholds(table)
        return table
    return default_thresholds()


def cmd_bench(args) -> int:
    table = _load_thresholds(args.thresholds)
    sizes = _parse_sizes(args.sizes) if args.sizes else default_size_grid(args.max_words)
    algos = _parse_algos(args.algos)
    try:
        records = run_bench(algos, sizes, reps=args.reps, seed=args.seed,
                            reference=args.reference, thresholds=table)
    except BenchCorrectnessError as exc:
        print(f"correctness failure: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w") as f:
            write_csv(records, f)
    else:
        write_csv(records, sys.stdout)
    return 0


def cmd_calibrate(args) -> int:
    table = calibrate_thresholds(seed=args.seed, reps=args.reps,
                                 max_words=args.max_words)
    out = args.thresholds or "thresholds.txt"
    table.save(out)
    print(f"wrote {out}")
    print(f"  kmul={table.kmul} t3mul={table.t3mul} qmul={table.qmul} smul={table.smul}")
    if table.smul_fft_m:
        print(f"  smul_fft_m={table.smul_fft_m}")
    return 0


def cmd_ll(args) -> int:
    table = _load_thresholds(args.thresholds)
    algos = _parse_algos(args.algos)
    verdicts = set()
    for name in algos:
        is_prime, residue = lucas_lehmer(args.exponent, name, table)
        verdicts.add((is_prime, residue))
        label = "prime" if is_prime else "composite"
        print(f"M{args.exponent} {label} residue64=0x{residue:016x} [{name}]")
    if len(verdicts) != 1:
        print("multiplier backends disagree", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    table = _load_thresholds(args.thresholds)
    sizes = _parse_sizes(args.sizes) if args.sizes else default_size_grid(args.max_words)
    algos = _parse_algos(args.algos)
    rng = random.Random(args.seed)
    failures = 0
    for size in sizes:
        a = random_operand(rng, size)
        b = random_operand(rng, size)
        want = None
        for name in algos:
            got = ALGORITHMS[name](a, b, table, ScratchArena()).to_int()
            if want is None:
                want = got
            elif got != want:
                print(f"FAIL {size} words: {name} != {algos[0]}")
                failures += 1
                break
        else:
            print(f"ok {size} words ({', '.join(algos)})")
    return 1 if failures else 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="bigmul",
                                 description="multiplication benchmarks and system tests")
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algos", default="omul,kmul,t3mul,smul",
                        help="comma separated algorithm list")
    common.add_argument("--sizes", default=None, help="comma separated word counts")
    common.add_argument("--reps", type=int, default=3)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--thresholds", default=None, help="calibration file to load")
    common.add_argument("--max-words", type=int, default=4096,
                        help="ceiling for the default size grid")

    p = sub.add_parser("bench", parents=[common], help="time algorithms, emit CSV")
    p.add_argument("--out", default=None, help="CSV output path (default stdout)")
    p.add_argument("--reference", default="t3mul",
                   help="algorithm every timed result is checked against")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("calibrate", parents=[common],
                       help="measure crossover points, write a threshold file")
    p.set_defaults(fn=cmd_calibrate)

    p = sub.add_parser("ll", parents=[common], help="Lucas-Lehmer test of 2^p - 1")
    p.add_argument("exponent", type=int)
    p.set_defaults(fn=cmd_ll)

    p = sub.add_parser("verify", parents=[common],
                       help="cross-check algorithms on random operands")
    p.set_defaults(fn=cmd_verify)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
