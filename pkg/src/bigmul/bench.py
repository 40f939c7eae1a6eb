"""Benchmark harness, threshold calibration and the Lucas-Lehmer system test."""

from __future__ import annotations

import random
import statistics
import time
from dataclasses import dataclass

from .basecase import ThresholdTable, default_thresholds
from .dispatch import ALGORITHMS
from .smul import smul_plan_candidates
from .words import Natural, ScratchArena, word_bits


class BenchCorrectnessError(RuntimeError):
    """A timed product disagreed with the reference product."""


@dataclass
class BenchRecord:
    algorithm: str
    input_words: int
    reps: int
    median_ns: int
    peak_arena_words: int

    CSV_HEADER = "algorithm,input_words,reps,median_ns,peak_arena_words"

    def csv_row(self) -> str:
        return (f"{self.algorithm},{self.input_words},{self.reps},"
                f"{self.median_ns},{self.peak_arena_words}")


def random_operand(rng: random.Random, words: int) -> Natural:
    w = word_bits()
    bits = words * w
    value = rng.getrandbits(bits) | (1 << (bits - 1))  # keep the top word live
    return Natural.from_int(value, length=words)


def run_bench(algorithms, sizes, reps: int = 3, seed: int = 0,
              reference: str = "t3mul",
              thresholds: ThresholdTable | None = None):
    """One record per (algorithm, size); every timed product is checked
    bit-exactly against the reference algorithm before it may be reported."""
    if list(sizes) != sorted(sizes):
        raise ValueError("sizes must be ascending")
    if reps < 3:
        raise ValueError("reps must be at least 3, records hold a median")
    table = thresholds or default_thresholds()
    rng = random.Random(seed)
    records = []
    for size in sizes:
        a = random_operand(rng, size)
        b = random_operand(rng, size)
        ref = ALGORITHMS[reference](a, b, table, ScratchArena()).to_int()
        for name in algorithms:
            fn = ALGORITHMS[name]
            arena = ScratchArena()
            times = []
            for _ in range(reps):
                t0 = time.perf_counter_ns()
                out = fn(a, b, table, arena)
                times.append(time.perf_counter_ns() - t0)
                if out.to_int() != ref:
                    raise BenchCorrectnessError(
                        f"{name} disagrees with {reference} at {size} words")
            records.append(BenchRecord(name, size, reps,
                                       int(statistics.median(times)),
                                       arena.peak_words))
    return records


def write_csv(records, stream) -> None:
    stream.write(BenchRecord.CSV_HEADER + "\n")
    for rec in records:
        stream.write(rec.csv_row() + "\n")


def quotient_column(records, num: str = "dmul", den: str = "smul"):
    """T_num/T_den per size, the figure-of-merit column of the run-time table."""
    by_size: dict = {}
    for rec in records:
        by_size.setdefault(rec.input_words, {})[rec.algorithm] = rec.median_ns
    out = []
    for size in sorted(by_size):
        row = by_size[size]
        if num in row and den in row and row[den]:
            out.append((size, row[num] / row[den]))
    return out


# Power-of-two grid plus the DKSS-favorable lengths of the run-time table,
# so results can sit next to the published figures.
FAVORABLE_WORDS = [3648, 7168, 14336, 28160, 56320, 110592, 221184]


def default_size_grid(max_words: int = 1 << 14):
    sizes = []
    k = 1
    while k <= max_words:
        sizes.append(k)
        k <<= 1
    sizes += [s for s in FAVORABLE_WORDS if s <= max_words]
    return sorted(set(sizes))


def _median_time(fn, a, b, table, reps) -> float:
    times = []
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        fn(a, b, table, ScratchArena())
        times.append(time.perf_counter_ns() - t0)
    return statistics.median(times)


def _find_crossover(fast: str, slow: str, sizes, rng, table, reps) -> int:
    """First size of two consecutive wins for the asymptotically faster side."""
    wins = 0
    first = sizes[-1]
    for size in sizes:
        a = random_operand(rng, size)
        b = random_operand(rng, size)
        t_slow = _median_time(ALGORITHMS[slow], a, b, table, reps)
        t_fast = _median_time(ALGORITHMS[fast], a, b, table, reps)
        if t_fast < t_slow:
            wins += 1
            first = min(first, size)
            if wins >= 2:
                return first
        else:
            wins = 0
            first = sizes[-1]
    return first


def calibrate_thresholds(seed: int = 1, reps: int = 3,
                         max_words: int = 4096) -> ThresholdTable:
    """Measure the crossover ladder and the fastest SMUL FFT length per bucket.

    Emits a monotone table; run time grows with max_words.
    """
    rng = random.Random(seed)
    probe = ThresholdTable(kmul=1 << 30, t3mul=1 << 30, smul=1 << 30)  # isolate rungs
    grid = [s for s in default_size_grid(max_words) if s >= 4]

    kth = _find_crossover("kmul", "omul", grid, rng, probe, reps)
    t3_probe = ThresholdTable(kmul=kth, t3mul=1 << 30, smul=1 << 30)
    t3th = max(kth, _find_crossover("t3mul", "kmul", [s for s in grid if s >= kth],
                                    rng, t3_probe, reps))
    ladder = ThresholdTable(kmul=kth, t3mul=t3th, smul=1 << 30)
    smulth = max(t3th, _find_crossover("smul", "t3mul", [s for s in grid if s >= t3th],
                                       rng, ladder, reps))
    qmulth = max(t3th, _find_crossover("qmul", "t3mul", [s for s in grid if s >= t3th],
                                       rng, ladder, reps))

    table = ThresholdTable(kmul=kth, t3mul=t3th, qmul=qmulth, smul=smulth)
    _calibrate_smul_fft(table, rng, reps, max_words)
    return table.validate()


def _calibrate_smul_fft(table: ThresholdTable, rng, reps, max_words) -> None:
    w = word_bits()
    size = max(table.smul, 64)
    while size <= max_words:
        a = random_operand(rng, size)
        b = random_operand(rng, size)
        n_bits = 2 * size * w
        depths = sorted({p.m for p in smul_plan_candidates(n_bits, True, w)})
        best_m, best_t = None, None
        bucket = (2 * size).bit_length() - 1
        for m in depths:
            trial = ThresholdTable(kmul=table.kmul, t3mul=table.t3mul,
                                   smul=table.smul, smul_fft_m={bucket: m})
            try:
                t = _median_time(ALGORITHMS["smul"], a, b, trial, reps)
            except ValueError:
                continue
            if best_t is None or t < best_t:
                best_m, best_t = m, t
        if best_m is not None:
            table.smul_fft_m[bucket] = best_m
        size <<= 1


def mersenne_reduce(x: int, p: int) -> int:
    """x mod 2^p - 1 via shift folding."""
    mp = (1 << p) - 1
    if x < 0:
        x %= mp
    while x > mp:
        x = (x & mp) + (x >> p)
    return 0 if x == mp else x


def lucas_lehmer(p: int, multiplier: str = "smul",
                 thresholds: ThresholdTable | None = None):
    """Lucas-Lehmer test of 2^p - 1 driven by the chosen multiplier.

    Returns (is_prime, residue64) where residue64 is the low 64 bits of the
    final loop value; any multiplier bug scrambles the residue, which is
    what makes this a system test.
    """
    if p == 2:
        return True, 4 & ((1 << 64) - 1)
    if p < 2 or p % 2 == 0:
        raise ValueError("exponent must be an odd prime")
    table = thresholds or default_thresholds()
    fn = ALGORITHMS[multiplier]
    arena = ScratchArena()
    s = 4
    for _ in range(p - 2):
        nat = Natural.from_int(s)
        sq = fn(nat, nat, table, arena).to_int()
        s = mersenne_reduce(sq - 2, p)
    return s == 0, s & ((1 << 64) - 1)
