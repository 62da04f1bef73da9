"""Compare the LeadingOnes pair search against the single-flip baseline.

The pair search walks a pair of points toward each other, repairing the
critical position with random-where-different draws, and finishes in about
n log2 n queries.  The baseline flips one uniformly random bit per step and
needs about n^2 / 2, so the gap widens as n grows.
"""

from __future__ import annotations

import math

import numpy as np

from arityopt.algorithms import run_binary_leadingones, run_rls_baseline
from arityopt.problems import Oracle, random_instance


def mean_queries(runner, n: int, trials: int, seed0: int) -> float:
    counts = []
    for i in range(trials):
        oracle = Oracle(random_instance("leadingones", n, seed0 + i))
        record = runner(n, oracle, np.random.default_rng(seed0 + 10_000 + i))
        assert record.success
        counts.append(record.queries)
    return float(np.mean(counts))


def main() -> None:
    trials = 30
    print(f"{trials} trials per size\n")
    header = f"{'n':>5s} {'pair search':>12s} {'n log2 n':>9s} {'baseline':>9s} {'n^2/2':>8s} {'speedup':>8s}"
    print(header)
    for n in (64, 128):
        pair = mean_queries(run_binary_leadingones, n, trials, 7000)
        rls = mean_queries(run_rls_baseline, n, trials, 8000)
        print(
            f"{n:5d} {pair:12.0f} {n * math.log2(n):9.0f} {rls:9.0f}"
            f" {n * n / 2:8.0f} {rls / pair:8.2f}"
        )
    print("\nthe speedup factor grows with n as n^2 pulls away from n log n")


if __name__ == "__main__":
    main()
