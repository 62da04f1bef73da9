"""Show the k-ary block search trading arity for queries on OneMax.

The search first runs the binary pair descent, then repeatedly carves the
still-unknown positions into blocks of size about k and settles each block
with a short burst of consistent sampling.  Higher arity means larger blocks
and fewer total queries, scaling like n / log2 k.
"""

from __future__ import annotations

import math

import numpy as np

from arityopt.algorithms import run_kary_onemax
from arityopt.problems import Oracle, random_instance


def mean_queries(n: int, k: int, trials: int) -> float:
    counts = []
    for i in range(trials):
        oracle = Oracle(random_instance("onemax", n, 5000 + i))
        record = run_kary_onemax(n, k, oracle, np.random.default_rng(6000 + i))
        assert record.success
        counts.append(record.queries)
    return float(np.mean(counts))


def main() -> None:
    n, trials = 60, 50
    print(f"OneMax at n={n}, {trials} trials per arity\n")
    print(f"{'k':>4s} {'mean queries':>14s} {'n/log2 k':>10s} {'ratio':>8s}")
    for k in (4, 8, 16):
        m = mean_queries(n, k, trials)
        g = n / math.log2(k)
        print(f"{k:4d} {m:14.1f} {g:10.1f} {m / g:8.2f}")
    print("\nmean queries fall as k grows; the ratio to n/log2 k stays in a"
          " narrow band")


if __name__ == "__main__":
    main()
