"""Walk through the binary pair descent on a hidden OneMax instance.

The search keeps a single pair (x, complement of x) and repeatedly flips one
position where the two disagree, keeping the flip only when the fitness goes
up.  Every operator application, including the initial sample and the
complement, costs one oracle query, and the whole run lands near 2n queries.
"""

from __future__ import annotations

import numpy as np

from arityopt.algorithms import run_binary_onemax
from arityopt.problems import Oracle, random_instance


def narrate_one_run(n: int, seed: int) -> None:
    # distinct streams for the hidden instance and the search
    oracle = Oracle(random_instance("onemax", n, seed))
    record = run_binary_onemax(n, oracle, np.random.default_rng(seed + 1))
    z = oracle.debug_instance.z
    first = oracle.history[0]
    print(f"hidden z starts with {z.to_string()[:24]}...")
    print(f"first sample agrees on {first[1]} of {n} positions")
    print(f"finished in {record.queries} queries (2n = {2 * n}),"
          f" success={record.success}")
    print(f"last queried point equals z: {oracle.history[-1][0] == z}")


def batch_flavor(n: int, trials: int) -> None:
    counts = []
    for t in range(trials):
        oracle = Oracle(random_instance("onemax", n, 1000 + t))
        record = run_binary_onemax(n, oracle, np.random.default_rng(2000 + t))
        counts.append(record.queries)
    counts = np.array(counts)
    print(f"\n{trials} runs at n={n}: mean {counts.mean():.1f} queries,"
          f" min {counts.min()}, max {counts.max()}, budget 3*2n = {6 * n}")


def main() -> None:
    narrate_one_run(n=200, seed=7)
    batch_flavor(n=200, trials=30)


if __name__ == "__main__":
    main()
