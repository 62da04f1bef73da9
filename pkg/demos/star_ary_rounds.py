"""Show the star-ary search pinning down a OneMax instance in one round.

With unrestricted arity the search samples t uniform points, then asks for a
point consistent with everything seen so far.  At n=16 the round count t is
24, and a single round almost always suffices: the consistent set after t
random agreement values is usually just the hidden string itself.
"""

from __future__ import annotations

import numpy as np

from arityopt.algorithms import run_star_ary_onemax
from arityopt.bounds import round_count
from arityopt.consistency import ConsistencyQuery, consistent_set
from arityopt.problems import Oracle, random_instance


def narrate_one_run(n: int, seed: int) -> None:
    t = round_count(n)
    oracle = Oracle(random_instance("onemax", n, seed))
    record = run_star_ary_onemax(n, oracle, np.random.default_rng(seed + 1))
    print(f"n={n}, round count t={t}")
    print(f"run took {record.queries} queries; one full round is t+1={t + 1}")

    # replay the first round's samples to expose the consistent set
    points = tuple(p for p, _ in oracle.history[:t])
    values = tuple(int(v) for _, v in oracle.history[:t])
    survivors = consistent_set(ConsistencyQuery(n, points, values))
    print(f"after the {t} samples, {len(survivors)} string(s) remain consistent")
    print(f"hidden z among them: {oracle.debug_instance.z in survivors}")


def one_round_frequency(n: int, trials: int) -> None:
    t = round_count(n)
    hits = 0
    for i in range(trials):
        oracle = Oracle(random_instance("onemax", n, 3000 + i))
        record = run_star_ary_onemax(n, oracle, np.random.default_rng(4000 + i))
        hits += record.queries <= t + 1
    print(f"\n{trials} runs: {hits / trials:.2f} finished within a single round")


def main() -> None:
    narrate_one_run(n=16, seed=11)
    one_round_frequency(n=16, trials=200)


if __name__ == "__main__":
    main()
