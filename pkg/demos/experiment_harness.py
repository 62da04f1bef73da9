"""Drive a batch experiment through the library API and fit a scaling law.

The harness assigns one seed per trial up front, so results are reproducible
byte for byte regardless of worker count, and the summary/fit helpers turn
raw run records into the numbers the command line prints.
"""

from __future__ import annotations

from arityopt.harness import (
    ExperimentConfig,
    fit_curve,
    run_experiment,
    summarize,
    summary_csv_text,
)


def main() -> None:
    cfg = ExperimentConfig(
        algorithm="binary_onemax",
        class_name="onemax",
        n_values=(32, 64, 128),
        trials=40,
        base_seed=123,
    )
    records = run_experiment(cfg)
    print(summary_csv_text(summarize(records)))

    a, residual = fit_curve(records, "a_n")
    print(f"fit mean queries ~ a*n: a = {a:.3f},"
          f" max relative residual = {residual:.3f}")

    again = run_experiment(cfg)
    print(f"rerun identical: {records == again}")


if __name__ == "__main__":
    main()
