"""Experiment batches, summaries, fits, and file round trips."""

from __future__ import annotations

import csv
import json
import math

import numpy as np
import pytest

from arityopt.algorithms import RunRecord
from arityopt.harness import (
    RUNS_HEADER,
    SUMMARY_HEADER,
    ConfigError,
    ExperimentConfig,
    emit_report,
    fit_curve,
    read_runs_csv,
    run_experiment,
    summarize,
    summary_csv_text,
    validate_config,
    write_runs_csv,
)


def cfg(**kwargs) -> ExperimentConfig:
    base = dict(
        algorithm="binary_onemax",
        class_name="onemax",
        n_values=(16,),
        trials=3,
        base_seed=0,
    )
    base.update(kwargs)
    return ExperimentConfig(**base)


def synthetic_records(groups, algorithm="binary_onemax", class_name="onemax", k=2):
    records = []
    i = 0
    for (n, queries_list) in groups:
        for q in queries_list:
            records.append(
                RunRecord(algorithm, class_name, n, k, i, q, True, False)
            )
            i += 1
    return records


class TestValidateConfig:
    def test_valid_passes(self):
        validate_config(cfg())

    def test_unknown_algorithm(self):
        with pytest.raises(ConfigError):
            validate_config(cfg(algorithm="simulated_annealing"))

    def test_unknown_class(self):
        with pytest.raises(ConfigError):
            validate_config(cfg(class_name="jump"))

    def test_incompatible_combination(self):
        with pytest.raises(ConfigError):
            validate_config(cfg(algorithm="binary_leadingones", class_name="onemax"))
        with pytest.raises(ConfigError):
            validate_config(cfg(algorithm="star_ary_onemax", class_name="monotone"))

    def test_kary_needs_k(self):
        with pytest.raises(ConfigError):
            validate_config(cfg(algorithm="kary_onemax"))
        validate_config(cfg(algorithm="kary_onemax", k=4))

    def test_star_ary_size_limit(self):
        with pytest.raises(ConfigError):
            validate_config(cfg(algorithm="star_ary_onemax", n_values=(25,)))

    def test_positive_counts(self):
        with pytest.raises(ConfigError):
            validate_config(cfg(trials=0))
        with pytest.raises(ConfigError):
            validate_config(cfg(n_values=()))
        with pytest.raises(ConfigError):
            validate_config(cfg(workers=0))


class TestRunExperiment:
    def test_row_count_and_seeds(self):
        records = run_experiment(cfg(n_values=(8, 16), trials=3, base_seed=100))
        assert len(records) == 6
        assert [r.seed for r in records] == [100, 101, 102, 103, 104, 105]
        assert [r.n for r in records] == [8, 8, 8, 16, 16, 16]

    def test_rows_sorted_by_n(self):
        records = run_experiment(cfg(n_values=(16, 8), trials=2))
        assert [r.n for r in records] == [8, 8, 16, 16]

    def test_workers_do_not_change_results(self):
        c1 = cfg(n_values=(12, 20), trials=4, workers=1)
        c2 = cfg(n_values=(12, 20), trials=4, workers=3)
        assert run_experiment(c1) == run_experiment(c2)

    def test_deterministic_across_calls(self):
        c = cfg(algorithm="rls", class_name="leadingones", n_values=(10,), trials=5)
        assert run_experiment(c) == run_experiment(c)

    def test_budget_propagates(self):
        records = run_experiment(cfg(n_values=(30,), trials=4, budget=3))
        assert all(r.hit_budget and r.queries == 3 for r in records)


class TestSummarize:
    def test_group_statistics(self):
        records = synthetic_records([(8, [10, 12, 14]), (16, [30, 34, 38])])
        rows = summarize(records)
        assert len(rows) == 2
        first = rows[0]
        assert (first.n, first.trials) == (8, 3)
        assert first.mean_queries == pytest.approx(12.0)
        assert first.std_queries == pytest.approx(2.0)
        assert first.median_queries == pytest.approx(12.0)
        assert (first.min_queries, first.max_queries) == (10, 14)
        assert first.success_rate == 1.0
        assert first.theory_value == pytest.approx(16.0)
        assert first.ratio == pytest.approx(12.0 / 16.0)

    def test_one_pass_two_pass_agreement(self):
        rng = np.random.default_rng(0)
        qs = [int(q) for q in rng.integers(50, 5000, size=200)]
        rows = summarize(synthetic_records([(64, qs)]))
        mean = sum(qs) / len(qs)
        # Welford one-pass variance, as an independent recomputation
        m, s = 0.0, 0.0
        for i, q in enumerate(qs, start=1):
            d = q - m
            m += d / i
            s += d * (q - m)
        std = math.sqrt(s / (len(qs) - 1))
        assert rows[0].mean_queries == pytest.approx(mean, abs=1e-9)
        assert rows[0].std_queries == pytest.approx(std, rel=1e-9)

    def test_budget_hits_excluded_from_stats(self):
        records = synthetic_records([(8, [10, 14])])
        records.append(RunRecord("binary_onemax", "onemax", 8, 2, 99, 1000, False, True))
        row = summarize(records)[0]
        assert row.trials == 3
        assert row.mean_queries == pytest.approx(12.0)
        assert row.max_queries == 14
        assert row.success_rate == pytest.approx(2 / 3)

    def test_all_budget_hits_give_empty_stats(self):
        records = [RunRecord("rls", "onemax", 8, 1, 0, 800, False, True)]
        row = summarize(records)[0]
        assert row.mean_queries is None
        assert row.ratio is None
        assert row.success_rate == 0.0

    def test_rls_has_no_theory_column(self):
        records = synthetic_records([(8, [10])], algorithm="rls", k=1)
        row = summarize(records)[0]
        assert row.theory_value is None
        assert row.ratio is None


class TestFitCurve:
    def test_exact_linear_recovery(self):
        records = synthetic_records([(10, [20]), (20, [40]), (40, [80])])
        a, residual = fit_curve(records, "a_n")
        assert a == pytest.approx(2.0)
        assert residual == pytest.approx(0.0, abs=1e-12)

    def test_exact_nlogn_recovery(self):
        groups = [(n, [3 * n * math.log2(n)]) for n in (16, 64, 256)]
        records = synthetic_records(groups)
        a, residual = fit_curve(records, "a_nlogn")
        assert a == pytest.approx(3.0)
        assert residual == pytest.approx(0.0, abs=1e-12)

    def test_n_over_logk_uses_k(self):
        records = []
        for i, k in enumerate((4, 8, 16)):
            records.append(
                RunRecord("kary_onemax", "onemax", 60, k, i, round(5 * 60 / math.log2(k)), True, False)
            )
        a, residual = fit_curve(records, "a_n_over_logk")
        assert a == pytest.approx(5.0, rel=0.01)
        assert residual < 0.01

    def test_needs_three_groups(self):
        records = synthetic_records([(10, [20]), (20, [40])])
        with pytest.raises(ValueError):
            fit_curve(records, "a_n")

    def test_unknown_model(self):
        records = synthetic_records([(10, [20]), (20, [40]), (30, [60])])
        with pytest.raises(ValueError):
            fit_curve(records, "a_exp")

    def test_budget_hits_excluded(self):
        records = synthetic_records([(10, [20]), (20, [40]), (40, [80])])
        records.append(RunRecord("binary_onemax", "onemax", 40, 2, 9, 10_000, False, True))
        a, _ = fit_curve(records, "a_n")
        assert a == pytest.approx(2.0)


class TestFileRoundTrips:
    def test_runs_csv_header_and_round_trip(self, tmp_path):
        records = synthetic_records([(8, [10, 12]), (16, [30])])
        path = str(tmp_path / "runs.csv")
        write_runs_csv(records, path)
        with open(path) as fh:
            assert fh.readline().rstrip("\n") == RUNS_HEADER
        assert read_runs_csv(path) == records

    def test_runs_csv_booleans_lowercase(self, tmp_path):
        records = [RunRecord("rls", "onemax", 4, 1, 0, 9, True, False)]
        path = str(tmp_path / "runs.csv")
        write_runs_csv(records, path)
        text = open(path).read()
        assert ",true,false" in text
        assert "True" not in text

    def test_summary_header_exact(self):
        text = summary_csv_text(summarize(synthetic_records([(8, [10])])))
        assert text.splitlines()[0] == SUMMARY_HEADER

    def test_empty_records_still_write_headers(self, tmp_path):
        path = str(tmp_path / "empty.csv")
        paths = emit_report([], [], {}, path)
        assert open(paths["runs"]).read().rstrip("\n") == RUNS_HEADER
        assert open(paths["summary"]).read().rstrip("\n") == SUMMARY_HEADER
        assert json.load(open(paths["report"])) == {"fits": {}, "summaries": []}

    def test_report_json_structure(self, tmp_path):
        records = synthetic_records([(10, [20]), (20, [40]), (40, [80])])
        summaries = summarize(records)
        fits = {"a_n": fit_curve(records, "a_n")}
        paths = emit_report(records, summaries, fits, str(tmp_path / "out.csv"))
        data = json.load(open(paths["report"]))
        assert data["fits"]["a_n"]["a"] == pytest.approx(2.0)
        assert len(data["summaries"]) == 3
        assert data["summaries"][0]["theory_value"] == pytest.approx(20.0)

    def test_nine_significant_digits(self, tmp_path):
        records = [
            RunRecord("binary_onemax", "onemax", 3, 2, i, q, True, False)
            for i, q in enumerate((10, 11, 13))
        ]
        path = str(tmp_path / "digits.csv")
        emit_report(records, summarize(records), {}, path)
        with open(str(tmp_path / "digits.summary.csv")) as fh:
            row = list(csv.DictReader(fh))[0]
        # mean 34/3 rendered to 9 significant digits
        assert row["mean_queries"] == "11.3333333"

    def test_read_rejects_wrong_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ValueError):
            read_runs_csv(str(path))

    def test_emitted_files_are_deterministic(self, tmp_path):
        records = synthetic_records([(8, [10, 12])])
        p1 = str(tmp_path / "r1.csv")
        p2 = str(tmp_path / "r2.csv")
        emit_report(records, summarize(records), {}, p1)
        emit_report(records, summarize(records), {}, p2)
        assert open(p1).read() == open(p2).read()
        assert (
            open(str(tmp_path / "r1.report.json")).read()
            == open(str(tmp_path / "r2.report.json")).read()
        )
