import csv
import io
import math
import shutil
import statistics

import numpy as np
import pytest

from mtfp import ga
from mtfp.bench import (
    BENCH_COLUMNS,
    SWEEP_COLUMNS,
    bench_directory,
    run_trials,
    sweep,
    sweep_rows,
    trimmed_mean,
    write_csv,
)
from mtfp.cli import main
from mtfp.core import InvalidInputError, ProblemInstance
from mtfp.instance_io import datasets_dir, dumps, read_instance, write_instance

from conftest import one_group_instance


@pytest.fixture
def d1_path(tmp_path, d1):
    path = tmp_path / "d1.mtfp"
    write_instance(d1, path)
    return path


class TestRunTrials:
    def test_dataset1_statistics_recompute(self, d1):
        stats = run_trials(d1, n_runs=5, base_seed=100)
        values = [ga.solve(d1, seed=100 + r).best_fitness for r in range(1, 6)]
        assert stats.values == values
        assert stats.max == max(values) and stats.min == min(values)
        assert stats.mean == pytest.approx(sum(values) / 5)
        assert stats.std == pytest.approx(statistics.stdev(values))
        assert stats.min <= stats.mean <= stats.max and stats.std >= 0
        assert stats.evaluations == 11000 and stats.n_runs == 5

    def test_zero_socio(self, d1):
        inst = ProblemInstance(np.zeros((10, 10)), d1.req, d1.dept_of)
        stats = run_trials(inst, n_runs=3)
        assert stats.max == stats.mean == stats.min == 0.0 and stats.std == 0.0

    def test_two_runs_have_distinct_seeds(self, d1):
        stats = run_trials(d1, n_runs=2, base_seed=0, n_gen=2)
        assert math.isfinite(stats.std)

    def test_needs_two_runs(self, d1):
        with pytest.raises(InvalidInputError):
            run_trials(d1, n_runs=1)


class TestSweep:
    def test_single_cell(self):
        recs = sweep([6], [2], runs=3, seed=1)
        assert len(recs) == 1 and recs[0].runs_kept == 1 and recs[0].mean_time > 0

    def test_grid_size_and_skips(self):
        recs = sweep([2, 5], [2, 3], n_j=3, runs=3)
        assert len(recs) == 4
        skipped = [r for r in recs if r.status != "ok"]
        assert [(r.n_i, r.k) for r in skipped] == [(2, 2), (2, 3)]
        assert all(r.runs_kept == 0 for r in skipped)

    def test_trimmed_mean(self):
        assert trimmed_mean([5.0, 1.0, 100.0, 3.0]) == 4.0
        with pytest.raises(InvalidInputError):
            trimmed_mean([1.0, 2.0])

    def test_workload_deterministic(self):
        a = sweep([7], [3], runs=4, seed=3)
        b = sweep([7], [3], runs=4, seed=3)
        assert a[0].mean_evaluations == b[0].mean_evaluations

    def test_csv_roundtrip(self):
        rows = sweep_rows(sweep([5, 6], [2], runs=3))
        buf = io.StringIO()
        write_csv(rows, buf, SWEEP_COLUMNS)
        back = list(csv.DictReader(io.StringIO(buf.getvalue())))
        for r, b in zip(rows, back):
            assert int(b["n_i"]) == r["n_i"] and float(b["mean_time"]) == r["mean_time"]
            assert int(b["runs_kept"]) == r["runs_kept"]


class TestBench:
    def test_empty_directory(self, tmp_path, capsys):
        assert main(["bench", str(tmp_path), "--runs", "2"]) == 0
        assert bench_directory(tmp_path) == []

    def test_rows_and_csv_roundtrip(self, tmp_path):
        shutil.copy(datasets_dir() / "dataset1.mtfp", tmp_path)
        shutil.copy(datasets_dir() / "dataset5.mtfp", tmp_path)
        (tmp_path / "broken.mtfp").write_text("name: x\n")
        rows = bench_directory(tmp_path, n_runs=2, base_seed=0)
        by_name = {r["dataset"]: r for r in rows}
        assert by_name["broken"]["status"].startswith("error")
        d1 = by_name["dataset1"]
        assert d1["exh_best_fitness"] == pytest.approx(1.6) and d1["exh_func_eval"] == 36
        assert d1["ga_func_eval"] == 50 * 220
        d5 = by_name["dataset5"]
        assert d5["exh_best_fitness"] == "N/A" and d5["ga_func_eval"] == 50 * 1386

        buf = io.StringIO()
        write_csv(rows, buf, BENCH_COLUMNS)
        back = {r["dataset"]: r for r in csv.DictReader(io.StringIO(buf.getvalue()))}
        assert float(back["dataset1"]["ga_mean"]) == d1["ga_mean"]
        assert float(back["dataset5"]["ga_std"]) == d5["ga_std"]
        assert back["dataset5"]["exh_func_eval"] == "N/A"

    def test_reproducible_without_times(self, tmp_path, capsys):
        shutil.copy(datasets_dir() / "dataset1.mtfp", tmp_path)
        shutil.copy(datasets_dir() / "dataset3.mtfp", tmp_path)
        out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["bench", str(tmp_path), "--runs", "3", "--omit-times", "-o", str(out_a)]) == 0
        assert main(["bench", str(tmp_path), "--runs", "3", "--omit-times", "-o", str(out_b)]) == 0
        assert out_a.read_bytes() == out_b.read_bytes()
        assert "exh_time_s" not in out_a.read_text().splitlines()[0]

    @pytest.mark.slow
    def test_seven_shipped_datasets(self, tmp_path, capsys):
        out = tmp_path / "table.csv"
        assert main(["bench", "--runs", "2", "-o", str(out)]) == 0
        rows = list(csv.DictReader(out.open()))
        assert [r["dataset"] for r in rows] == [f"dataset{i}" for i in range(1, 8)]
        assert [r["exh_best_fitness"] == "N/A" for r in rows] == [False] * 4 + [True] * 3
        assert [int(r["ga_func_eval"]) for r in rows] == [11000, 16500, 13850, 23050, 69300, 160950, 358350]
        assert "Dataset" in capsys.readouterr().out


class TestCli:
    def test_solve_dataset1(self, d1_path, capsys):
        assert main(["solve", str(d1_path), "--seed", "3"]) == 0
        out = capsys.readouterr().out
        assert "best fitness: 1.6000" in out and "feasible:     yes" in out
        assert "11000" in out and " I10 |" not in out and "I10 |" in out

    def test_solve_overrides(self, d1_path, capsys):
        assert main(["solve", str(d1_path), "--generations", "3", "--pop-size", "4"]) in (0, 4)
        assert "12 (4 x 3 generations)" in capsys.readouterr().out

    def test_solve_infeasible_exit_code(self, d1_path, capsys):
        # one generation of two chromosomes almost surely misses the quotas
        codes = {main(["solve", str(d1_path), "--generations", "1", "--pop-size", "2", "--seed", str(s)]) for s in range(5)}
        assert 4 in codes

    @pytest.mark.filterwarnings("ignore:derived generation count")
    def test_solve_one_group(self, tmp_path, capsys):
        path = tmp_path / "one.mtfp"
        write_instance(one_group_instance(4), path)
        assert main(["solve", str(path)]) == 0

    def test_malformed_file(self, tmp_path, capsys):
        path = tmp_path / "bad.mtfp"
        path.write_text("name: x\ndimensions: 2 1\ndepartments:\n1 1\nrequirements:\n2\nsociometric:\n0 0\n0 0\n")
        assert main(["solve", str(path)]) == 1
        assert "line 2" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert main(["exact", str(tmp_path / "nope.mtfp")]) == 1

    def test_exact_dataset1(self, d1_path, capsys):
        assert main(["exact", str(d1_path)]) == 0
        out = capsys.readouterr().out
        assert "best cohesion:  1.6000" in out and "feasible count: 36" in out

    def test_exact_budget_refusal(self, capsys):
        assert main(["exact", str(datasets_dir() / "dataset5.mtfp")]) == 3
        assert "N/A" in capsys.readouterr().out

    def test_exact_one_group(self, tmp_path, capsys):
        path = tmp_path / "one.mtfp"
        write_instance(one_group_instance(6), path)
        assert main(["exact", str(path)]) == 0
        assert "feasible count: 1" in capsys.readouterr().out

    def test_validate(self, d1_path, tmp_path, capsys):
        assert main(["validate", str(d1_path)]) == 0
        bad = tmp_path / "bad.mtfp"
        bad.write_text(d1_path.read_text().replace("2 1 0", "2 1 1"))
        assert main(["validate", str(bad)]) == 2
        assert "total head count 11" in capsys.readouterr().out
        assert main(["solve", str(bad)]) == 2

    def test_gen_dataset_matches_shipped(self, tmp_path, capsys):
        out = tmp_path / "d4.mtfp"
        assert main(["gen", "--dataset", "4", "-o", str(out)]) == 0
        assert out.read_text() == (datasets_dir() / "dataset4.mtfp").read_text()

    def test_gen_random(self, capsys):
        assert main(["gen", "--n-i", "9", "--n-j", "3", "--n-k", "3", "--seed", "5"]) == 0
        text = capsys.readouterr().out
        assert "dimensions: 9 3 3" in text and "seed=5" in text

    def test_gen_bad_config(self, capsys):
        assert main(["gen", "--n-i", "2", "--n-j", "3", "--n-k", "3"]) == 1
        assert main(["gen", "--n-i", "5"]) == 1

    def test_sweep_csv(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        assert main(["sweep", "--n-i", "5:6", "--k", "2", "--runs", "3", "-o", str(out)]) == 0
        rows = list(csv.DictReader(out.open()))
        assert [(r["n_i"], r["k"], r["runs_kept"]) for r in rows] == [("5", "2", "1"), ("6", "2", "1")]

    def test_usage_error_exit_code(self, capsys):
        assert_exit = pytest.raises(SystemExit)
        with assert_exit as info:
            main(["solve"])
        assert info.value.code == 1
        with pytest.raises(SystemExit) as info:
            main(["sweep", "--n-i", "a:b"])
        assert info.value.code == 1
