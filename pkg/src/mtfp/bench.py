"""Benchmark harness: repeated GA trials, the benchmark table and the timing sweep."""
from __future__ import annotations

import csv
import logging
import math
import statistics
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from . import ga
from .core import InvalidInputError, ProblemInstance
from .exhaustive import DEFAULT_BUDGET, BudgetExceededError, solve_exact
from .instance_io import SUFFIX, GeneratorConfig, generate_instance, read_instance

log = logging.getLogger(__name__)


@dataclass
class TrialStats:
    n_runs: int
    max: float
    mean: float
    std: float
    min: float
    mean_time: float
    evaluations: int
    feasible_runs: int
    values: list[float] = field(default_factory=list, repr=False)


def summarize(values: Sequence[float], times: Sequence[float], evaluations: int, feasible_runs: int) -> TrialStats:
    """Aggregate per-run best fitness values; ``std`` uses the n-1 divisor."""
    if len(values) < 2:
        raise InvalidInputError("need at least two runs for a sample standard deviation")
    return TrialStats(
        n_runs=len(values),
        max=max(values),
        mean=statistics.fmean(values),
        std=statistics.stdev(values),
        min=min(values),
        mean_time=statistics.fmean(times),
        evaluations=evaluations,
        feasible_runs=feasible_runs,
        values=list(values),
    )


def run_trials(
    instance: ProblemInstance,
    n_runs: int = 20,
    base_seed: int = 0,
    K: float = ga.DEFAULT_K,
    backend: str | None = None,
    **overrides,
) -> TrialStats:
    """Run the GA ``n_runs`` times with seeds ``base_seed + 1 ... base_seed + n_runs``."""
    if n_runs < 2:
        raise InvalidInputError(f"n_runs must be >= 2, got {n_runs}")
    overrides.pop("seed", None)
    values, times = [], []
    feasible = 0
    evaluations = 0
    for r in range(1, n_runs + 1):
        params = ga.derive_params(instance, K, seed=base_seed + r, **overrides)
        res = ga.run(instance, params, backend=backend)
        values.append(res.best_fitness)
        times.append(res.elapsed)
        feasible += res.feasible
        evaluations = res.evaluations
    return summarize(values, times, evaluations, feasible)


BENCH_COLUMNS = [
    "dataset", "n_i", "n_g", "n_j",
    "exh_best_fitness", "exh_time_s", "exh_func_eval",
    "ga_max", "ga_mean", "ga_std", "ga_min", "ga_time_s", "ga_func_eval", "ga_feasible_runs",
    "status",
]
TIME_COLUMNS = ("exh_time_s", "ga_time_s")


def bench_instance(
    path: Path,
    n_runs: int = 20,
    base_seed: int = 0,
    budget: int | None = DEFAULT_BUDGET,
    K: float = ga.DEFAULT_K,
    backend: str | None = None,
) -> dict:
    """One benchmark row; failures are recorded in ``status`` instead of raised."""
    row: dict = {c: "" for c in BENCH_COLUMNS}
    row["dataset"] = path.stem
    try:
        inst = read_instance(path)
    except (OSError, InvalidInputError) as exc:
        row["status"] = f"error: {exc}".replace("\n", " ")
        return row
    row.update(n_i=inst.n_i, n_g=inst.n_k, n_j=inst.n_j)
    notes = []
    try:
        exact = solve_exact(inst, budget=budget, backend=backend)
        row.update(
            exh_best_fitness=exact.best_cohesion,
            exh_time_s=exact.elapsed,
            exh_func_eval=exact.evaluations,
        )
    except BudgetExceededError as exc:
        row.update(exh_best_fitness="N/A", exh_time_s="N/A", exh_func_eval="N/A")
        notes.append(f"exhaustive skipped ({exc.feasible_count:.3g} feasible > budget)")
    try:
        stats = run_trials(inst, n_runs, base_seed, K, backend=backend)
        row.update(
            ga_max=stats.max, ga_mean=stats.mean, ga_std=stats.std, ga_min=stats.min,
            ga_time_s=stats.mean_time, ga_func_eval=stats.evaluations,
            ga_feasible_runs=stats.feasible_runs,
        )
    except Exception as exc:  # keep the batch going
        log.exception("GA failed on %s", path)
        notes.append(f"ga error: {exc}")
    row["status"] = "; ".join(notes) or "ok"
    return row


def bench_directory(directory, **kwargs) -> list[dict]:
    paths = sorted(Path(directory).glob(f"*{SUFFIX}"))
    return [bench_instance(p, **kwargs) for p in paths]


def write_csv(rows: Iterable[dict], sink: IO, columns: Sequence[str]) -> None:
    writer = csv.DictWriter(sink, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: _cell(row.get(c, "")) for c in columns})


def _cell(v):
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    return v


def format_bench_table(rows: Sequence[dict], with_times: bool = True) -> str:
    def f4(v):
        return f"{v:.4f}" if isinstance(v, float) else str(v)

    def ft(v):
        return f"{v:.3g}" if isinstance(v, float) else str(v)

    head = ["Dataset", "Exh best", "Exh t(s)", "Exh evals", "GA max", "GA mean", "GA std", "GA min", "GA t(s)", "GA evals"]
    body = []
    for r in rows:
        body.append([
            r["dataset"], f4(r["exh_best_fitness"]), ft(r["exh_time_s"]), str(r["exh_func_eval"]),
            f4(r["ga_max"]), f4(r["ga_mean"]), f4(r["ga_std"]), f4(r["ga_min"]),
            ft(r["ga_time_s"]), str(r["ga_func_eval"]),
        ])
    if not with_times:
        keep = [i for i, h in enumerate(head) if "t(s)" not in h]
        head = [head[i] for i in keep]
        body = [[b[i] for i in keep] for b in body]
    widths = [max(len(h), *(len(b[i]) for b in body)) if body else len(h) for i, h in enumerate(head)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(head, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(b, widths)) for b in body]
    return "\n".join(lines)


@dataclass
class SweepRecord:
    n_i: int
    k: int
    mean_time: float
    runs_kept: int
    mean_evaluations: float = float("nan")
    status: str = "ok"


SWEEP_COLUMNS = ["n_i", "k", "mean_time", "runs_kept", "mean_evaluations", "status"]


def trimmed_mean(values: Sequence[float]) -> float:
    """Mean after discarding one maximum and one minimum."""
    if len(values) < 3:
        raise InvalidInputError("trimmed mean needs at least three values")
    return statistics.fmean(sorted(values)[1:-1])


def sweep(
    n_i_values: Iterable[int],
    k_values: Iterable[int],
    n_j: int = 3,
    runs: int = 20,
    seed: int = 0,
    backend: str | None = None,
    repeat: int = 1,
    **gen_kwargs,
) -> list[SweepRecord]:
    """Time the exhaustive solver over a grid of instance sizes.

    Each ``(n_i, k)`` cell draws ``runs`` random instances from a generator
    seeded by ``(seed, n_i, k)``; the slowest and fastest timings are dropped.
    With ``repeat > 1`` each instance is solved that many times and the
    fastest wall-clock time is kept.
    """
    if repeat < 1:
        raise InvalidInputError("repeat must be >= 1")
    if runs < 3:
        raise InvalidInputError("sweep needs at least three runs per cell")
    records = []
    for k in k_values:
        for n_i in n_i_values:
            try:
                config = GeneratorConfig(n_i=n_i, n_j=n_j, n_k=k, **gen_kwargs)
            except InvalidInputError as exc:
                log.warning("skipping cell n_i=%d k=%d: %s", n_i, k, exc)
                records.append(SweepRecord(n_i, k, float("nan"), 0, status=f"skipped: {exc}"))
                continue
            rng = np.random.default_rng([seed, n_i, k])
            times, evals = [], []
            for _ in range(runs):
                inst = generate_instance(config, rng)
                best = math.inf
                for _ in range(repeat):
                    t0 = time.perf_counter()
                    res = solve_exact(inst, budget=None, backend=backend, validate=False)
                    best = min(best, time.perf_counter() - t0)
                times.append(best)
                evals.append(res.evaluations)
            records.append(SweepRecord(n_i, k, trimmed_mean(times), runs - 2, statistics.fmean(evals)))
    return records


def sweep_rows(records: Iterable[SweepRecord]) -> list[dict]:
    return [asdict(r) for r in records]
