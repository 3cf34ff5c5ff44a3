"""Order-error and distance metrics, plus the benchmark sweep harness.

A sweep runs every (p, n) cell of a grid for a number of trials. Each
trial generates a fresh synthetic dataset, fits the selected
estimators, and records two metrics against the generating truth:

* order errors: nonzero entries strictly above the diagonal after the
  TRUE strength matrix is permuted by the estimated order (zero means
  the order is consistent with the true graph);
* Frobenius distance between true and estimated strength matrices.

Wall time is captured per fit with a monotonic clock, excluding data
generation, so scaling checks isolate estimator cost. Estimator
failures (e.g. rank-deficient covariance when p > n) are recorded per
trial and never abort the sweep.

Every trial draws its generator and estimator seeds from
``SeedSequence(master_seed, spawn_key=(cell_index, trial_index))``, so
results are reproducible and independent of scheduling.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from time import perf_counter

import numpy as np

from . import direct
from .core import ConnectionMatrix, _as_order, permute_matrix
from .errors import DimensionMismatch, LingamError
from .ica import FastIcaConfig, ica_lingam_fit
from .synth import SynthConfig, generate

ESTIMATORS = ("direct", "ica_baseline")


def order_errors(b_true: ConnectionMatrix, k) -> int:
    """Count true edges that point backwards under the estimated order ``k``."""
    if not isinstance(b_true, ConnectionMatrix):
        b_true = ConnectionMatrix(b_true)
    try:
        k = _as_order(k, b_true.p)
    except LingamError as exc:
        raise DimensionMismatch(str(exc)) from exc
    permuted = permute_matrix(b_true, k)
    return int(np.count_nonzero(np.triu(permuted.entries, k=1)))


def frobenius_distance(b_true, b_hat) -> float:
    """``sqrt(trace((A - B)^T (A - B)))`` between two strength matrices."""
    a = b_true.entries if isinstance(b_true, ConnectionMatrix) else np.asarray(b_true, dtype=float)
    b = b_hat.entries if isinstance(b_hat, ConnectionMatrix) else np.asarray(b_hat, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape {a.shape} vs {b.shape}")
    diff = a - b
    return float(np.sqrt(np.sum(diff * diff)))


@dataclass(frozen=True)
class BenchmarkGrid:
    """Sweep definition. Defaults reproduce the full evaluation protocol
    (4 x 8 cells, 501 trials each); pass smaller lists for smoke runs."""

    p_values: tuple[int, ...] = (10, 20, 50, 100)
    n_values: tuple[int, ...] = (30, 50, 80, 200, 500, 1000, 2000, 5000)
    trials: int = 501
    estimators: tuple[str, ...] = ESTIMATORS
    master_seed: int = 0

    def __post_init__(self):
        if not self.p_values or not self.n_values:
            raise ValueError("p_values and n_values must be non-empty")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        unknown = set(self.estimators) - set(ESTIMATORS)
        if unknown:
            raise ValueError(f"unknown estimators {sorted(unknown)}; choose from {ESTIMATORS}")
        object.__setattr__(self, "p_values", tuple(int(p) for p in self.p_values))
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "estimators", tuple(self.estimators))


@dataclass(frozen=True)
class TrialResult:
    """One estimator run. Metrics are independent: in the p > n regime
    the direct estimator still yields an order (and an order-error
    count) while strength estimation is impossible, so ``order_errors``
    can be present while ``frobenius`` is None; ``error`` carries the
    failure code whenever any metric is missing."""

    trial: int
    order_errors: int | None
    frobenius: float | None
    seconds: float
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


def box_summary(values) -> dict[str, float] | None:
    """Median, quartiles, and 1.5-IQR whiskers clamped to the observed range."""
    values = np.asarray(list(values), dtype=float)
    if values.size == 0:
        return None
    q1, median, q3 = np.percentile(values, [25, 50, 75])
    iqr = q3 - q1
    return {
        "median": float(median),
        "q1": float(q1),
        "q3": float(q3),
        "whisker_low": float(max(values.min(), q1 - 1.5 * iqr)),
        "whisker_high": float(min(values.max(), q3 + 1.5 * iqr)),
    }


@dataclass(frozen=True)
class CellResult:
    p: int
    n: int
    trials: dict[str, tuple[TrialResult, ...]]
    summaries: dict[str, dict[str, dict[str, float] | None]]
    failures: dict[str, int]


def _summarize_cell(per_estimator: dict[str, tuple[TrialResult, ...]]):
    summaries = {}
    failures = {}
    for name, results in per_estimator.items():
        summaries[name] = {
            "order_errors": box_summary(
                r.order_errors for r in results if r.order_errors is not None
            ),
            "frobenius": box_summary(r.frobenius for r in results if r.frobenius is not None),
            "seconds": box_summary(r.seconds for r in results),
        }
        failures[name] = sum(1 for r in results if r.failed)
    return summaries, failures


@dataclass(frozen=True)
class EvaluationReport:
    grid: BenchmarkGrid
    cells: tuple[CellResult, ...]

    def to_dict(self, include_timings: bool = False) -> dict:
        """JSON-ready structure. Wall times are omitted unless requested,
        so that artifacts from identical seeds are byte-identical."""
        cells = []
        for cell in self.cells:
            estimators = {}
            for name in self.grid.estimators:
                results = cell.trials[name]
                trials = []
                for r in results:
                    row = {
                        "trial": r.trial,
                        "order_errors": r.order_errors,
                        "frobenius": r.frobenius,
                        "error": r.error,
                    }
                    if include_timings:
                        row["seconds"] = r.seconds
                    trials.append(row)
                summaries = dict(cell.summaries[name])
                if not include_timings:
                    summaries.pop("seconds", None)
                estimators[name] = {
                    "trials": trials,
                    "failures": cell.failures[name],
                    "summaries": summaries,
                }
            cells.append({"p": cell.p, "n": cell.n, "estimators": estimators})
        return {
            "grid": {
                "p_values": list(self.grid.p_values),
                "n_values": list(self.grid.n_values),
                "trials": self.grid.trials,
                "estimators": list(self.grid.estimators),
                "master_seed": self.grid.master_seed,
            },
            "cells": cells,
        }

    def write_csv(self, path, include_timings: bool = False) -> None:
        """One row per (cell, estimator, trial)."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["p", "n", "estimator", "trial", "order_errors", "frobenius", "seconds", "error"])
            for cell in self.cells:
                for name in self.grid.estimators:
                    for r in cell.trials[name]:
                        writer.writerow([
                            cell.p,
                            cell.n,
                            name,
                            r.trial,
                            "" if r.order_errors is None else r.order_errors,
                            "" if r.frobenius is None else repr(r.frobenius),
                            repr(r.seconds) if include_timings else "",
                            r.error or "",
                        ])

    def summary_table(self) -> str:
        """Plain-text medians per cell and estimator."""
        lines = [f"{'p':>4} {'n':>6} {'estimator':<12} {'med.order.err':>13} {'med.frobenius':>13} {'failures':>8}"]
        for cell in self.cells:
            for name in self.grid.estimators:
                s = cell.summaries[name]
                med_oe = s["order_errors"]
                med_fr = s["frobenius"]
                lines.append(
                    f"{cell.p:>4} {cell.n:>6} {name:<12} "
                    f"{med_oe['median'] if med_oe else float('nan'):>13.2f} "
                    f"{med_fr['median'] if med_fr else float('nan'):>13.4f} "
                    f"{cell.failures[name]:>8}"
                )
        return "\n".join(lines)


def _run_trial(grid: BenchmarkGrid, cell_index: int, p: int, n: int, trial: int):
    data_seq, est_seq = np.random.SeedSequence(
        grid.master_seed, spawn_key=(cell_index, trial)
    ).spawn(2)
    cfg = SynthConfig(p=p, n=n, network="random-choice")
    data, truth = generate(cfg, rng=np.random.default_rng(data_seq))
    b_obs = truth.observed_matrix()
    est_seed = int(est_seq.generate_state(1)[0])

    out = {}
    for name in grid.estimators:
        start = perf_counter()
        oe = fr = None
        error = None
        try:
            if name == "direct":
                order, _ = direct.estimate_order(data)
                oe = order_errors(b_obs, order)
                b_hat = direct.estimate_strengths(data, order)
            else:
                baseline = ica_lingam_fit(data, FastIcaConfig(seed=est_seed))
                oe = order_errors(b_obs, baseline.order)
                b_hat = baseline.strengths
            fr = frobenius_distance(b_obs, b_hat)
        except LingamError as exc:
            error = exc.code
        elapsed = perf_counter() - start
        out[name] = TrialResult(
            trial=trial, order_errors=oe, frobenius=fr, seconds=elapsed, error=error
        )
    return out


def run_benchmark(grid: BenchmarkGrid, threads: int = 1) -> EvaluationReport:
    """Run the sweep. Trials within a cell may run on a thread pool;
    results are collected by trial index, so the report does not depend
    on scheduling."""
    cells = []
    cell_specs = [(p, n) for p in grid.p_values for n in grid.n_values]
    for cell_index, (p, n) in enumerate(cell_specs):
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                trial_maps = list(
                    pool.map(
                        lambda t: _run_trial(grid, cell_index, p, n, t),
                        range(grid.trials),
                    )
                )
        else:
            trial_maps = [_run_trial(grid, cell_index, p, n, t) for t in range(grid.trials)]
        per_estimator = {
            name: tuple(tm[name] for tm in trial_maps) for name in grid.estimators
        }
        summaries, failures = _summarize_cell(per_estimator)
        cells.append(CellResult(p=p, n=n, trials=per_estimator, summaries=summaries, failures=failures))
    return EvaluationReport(grid=grid, cells=tuple(cells))
