"""Percentile bootstrap confidence intervals for edge strengths.

The causal ordering is held fixed across resamples: each resample
draws n observation columns with replacement, re-centers, and re-runs
the least-squares strength estimation for the given order. Every
coefficient that the order allows (each variable on each of its
predecessors) gets an empirical distribution, a percentile interval
with linearly interpolated quantiles, and a significance flag set when
the interval excludes zero.

Degenerate resamples (a constant row, or a singular regression design)
are redrawn; the number of redraws is capped and reported.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dataset, _as_order, center
from .direct import estimate_strengths
from .errors import SingularDesign, TooManySingularResamples, ZeroVariance


@dataclass(frozen=True)
class EdgeInterval:
    """Interval for the edge ``x_j -> x_i`` (1-based subscripts).

    ``significant`` holds exactly when 0 lies outside
    ``[lower, upper]``. For percentile intervals the point estimate
    normally falls inside the interval as well.
    """

    i: int
    j: int
    point: float
    lower: float
    upper: float
    significant: bool

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"lower {self.lower} exceeds upper {self.upper}")
        if self.significant != (not self.lower <= 0.0 <= self.upper):
            raise ValueError("significant flag contradicts the interval")

    def as_text(self, labels=None) -> str:
        src = labels[self.j - 1] if labels else f"x{self.j}"
        dst = labels[self.i - 1] if labels else f"x{self.i}"
        flag = "sig" if self.significant else "ns"
        return f"{src} -> {dst} : {self.point:.6g} [{self.lower:.6g}, {self.upper:.6g}] {flag}"


@dataclass(frozen=True)
class BootstrapReport:
    """Intervals for every orderable edge plus resampling bookkeeping."""

    edges: tuple[EdgeInterval, ...]
    level: float
    resamples: int
    singular_redraws: int


def bootstrap_cis(
    data: Dataset,
    order,
    level: float = 0.99,
    resamples: int = 2000,
    rng: np.random.Generator | None = None,
    max_redraws: int | None = None,
) -> BootstrapReport:
    """Percentile intervals for all coefficients under a fixed ordering.

    ``max_redraws`` bounds the total number of degenerate resamples
    tolerated before ``TooManySingularResamples`` is raised; it
    defaults to ``resamples`` (i.e. at most a doubling of work).
    """
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie strictly between 0 and 1")
    if resamples < 100:
        raise ValueError("use at least 100 resamples")
    order = _as_order(order, data.p)
    rng = np.random.default_rng(0) if rng is None else rng
    cap = resamples if max_redraws is None else max_redraws

    point = estimate_strengths(data, order)
    seq = order.order
    slots = [(seq[pos], parent) for pos in range(1, data.p) for parent in seq[:pos]]
    slot_rows = np.array([i - 1 for i, _ in slots], dtype=int)
    slot_cols = np.array([j - 1 for _, j in slots], dtype=int)

    draws = np.empty((resamples, len(slots)))
    redraws = 0
    done = 0
    while done < resamples:
        idx = rng.integers(0, data.n, size=data.n)
        try:
            resampled = center(data.values[:, idx], labels=data.labels)
            b = estimate_strengths(resampled, order)
        except (ZeroVariance, SingularDesign):
            redraws += 1
            if redraws > cap:
                raise TooManySingularResamples(
                    f"{redraws} degenerate resamples exceeded the cap of {cap}"
                )
            continue
        draws[done] = b.entries[slot_rows, slot_cols]
        done += 1

    alpha = (1.0 - level) / 2.0
    lower = np.quantile(draws, alpha, axis=0, method="linear")
    upper = np.quantile(draws, 1.0 - alpha, axis=0, method="linear")

    edges = tuple(
        EdgeInterval(
            i=i,
            j=j,
            point=float(point.entries[i - 1, j - 1]),
            lower=float(lo),
            upper=float(hi),
            significant=not (lo <= 0.0 <= hi),
        )
        for (i, j), lo, hi in zip(slots, lower, upper)
    )
    return BootstrapReport(edges=edges, level=level, resamples=resamples, singular_redraws=redraws)
