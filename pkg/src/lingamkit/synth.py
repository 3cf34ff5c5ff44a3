"""Synthetic data generation for benchmark runs.

Each trial builds a random strictly lower triangular strength matrix
(dense or sparse), rescales every row so that the standard deviation of
the summed parent contribution lands uniformly in a configured interval
(computed analytically from the covariances fixed so far, not by
rejection), draws non-Gaussian external influences by power-transforming
standard Gaussians, propagates the structural equations in causal
order, and finally hides the order behind a uniform random row
permutation which is recorded as ground truth.

All randomness flows through a single ``numpy.random.Generator``
(PCG64). A fixed seed reproduces every byte of a run; independent
streams for parallel trials should be derived with
``numpy.random.SeedSequence(master, spawn_key=...)``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core import CausalOrder, ConnectionMatrix, Dataset, center, default_labels, permute_matrix

NETWORKS = ("dense", "sparse", "random-choice")


def _check_interval(name: str, interval) -> tuple[float, float]:
    lo, hi = (float(interval[0]), float(interval[1]))
    if not (0 < lo <= hi):
        raise ValueError(f"{name} must be a positive ordered interval, got {interval}")
    return lo, hi


@dataclass(frozen=True)
class SynthConfig:
    """Generation protocol parameters.

    ``q_ranges`` holds the two exponent intervals for the
    ``sign(z)|z|^q`` noise transform, one sub-Gaussian and one
    super-Gaussian; each draw picks an interval with equal probability.
    ``weight_floor`` excludes provisional edge weights below that
    magnitude so models stay comfortably away from unfaithful
    parameter cancellations.
    """

    p: int
    n: int
    network: str = "random-choice"
    parent_std_range: tuple[float, float] = (0.5, 1.5)
    noise_std_range: tuple[float, float] = (0.5, 1.5)
    q_ranges: tuple[tuple[float, float], tuple[float, float]] = ((0.5, 0.8), (1.2, 2.0))
    weight_floor: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be at least 1")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.network not in NETWORKS:
            raise ValueError(f"network must be one of {NETWORKS}")
        _check_interval("parent_std_range", self.parent_std_range)
        _check_interval("noise_std_range", self.noise_std_range)
        for rng_pair in self.q_ranges:
            _check_interval("q_ranges", rng_pair)
        if not (0 <= self.weight_floor < 1):
            raise ValueError("weight_floor must lie in [0, 1)")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass(frozen=True)
class GroundTruthModel:
    """The generating model for one synthetic dataset.

    ``b_true`` is strictly lower triangular in the pre-permutation
    variable numbering; ``shuffle`` maps emitted row ``i`` to
    pre-permutation variable ``shuffle[i]``.
    """

    b_true: ConnectionMatrix
    noise_stds: tuple[float, ...]
    exponents: tuple[float, ...]
    shuffle: CausalOrder

    def observed_matrix(self) -> ConnectionMatrix:
        """Strength matrix in the coordinates of the emitted dataset rows."""
        return permute_matrix(self.b_true, self.shuffle)

    def observed_root(self) -> int:
        """Emitted 1-based subscript of pre-permutation variable 1 (the first root)."""
        return self.shuffle.order.index(1) + 1

    def observed_order(self) -> CausalOrder:
        """A true causal order of the emitted rows (emitted subscripts, cause first)."""
        return self.shuffle.inverse()


def _lower_mask(p: int, network: str, rng: np.random.Generator) -> np.ndarray:
    mask = np.zeros((p, p), dtype=bool)
    if p == 1:
        return mask
    rows, cols = np.tril_indices(p, k=-1)
    if network == "random-choice":
        network = "dense" if rng.random() < 0.5 else "sparse"
    if network == "dense":
        mask[rows, cols] = True
        return mask
    while True:
        keep = rng.random(rows.size) < 0.5
        if keep.any():
            mask[rows[keep], cols[keep]] = True
            return mask


def random_model(cfg: SynthConfig, rng: np.random.Generator | None = None) -> GroundTruthModel:
    """Draw a ground-truth model (no data yet; shuffle starts as identity).

    Row rescaling uses the exact covariance recursion: when row ``i``
    is scaled so its parent contribution hits a target standard
    deviation, the covariances of ``x_i`` with earlier variables are
    updated analytically before the next row is processed.
    """
    rng = cfg.rng() if rng is None else rng
    p = cfg.p
    mask = _lower_mask(p, cfg.network, rng)

    b = np.zeros((p, p))
    n_edges = int(mask.sum())
    signs = rng.integers(0, 2, size=n_edges) * 2 - 1
    mags = rng.uniform(cfg.weight_floor, 1.0, size=n_edges)
    b[mask] = signs * mags

    noise_stds = rng.uniform(*cfg.noise_std_range, size=p)

    cov = np.zeros((p, p))
    for i in range(p):
        row = b[i, :i]
        if row.any():
            contrib_var = float(row @ cov[:i, :i] @ row)
            target = rng.uniform(*cfg.parent_std_range)
            b[i, :i] = row * (target / np.sqrt(contrib_var))
        cross = cov[:i, :i] @ b[i, :i]
        cov[i, :i] = cross
        cov[:i, i] = cross
        cov[i, i] = float(b[i, :i] @ cross) + noise_stds[i] ** 2

    choices = rng.integers(0, 2, size=p)
    exponents = np.array([rng.uniform(*cfg.q_ranges[c]) for c in choices])

    return GroundTruthModel(
        b_true=ConnectionMatrix(b),
        noise_stds=tuple(float(s) for s in noise_stds),
        exponents=tuple(float(q) for q in exponents),
        shuffle=CausalOrder.identity(p),
    )


def sample_non_gaussian(n: int, q: float, rng: np.random.Generator) -> np.ndarray:
    """Draw ``sign(z)|z|^q`` from standard Gaussian ``z``, standardized.

    ``q < 1`` yields sub-Gaussian samples (negative excess kurtosis),
    ``q > 1`` super-Gaussian; the result has sample mean 0 and sample
    variance 1 under the 1/n convention.
    """
    if q <= 0:
        raise ValueError("exponent q must be positive")
    if n < 2:
        raise ValueError("need at least two samples")
    z = rng.standard_normal(n)
    e = np.sign(z) * np.abs(z) ** q
    e -= e.mean()
    return e / np.sqrt(e @ e / n)


def generate(
    cfg: SynthConfig, rng: np.random.Generator | None = None
) -> tuple[Dataset, GroundTruthModel]:
    """Sample one dataset: draw a model, propagate it, shuffle rows, center.

    The emitted row order is uniformly random; the applied permutation
    is recorded in the returned model's ``shuffle`` so metrics can be
    computed in emitted coordinates via ``observed_matrix()``.
    """
    rng = cfg.rng() if rng is None else rng
    model = random_model(cfg, rng)
    p, n = cfg.p, cfg.n
    b = model.b_true.entries

    e = np.empty((p, n))
    for i in range(p):
        e[i] = model.noise_stds[i] * sample_non_gaussian(n, model.exponents[i], rng)
    x = np.empty((p, n))
    for i in range(p):
        x[i] = e[i] + b[i, :i] @ x[:i]

    perm = rng.permutation(p)
    shuffle = CausalOrder(tuple(int(s) + 1 for s in perm))
    dataset = center(x[perm], labels=default_labels(p))
    return dataset, replace(model, shuffle=shuffle)
