"""Direct estimation of a causal ordering by recursive root extraction.

The estimator alternates two moves, exactly ``p - 1`` times:

1. score every remaining variable with the independence statistic and
   take the minimizer as the next root of the causal order;
2. replace every other remaining variable by its residual after
   regressing out the chosen root, and re-center.

A linear non-Gaussian acyclic model provably holds for the residuals,
and their internal ordering agrees with that of the original
variables, so exogenous-variable detection can be applied recursively.
There is no search in parameter space and no iteration limit: the loop
length is fixed by the number of variables.

Connection strengths are then estimated by ordinary least squares of
each variable on all its predecessors in the order, on the original
(non-residualized) data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    CausalOrder,
    ConnectionMatrix,
    Dataset,
    _as_order,
    center,
    multi_least_squares,
    permute_matrix,
    require_centered,
    simple_residual,
)
from .errors import ZeroVarianceRow
from .independence import IndependenceConfig, select_minimum, t_profile


@dataclass(frozen=True)
class FittedModel:
    """Estimated order and strengths, plus per-step selection scores.

    ``diagnostics[s]`` maps each candidate subscript considered at
    selection step ``s`` (0-based) to its independence score, so the
    map at position ``s`` has ``p - s`` entries and there are ``p - 1``
    maps in total.
    """

    order: CausalOrder
    strengths: ConnectionMatrix
    diagnostics: tuple[dict[int, float], ...]

    def __post_init__(self):
        p = self.order.p
        if len(self.diagnostics) != max(p - 1, 0):
            raise ValueError(f"expected {p - 1} diagnostic steps, got {len(self.diagnostics)}")
        for s, step in enumerate(self.diagnostics):
            if len(step) != p - s:
                raise ValueError(f"diagnostic step {s} has {len(step)} entries, expected {p - s}")
        if not permute_matrix(self.strengths, self.order).is_strictly_lower():
            raise ValueError("strengths are not strictly lower triangular under the order")


def estimate_order(
    data: Dataset, cfg: IndependenceConfig | None = None
) -> tuple[CausalOrder, tuple[dict[int, float], ...]]:
    """Estimate a causal order by repeated root extraction and residualization.

    Returns the order over original 1-based subscripts together with
    the per-step score maps. Raises ``ZeroVarianceRow`` (a
    ``ZeroVariance``) if a residual row collapses to a constant, which
    signals exact collinearity in the input.
    """
    cfg = cfg or IndependenceConfig()
    require_centered(data)
    work = np.array(data.values)
    subs = list(range(1, data.p + 1))
    order: list[int] = []
    diagnostics: list[dict[int, float]] = []

    while len(subs) > 1:
        labels = tuple(data.labels[s - 1] for s in subs)
        try:
            working = center(work, labels=labels)
        except ZeroVarianceRow as exc:
            # Map the local row back to its original subscript.
            raise ZeroVarianceRow(
                subs[exc.subscript - 1],
                f"variable {labels[exc.subscript - 1]} became constant after "
                "residualization (exact collinearity)",
            ) from exc
        profile = t_profile(range(1, len(subs) + 1), working, cfg)
        pick = select_minimum(profile)
        diagnostics.append({subs[local - 1]: t for local, t in profile.items()})
        order.append(subs[pick - 1])

        root = working.values[pick - 1]
        rest = [local for local in range(len(subs)) if local != pick - 1]
        work = np.empty((len(rest), data.n))
        for out_row, local in enumerate(rest):
            _, work[out_row] = simple_residual(working.values[local], root)
        subs.pop(pick - 1)

    order.extend(subs)
    return CausalOrder(tuple(order)), tuple(diagnostics)


def estimate_strengths(data: Dataset, order) -> ConnectionMatrix:
    """Least-squares strengths of each variable on all earlier variables in ``order``.

    Entries at or above the diagonal of the order-permuted matrix are
    exact zeros by construction. Raises ``TooFewObservations`` when a
    variable has at least as many predecessors as there are
    observations (the more-variables-than-observations regime, where
    plain least squares is undefined).
    """
    require_centered(data)
    order = _as_order(order, data.p)
    b = np.zeros((data.p, data.p))
    seq = order.order
    for pos in range(1, data.p):
        target = seq[pos]
        parents = seq[:pos]
        pred_rows = data.values[[s - 1 for s in parents]]
        coefs = multi_least_squares(data.row(target), pred_rows)
        for parent, coef in zip(parents, coefs):
            b[target - 1, parent - 1] = coef
    return ConnectionMatrix(b)


def fit(data: Dataset, cfg: IndependenceConfig | None = None) -> FittedModel:
    """Full pipeline: estimate the order, then strengths on the original data."""
    order, diagnostics = estimate_order(data, cfg)
    strengths = estimate_strengths(data, order)
    return FittedModel(order=order, strengths=strengths, diagnostics=diagnostics)
