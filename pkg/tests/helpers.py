"""Shared fixtures and independent oracles.

Oracles here deliberately avoid the library code paths they check:
plain-Python Gaussian elimination, exhaustive permutation search, and
hand-rolled moment formulas.
"""

import itertools
import math

import numpy as np

from lingamkit import ConnectionMatrix, center

# The worked three-variable example model:
#   x1 = e1,  x2 = 1.5 x1 + e2,  x3 = 0.8 x1 - 1.5 x2 + e3
CHAIN_B = ConnectionMatrix([[0.0, 0.0, 0.0], [1.5, 0.0, 0.0], [0.8, -1.5, 0.0]])


def power_noise(rng, n, q=2.0):
    """sign(z)|z|^q of standard Gaussian z, standardized to unit variance."""
    z = rng.standard_normal(n)
    e = np.sign(z) * np.abs(z) ** q
    e -= e.mean()
    return e / np.sqrt(e @ e / n)


def chain_dataset(n, rng, noise="uniform"):
    """Sample the three-variable chain with unit-variance non-Gaussian noise."""
    if noise == "uniform":
        e = rng.uniform(-math.sqrt(3.0), math.sqrt(3.0), size=(3, n))
    elif noise == "q2":
        e = np.vstack([power_noise(rng, n, 2.0) for _ in range(3)])
    else:
        raise ValueError(noise)
    x1 = e[0]
    x2 = 1.5 * x1 + e[1]
    x3 = 0.8 * x1 - 1.5 * x2 + e[2]
    return center(np.vstack([x1, x2, x3]))


def gauss_solve(a, b):
    """Solve a dense linear system by plain Gauss-Jordan elimination."""
    a = [list(map(float, row)) for row in a]
    b = list(map(float, b))
    k = len(a)
    for col in range(k):
        pivot = max(range(col, k), key=lambda r: abs(a[r][col]))
        if abs(a[pivot][col]) == 0.0:
            raise ZeroDivisionError("singular system")
        a[col], a[pivot] = a[pivot], a[col]
        b[col], b[pivot] = b[pivot], b[col]
        inv = 1.0 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        b[col] *= inv
        for r in range(k):
            if r != col and a[r][col] != 0.0:
                factor = a[r][col]
                a[r] = [rv - factor * cv for rv, cv in zip(a[r], a[col])]
                b[r] -= factor * b[col]
    return b


def brute_force_strict_lower(matrix):
    """All permutations (1-based tuples) that make the matrix strictly lower."""
    arr = np.asarray(matrix, dtype=float)
    p = arr.shape[0]
    found = []
    for perm in itertools.permutations(range(p)):
        idx = list(perm)
        permuted = arr[np.ix_(idx, idx)]
        if not np.any(np.triu(permuted) != 0.0):
            found.append(tuple(i + 1 for i in perm))
    return found


def brute_force_assignment(w):
    """Minimal sum of 1/|w[perm[i], i]| over all row permutations, or None."""
    arr = np.asarray(w, dtype=float)
    p = arr.shape[0]
    best = None
    for perm in itertools.permutations(range(p)):
        diag = arr[list(perm), range(p)]
        if np.any(diag == 0.0):
            continue
        cost = float(np.sum(1.0 / np.abs(diag)))
        if best is None or cost < best:
            best = cost
    return best


def scratch_t_statistic(j, active, values):
    """Literal plain-Python evaluation of the tanh nonlinear-correlation score.

    ``values`` is the p x n matrix, ``j``/``active`` are 1-based.
    """

    def mean(xs):
        return sum(xs) / len(xs)

    def corr(a, b):
        ma, mb = mean(a), mean(b)
        da = [v - ma for v in a]
        db = [v - mb for v in b]
        va = sum(v * v for v in da)
        vb = sum(v * v for v in db)
        if va == 0.0 or vb == 0.0:
            return None
        return sum(x * y for x, y in zip(da, db)) / math.sqrt(va * vb)

    xj = [float(v) for v in values[j - 1]]
    gxj = [math.tanh(v) for v in xj]
    mj = mean(xj)
    var_j = sum((v - mj) ** 2 for v in xj)
    total = 0.0
    for i in sorted(active):
        if i == j:
            continue
        xi = [float(v) for v in values[i - 1]]
        mi = mean(xi)
        cov = sum((a - mj) * (b - mi) for a, b in zip(xj, xi))
        coef = cov / var_j
        resid = [a - coef * b for a, b in zip(xi, xj)]
        c1 = corr([math.tanh(v) for v in resid], xj)
        c2 = corr(resid, gxj)
        total += (abs(c1) if c1 is not None else 0.0) + (abs(c2) if c2 is not None else 0.0)
    return total


def analytic_covariance(b, noise_stds):
    """Cov(x) for x = Bx + e, via the mixing-matrix route A diag(s^2) A^T.

    Deliberately a different formula than any incremental recursion a
    generator might use internally.
    """
    b = np.asarray(b, dtype=float)
    s = np.asarray(noise_stds, dtype=float)
    a = np.linalg.inv(np.eye(b.shape[0]) - b)
    return a @ np.diag(s**2) @ a.T
