"""Naive reference implementations and generators shared by the tests.

Everything here trades speed for obviousness: costs are summed entry by
entry, minima are found by linear scans, and the reference DP keeps the
full table.  The production code must agree with these oracles.
"""

from __future__ import annotations

import math

import numpy as np

import asq


def naive_cost(values, k: int, j: int) -> float:
    """Summed rounding variance of entries with 1-based positions in (k, j]."""
    x = np.asarray(values, dtype=np.float64)
    a, b = x[k - 1], x[j - 1]
    seg = x[k:j]  # positions k+1 .. j
    return float(np.sum((b - seg) * (seg - a)))


def naive_weighted_cost(values, weights, k: int, j: int) -> float:
    """Weighted variant of :func:`naive_cost`."""
    x = np.asarray(values, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    a, b = x[k - 1], x[j - 1]
    seg = x[k:j]
    return float(np.sum(w[k:j] * (b - seg) * (seg - a)))


def grid_bin(x: float, x1: float, delta: float, m: int) -> int:
    """The grid bin of one entry: ceil((x - x1) / delta), clamped to [0, m]."""
    b = math.ceil((x - x1) / delta)
    return min(max(b, 0), m)


def naive_grid_cost(raw, m: int, k: int, j: int) -> float:
    """Variance of entries binned into grid intervals (k, j], summed naively."""
    x = np.asarray(raw, dtype=np.float64)
    x1, xd = float(x.min()), float(x.max())
    delta = (xd - x1) / m
    s = asq.grid_levels(x1, xd, m)
    total = 0.0
    for v in x:
        b = grid_bin(v, x1, delta, m)
        if k < b <= j:
            total += (s[j] - v) * (v - s[k])
    return total


def naive_best_mid(values, k: int, j: int) -> tuple[int, float]:
    """Leftmost argmin over b in [k, j] of cost(k,b) + cost(b,j), by scan."""
    best_b, best_v = k, naive_cost(values, k, j)  # split at b == k
    for b in range(k + 1, j + 1):
        v = naive_cost(values, k, b) + naive_cost(values, b, j)
        if v < best_v - 1e-15 * max(1.0, abs(best_v)):
            best_b, best_v = b, v
    return best_b, best_v


def naive_dp(values, s: int) -> tuple[float, list[int]]:
    """Reference O(s*d^2) table DP with smallest-index tie-breaking.

    Mirrors the production semantics: the base row allows 2 levels
    (segment [first, j]), each further row adds at most one level, and
    row i minimizes over every k <= j.  Returns (objective, positions).
    """
    x = np.asarray(values, dtype=np.float64)
    n = x.shape[0]
    C = np.zeros((n, n))
    for k in range(n):
        for j in range(k, n):
            C[k, j] = naive_cost(x, k + 1, j + 1)
    rows = s - 1  # row r = "at most r+1 levels"
    mse = np.full((rows, n), np.inf)
    back = np.zeros((rows, n), dtype=int)
    mse[0] = C[0]
    for r in range(1, rows):
        for j in range(n):
            best_k, best_v = 0, mse[r - 1, 0] + C[0, j]
            for k in range(1, j + 1):
                v = mse[r - 1, k] + C[k, j]
                if v < best_v:
                    best_k, best_v = k, v
            mse[r, j] = best_v
            back[r, j] = best_k
    pos = {0, n - 1}
    j = n - 1
    for r in range(rows - 1, 0, -1):
        j = int(back[r, j])
        pos.add(j)
    return float(mse[rows - 1, n - 1]), sorted(pos)


def monge_matrix(rng: np.random.Generator, n_rows: int, n_cols: int, *, integer=False):
    """A random Monge matrix: A[i,j] + A[i+1,j+1] <= A[i,j+1] + A[i+1,j].

    Built as r_i + c_j - cumsum2(D) with D >= 0, which satisfies the
    inequality with slack exactly D[i+1, j+1].  ``integer`` makes every
    entry an exact small integer, forcing plenty of ties.
    """
    if integer:
        D = rng.integers(0, 3, size=(n_rows, n_cols)).astype(np.float64)
        r = rng.integers(0, 20, size=n_rows).astype(np.float64)
        c = rng.integers(0, 20, size=n_cols).astype(np.float64)
    else:
        D = rng.random((n_rows, n_cols))
        r = 10.0 * rng.random(n_rows)
        c = 10.0 * rng.random(n_cols)
    M = np.cumsum(np.cumsum(D, axis=0), axis=1)
    return r[:, None] + c[None, :] - M


def scan_row_minima(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Leftmost per-row argmin/min by plain linear scan."""
    arg = np.argmin(A, axis=1)  # np.argmin returns the first occurrence
    return arg.astype(np.int64), A[np.arange(A.shape[0]), arg]


def counting_matrix(A: np.ndarray):
    """Wrap a dense matrix as an ImplicitMatrix counting eval() calls."""
    calls = [0]

    def eval(i: int, j: int) -> float:
        calls[0] += 1
        return float(A[i, j])

    return asq.ImplicitMatrix(n_rows=A.shape[0], n_cols=A.shape[1], eval=eval), calls


DIST_SPECS = (
    "lognormal(0,1)",
    "normal(0,1)",
    "exponential(1)",
    "truncnorm(0,1,-1,1)",
    "weibull(1,1)",
)


def random_vectors(n_per_dist: int, d_lo: int, d_hi: int, seed: int = 0):
    """Yield (description, vector) pairs across every supported distribution,
    plus duplicate-heavy integer vectors (the tie-breaking stress case)."""
    rng = np.random.default_rng(seed)
    for spec in DIST_SPECS:
        dist = asq.parse_distribution(spec)
        for t in range(n_per_dist):
            d = int(rng.integers(d_lo, d_hi + 1))
            yield f"{spec}#{t}", asq.sample(dist, d, int(rng.integers(0, 2**31)))
    for t in range(n_per_dist):
        d = int(rng.integers(d_lo, d_hi + 1))
        yield f"duplicates#{t}", rng.integers(0, max(2, d // 2), size=d).astype(np.float64)


def rel_diff(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)
