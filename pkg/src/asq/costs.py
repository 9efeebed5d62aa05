"""Preprocessing arrays and constant-time interval variance costs.

Formulas and documentation use 1-based indices k, j over the sorted
vector (``1 <= k <= j <= d``); storage is 0-based with index i holding
the i-th cumulative value, stated here once.  All interval sums follow
the half-open convention over (x_k, x_j]: the left endpoint contributes
zero variance, so prefix-sum differences are exact.

Grid (histogram) indices are 0-based ``0 <= k <= j <= m`` over the m+1
uniformly spaced candidate levels; that matches the natural labeling of
grid points and needs no offset.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import SortedInput, WeightedInput, _frozen
from .errors import DegenerateRange, Empty, IndexOutOfRange, NonFinite


@dataclass(frozen=True)
class PrefixSums:
    """Cumulative sums beta[j] = sum_{i<=j} x_i and gamma[j] = sum x_i^2.

    Both arrays have length d+1 with index 0 holding 0, so beta[j] is the
    sum of the first j entries.  Differences recover interval sums up to
    float64 rounding (documented relative tolerance 1e-9 on objectives).
    """

    beta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "beta", _frozen(self.beta))
        object.__setattr__(self, "gamma", _frozen(self.gamma))

    @property
    def d(self) -> int:
        return self.beta.shape[0] - 1

    def positions(self) -> np.ndarray:
        """1-based entry positions as float64 (unit cumulative mass), cached."""
        cached = getattr(self, "_positions", None)
        if cached is None:
            cached = _frozen(np.arange(1, self.d + 1, dtype=np.float64))
            object.__setattr__(self, "_positions", cached)
        return cached


@dataclass(frozen=True)
class WeightedPrefix:
    """Cumulative weights alpha, weighted sums beta, weighted squares gamma."""

    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alpha", _frozen(self.alpha))
        object.__setattr__(self, "beta", _frozen(self.beta))
        object.__setattr__(self, "gamma", _frozen(self.gamma))

    @property
    def d(self) -> int:
        return self.alpha.shape[0] - 1


@dataclass(frozen=True)
class Histogram:
    """A uniform grid over [x_1, x_d] with cumulative mass arrays.

    ``alpha[l]``, ``beta[l]``, ``gamma[l]`` hold the count, sum, and sum
    of squares of all entries in bins 0..l, i.e. entries <= the grid
    point s_l = grid_min + l * delta (up to the binning convention for
    boundary values).  ``occupied`` lists the grid indices kept after
    empty-bin compaction: both endpoints of every bin with mass, plus 0
    and m — an optimal grid-restricted codebook only ever needs those.
    """

    grid_min: float
    grid_max: float
    m: int
    delta: float
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    occupied: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alpha", _frozen(self.alpha))
        object.__setattr__(self, "beta", _frozen(self.beta))
        object.__setattr__(self, "gamma", _frozen(self.gamma))
        occ = np.ascontiguousarray(self.occupied, dtype=np.int64)
        occ.flags.writeable = False
        object.__setattr__(self, "occupied", occ)

    def levels(self) -> np.ndarray:
        """All m+1 grid points, with exact endpoints (computed once)."""
        cached = getattr(self, "_levels", None)
        if cached is None:
            cached = _frozen(grid_levels(self.grid_min, self.grid_max, self.m))
            object.__setattr__(self, "_levels", cached)
        return cached


def grid_levels(x1: float, xd: float, m: int) -> np.ndarray:
    """The m+1 uniform candidate levels x1 + l*delta with exact endpoints."""
    delta = (xd - x1) / m
    s = x1 + np.arange(m + 1, dtype=np.float64) * delta
    s[0] = x1
    s[m] = xd
    return s


def preprocess(input: SortedInput) -> PrefixSums:
    """O(d) cumulative sums of the vector and of its squares."""
    values = input.values
    beta = np.empty(values.shape[0] + 1, dtype=np.float64)
    gamma = np.empty_like(beta)
    beta[0] = 0.0
    gamma[0] = 0.0
    np.cumsum(values, out=beta[1:])
    np.cumsum(values * values, out=gamma[1:])
    return PrefixSums(beta=beta, gamma=gamma)


def _check_pair(k: int, j: int, lo: int, hi: int) -> None:
    if not (lo <= k <= j <= hi):
        raise IndexOutOfRange(k, j, lo, hi)


def cost(P: PrefixSums, X: SortedInput, k: int, j: int) -> float:
    """C[k,j]: summed rounding variance of entries in (x_k, x_j], O(1).

    Equals -x_j*x_k*(j-k) + (x_j+x_k)*(beta_j-beta_k) - (gamma_j-gamma_k);
    exactly 0 when k == j.
    """
    _check_pair(k, j, 1, X.d)
    return float(
        _kernels._cost_scalar(
            X.values, P.positions(), P.beta[1:], P.gamma[1:], k - 1, j - 1
        )
    )


def best_mid(P: PrefixSums, X: SortedInput, k: int, j: int) -> int:
    """The integer b* in [k, j] minimizing C[k,b] + C[b,j], in closed form.

    Returns k when x_k == x_j (zero-width interval, any choice costs 0).
    """
    _check_pair(k, j, 1, X.d)
    b0 = _kernels._best_mid_scalar(X.values, P.positions(), P.beta[1:], k - 1, j - 1)
    return int(b0) + 1


def cost2(P: PrefixSums, X: SortedInput, k: int, j: int) -> float:
    """C2[k,j] = min over b in [k,j] of C[k,b] + C[b,j], O(1) via b*."""
    _check_pair(k, j, 1, X.d)
    return float(
        _kernels._cost2_scalar(
            X.values, P.positions(), P.beta[1:], P.gamma[1:], k - 1, j - 1
        )
    )


def histogram_preprocess(raw, m: int, compact: bool = True) -> Histogram:
    """Bin a (possibly unsorted) vector onto a uniform m-bin grid, O(d + m).

    Entry x lands in bin l = min(ceil((x - x_1) / delta), m); x == x_1
    lands in bin 0.  Entries exactly on a grid point belong to the bin
    ending there.  With ``compact`` (the default), ``occupied`` drops
    interior grid points not adjacent to any mass; passing False keeps
    every grid index.

    Raises DegenerateRange when all entries are equal (no grid exists).
    """
    values = np.ascontiguousarray(raw, dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise Empty("empty input vector")
    bad = ~np.isfinite(values)
    if bad.any():
        i = int(np.argmax(bad))
        raise NonFinite(i, float(values[i]))
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    x1 = float(values.min())
    xd = float(values.max())
    if x1 == xd:
        raise DegenerateRange(x1)
    delta = (xd - x1) / m
    counts, sums, sqs = _kernels._bin_masses(values, x1, delta, m)
    alpha = np.cumsum(counts)
    beta = np.cumsum(sums)
    gamma = np.cumsum(sqs)
    if compact:
        nz = np.flatnonzero(counts > 0)
        occupied = np.unique(np.concatenate([[0, m], nz, np.maximum(nz - 1, 0)]))
    else:
        occupied = np.arange(m + 1, dtype=np.int64)
    return Histogram(
        grid_min=x1,
        grid_max=xd,
        m=int(m),
        delta=float(delta),
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        occupied=occupied,
    )


def grid_cost(H: Histogram, k: int, j: int) -> float:
    """C_m[k,j]: summed variance of all entries in (s_k, s_j], O(1)."""
    _check_pair(k, j, 0, H.m)
    s = H.levels()
    return float(_kernels._cost_scalar(s, H.alpha, H.beta, H.gamma, k, j))


def weighted_preprocess(input: WeightedInput) -> WeightedPrefix:
    """O(d) cumulative weights, weighted sums, and weighted squares."""
    w = input.weights
    x = input.values
    d = input.d
    alpha = np.empty(d + 1, dtype=np.float64)
    beta = np.empty_like(alpha)
    gamma = np.empty_like(alpha)
    alpha[0] = 0.0
    beta[0] = 0.0
    gamma[0] = 0.0
    np.cumsum(w, out=alpha[1:])
    np.cumsum(w * x, out=beta[1:])
    np.cumsum(w * x * x, out=gamma[1:])
    return WeightedPrefix(alpha=alpha, beta=beta, gamma=gamma)


def weighted_cost(WP: WeightedPrefix, X, k: int, j: int) -> float:
    """C_w[k,j] = sum of w * (x_j - x)(x - x_k) over entries in (x_k, x_j].

    ``X`` may be a WeightedInput or the sorted values array itself.
    """
    values = X.values if isinstance(X, WeightedInput) else np.asarray(X, dtype=np.float64)
    _check_pair(k, j, 1, values.shape[0])
    return float(
        _kernels._cost_scalar(
            values, WP.alpha[1:], WP.beta[1:], WP.gamma[1:], k - 1, j - 1
        )
    )
