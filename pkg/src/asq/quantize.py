"""Unbiased stochastic rounding onto a codebook, plus exact error metrics.

An entry x bracketed by codebook levels a <= x <= b rounds down to a
with probability (b - x) / (b - a) and up to b otherwise, which makes
the decoded value an unbiased estimate of x with variance (b-x)(x-a).
Randomness is counter-based per entry index: encoding is reproducible
for a fixed seed and independent of how entries are partitioned across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Codebook, QuantizedVector
from .errors import OutOfCodebookRange, ZeroNorm

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_INV_2_53 = 1.0 / float(1 << 53)


def _mix64(z: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer, vectorized over uint64 counters."""
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


@dataclass(frozen=True)
class RandomSource:
    """Counter-based randomness: output i depends only on (seed, i)."""

    seed: int

    def _base(self) -> np.uint64:
        return np.uint64(self.seed & 0xFFFFFFFFFFFFFFFF)

    def uniforms(self, count: int, offset: int = 0) -> np.ndarray:
        """count i.i.d. uniforms in [0, 1) for counters offset..offset+count-1."""
        with np.errstate(over="ignore"):
            ctr = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
            z = _mix64(self._base() + ctr * _GOLDEN)
        return (z >> np.uint64(11)).astype(np.float64) * _INV_2_53

    def stream(self, t: int) -> "RandomSource":
        """An independent child source (for repeated trials)."""
        with np.errstate(over="ignore"):
            z = _mix64(np.array([self._base() + np.uint64(t + 1) * _MIX2], dtype=np.uint64))
        return RandomSource(seed=int(z[0]))


def _bracket_indices(X: np.ndarray, codebook: Codebook) -> tuple[np.ndarray, np.ndarray]:
    """Per-entry indices (ia, ib) of the bracketing levels a <= x <= b.

    Entries outside the codebook range by at most 1e-12 * range (float
    drift from grid arithmetic) are clamped to the nearest endpoint;
    anything farther out raises OutOfCodebookRange.
    """
    levels = codebook.levels
    lo = levels[0]
    hi = levels[-1]
    tol = 1e-12 * (hi - lo)
    out = (X < lo - tol) | (X > hi + tol)
    if out.any():
        i = int(np.argmax(out))
        raise OutOfCodebookRange(float(X[i]), float(lo), float(hi))
    Xc = np.clip(X, lo, hi)
    ib = np.searchsorted(levels, Xc, side="left")
    ia = np.where(levels[ib] == Xc, ib, ib - 1)
    return ia, ib


def bracket(x: float, codebook: Codebook) -> tuple[float, float]:
    """The pair (a, b) with a = max{q <= x} and b = min{q >= x}; a == b on levels."""
    arr = np.asarray([x], dtype=np.float64)
    ia, ib = _bracket_indices(arr, codebook)
    return float(codebook.levels[ia[0]]), float(codebook.levels[ib[0]])


def encode(X, codebook: Codebook, rng: RandomSource) -> QuantizedVector:
    """Round each entry to a bracketing level, unbiased in expectation."""
    X = np.ascontiguousarray(X, dtype=np.float64).reshape(-1)
    levels = codebook.levels
    ia, ib = _bracket_indices(X, codebook)
    a = levels[ia]
    b = levels[ib]
    width = b - a
    u = rng.uniforms(X.shape[0])
    # P(round down to a) = (b - x) / (b - a); collapsed brackets (a == b,
    # including exact levels) map deterministically.
    with np.errstate(divide="ignore", invalid="ignore"):
        p_down = np.where(width > 0, (b - np.clip(X, a, b)) / np.where(width > 0, width, 1.0), 1.0)
    indices = np.where(u < p_down, ia, ib)
    return QuantizedVector(indices=indices, codebook=codebook)


def decode(qv: QuantizedVector) -> np.ndarray:
    """Map level indices back to level values."""
    return qv.codebook.levels[qv.indices]


def expected_mse(X, codebook: Codebook) -> float:
    """Exact analytic E||X - X_hat||^2 = sum of (b_x - x)(x - a_x)."""
    X = np.ascontiguousarray(X, dtype=np.float64).reshape(-1)
    levels = codebook.levels
    ia, ib = _bracket_indices(X, codebook)
    Xc = np.clip(X, levels[0], levels[-1])
    var = (levels[ib] - Xc) * (Xc - levels[ia])
    return float(np.sum(np.maximum(var, 0.0)))


def vnmse(X, codebook: Codebook) -> float:
    """Vector-normalized MSE: expected_mse / ||X||^2."""
    X = np.ascontiguousarray(X, dtype=np.float64).reshape(-1)
    sq = float(np.dot(X, X))
    if sq == 0.0:
        raise ZeroNorm("vNMSE is undefined for the zero vector")
    return expected_mse(X, codebook) / sq


def empirical_mse(X, codebook: Codebook, trials: int, rng: RandomSource) -> float:
    """Mean of ||X - decode(encode(X))||^2 over independent trials."""
    if trials < 1:
        raise ValueError(f"need trials >= 1, got {trials}")
    X = np.ascontiguousarray(X, dtype=np.float64).reshape(-1)
    total = 0.0
    for t in range(trials):
        err = X - decode(encode(X, codebook, rng.stream(t)))
        total += float(np.dot(err, err))
    return total / trials
