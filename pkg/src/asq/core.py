"""Shared data types: validated inputs, codebooks, and solve reports.

Vectors are kept as immutable float64 arrays.  Solvers operate on
:class:`SortedInput` (ascending values); the quantizer consumes a
:class:`Codebook` (strictly increasing levels plus the exact expected MSE
of the vector it was built for).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import Empty, NonFinite, NonPositiveWeight, STooSmall


class Algorithm(Enum):
    """Which solver produced a codebook."""

    BaselineDP = "baseline"
    Quiver = "quiver"
    AcceleratedQuiver = "accq"
    ApproxQuiver = "approx"
    WeightedQuiver = "weighted"
    CandidatePoints = "candidates"
    Exhaustive = "exhaustive"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.flags.writeable = False
    return a


def _check_finite(values: np.ndarray) -> None:
    bad = ~np.isfinite(values)
    if bad.any():
        i = int(np.argmax(bad))
        raise NonFinite(i, float(values[i]))


@dataclass(frozen=True)
class SortedInput:
    """A non-decreasing finite vector, the solvers' working representation.

    ``was_sorted`` records whether the raw input was already ascending, so
    benchmarks can report sort time separately from solve time.
    """

    values: np.ndarray
    was_sorted: bool = True

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))
        if self.values.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if self.d == 0:
            raise Empty("empty input vector")
        _check_finite(self.values)
        if np.any(np.diff(self.values) < 0):
            raise ValueError("values must be non-decreasing; use validate_and_sort")

    @property
    def d(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class WeightedInput:
    """Sorted values paired with strictly positive weights."""

    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))
        object.__setattr__(self, "weights", _frozen(self.weights))
        if self.values.shape != self.weights.shape or self.values.ndim != 1:
            raise ValueError("values and weights must be 1-D arrays of equal length")
        if self.d == 0:
            raise Empty("empty weighted input")
        _check_finite(self.values)
        if np.any(np.diff(self.values) < 0):
            raise ValueError("values must be non-decreasing")
        bad = ~(np.isfinite(self.weights) & (self.weights > 0))
        if bad.any():
            i = int(np.argmax(bad))
            raise NonPositiveWeight(i, float(self.weights[i]))

    @property
    def d(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class Codebook:
    """An ordered set of quantization levels and its exact expected MSE.

    Levels are strictly increasing after duplicate collapse; a codebook may
    hold a single level only in the degenerate all-equal-input case.
    """

    levels: np.ndarray
    expected_mse: float

    def __post_init__(self):
        levels = np.unique(np.asarray(self.levels, dtype=np.float64))
        object.__setattr__(self, "levels", _frozen(levels))
        object.__setattr__(self, "expected_mse", float(self.expected_mse))
        if self.levels.size == 0:
            raise Empty("codebook needs at least one level")
        _check_finite(self.levels)
        if not self.expected_mse >= 0.0:
            raise ValueError(f"expected_mse must be >= 0, got {self.expected_mse}")

    @property
    def n_levels(self) -> int:
        return self.levels.shape[0]


@dataclass(frozen=True)
class QuantizedVector:
    """Per-entry level indices plus the codebook they index into."""

    indices: np.ndarray
    codebook: Codebook

    def __post_init__(self):
        idx = np.ascontiguousarray(self.indices, dtype=np.int64)
        idx.flags.writeable = False
        object.__setattr__(self, "indices", idx)
        if idx.size and (idx.min() < 0 or idx.max() >= self.codebook.n_levels):
            raise ValueError("indices out of codebook range")

    @property
    def d(self) -> int:
        return self.indices.shape[0]


@dataclass(frozen=True)
class SolveReport:
    """What a solver produced and how much work it did.

    ``backpointers_used`` counts backpointer-table reads during codebook
    reconstruction; ``smawk_calls`` counts column-minima invocations;
    ``objective`` is the DP's internal objective, which must agree with
    ``codebook.expected_mse`` (recomputed from scratch) to 1e-9 relative.
    """

    codebook: Codebook
    backpointers_used: int
    wall_time: float
    algorithm: Algorithm
    smawk_calls: int = 0
    objective: float = field(default=float("nan"))


def validate_and_sort(raw) -> SortedInput:
    """Validate a raw vector and return it sorted ascending.

    Raises :class:`Empty` on zero-length input and :class:`NonFinite` with
    the offending index on NaN/infinity.  Whether the input was already
    sorted is recorded on the result.
    """
    values = np.ascontiguousarray(raw, dtype=np.float64)
    if values.ndim != 1:
        values = values.reshape(-1)
    if values.size == 0:
        raise Empty("empty input vector")
    _check_finite(values)
    was_sorted = not np.any(np.diff(values) < 0)
    if not was_sorted:
        values = np.sort(values, kind="stable")
    return SortedInput(values=values, was_sorted=was_sorted)


def degenerate_solve(input: SortedInput, s: int) -> Codebook | None:
    """Shortcut for inputs with at most ``s`` distinct values.

    Returns the distinct values as a zero-error codebook, or ``None`` when
    the input is not degenerate and a real solver must run.
    """
    if s < 2:
        raise STooSmall(s)
    values = input.values
    first = np.empty(values.shape[0], dtype=bool)  # values sorted: O(d) distinct scan
    first[0] = True
    np.greater(values[1:], values[:-1], out=first[1:])
    if int(np.count_nonzero(first)) <= s:
        return Codebook(levels=values[first], expected_mse=0.0)
    return None
