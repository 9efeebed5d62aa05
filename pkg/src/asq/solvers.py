"""Codebook construction: exact, accelerated, grid-approximate, weighted,
candidate-restricted, and exhaustive solvers.

All dynamic programs share one structure: order the admissible level
positions ("nodes"), force the first and last node into the codebook,
and fill rows of MSE[i, j] = best cost of covering all mass up to node j
with at most i levels, the topmost being node j.  Each row is the
column-minima problem of a Monge matrix, so SMAWK computes it in O(n);
the quadratic baseline computes the identical recurrence by linear scans
and serves as the correctness oracle.  Ties always break toward the
smallest node index, so outputs are deterministic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from time import perf_counter

import numpy as np

from . import _kernels, quantize
from .core import Algorithm, Codebook, SolveReport, SortedInput, WeightedInput, degenerate_solve
from .costs import Histogram, grid_levels, histogram_preprocess
from .errors import (
    CandidatesMissingExtremes,
    DegenerateRange,
    DimensionTooSmall,
    Empty,
    NonFinite,
    STooSmall,
    TooLargeForExhaustive,
)


@dataclass(frozen=True)
class DPState:
    """The rolling DP rows and the backpointer matrix K.

    Only two MSE rows are ever live (rolling); K keeps one row per DP
    step so the codebook can be reconstructed by walking it backwards.
    """

    mse_prev: np.ndarray
    mse_curr: np.ndarray
    backpointers: np.ndarray


def _validate_raw(raw) -> np.ndarray:
    values = np.ascontiguousarray(raw, dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise Empty("empty input vector")
    bad = ~np.isfinite(values)
    if bad.any():
        i = int(np.argmax(bad))
        raise NonFinite(i, float(values[i]))
    return values


def _exact_nodes(values: np.ndarray):
    """Node arrays for the exact case: 1-based positions as mass."""
    alpha = np.arange(1, values.shape[0] + 1, dtype=np.float64)
    beta = np.cumsum(values)
    gamma = np.cumsum(values * values)
    return alpha, beta, gamma


def _objective_abs_tol(values: np.ndarray) -> float:
    span = float(values.max() - values.min())
    return 1e-13 * values.shape[0] * span * span + 1e-300


def _check_objective(mse: float, objective: float, original: np.ndarray) -> None:
    if not math.isclose(mse, objective, rel_tol=1e-9, abs_tol=_objective_abs_tol(original)):
        raise RuntimeError(
            f"internal objective mismatch: DP reported {objective!r}, recomputed {mse!r}"
        )


def _checked_codebook(original, levels: np.ndarray, objective: float) -> Codebook:
    """Build the codebook with its exact per-entry recomputed MSE.

    The from-scratch recomputation (re-bracketing every original entry)
    must agree with the DP's internal objective to 1e-9 relative; a
    mismatch means an implementation bug.
    """
    probe = Codebook(levels=levels, expected_mse=0.0)
    original = np.ascontiguousarray(original, dtype=np.float64).reshape(-1)
    mse = quantize.expected_mse(original, probe)
    _check_objective(mse, objective, original)
    return Codebook(levels=levels, expected_mse=mse)


def _chain_codebook(
    v: np.ndarray, alpha: np.ndarray, beta: np.ndarray, gamma: np.ndarray,
    pos: list[int], objective: float,
) -> Codebook:
    """Build the codebook, re-deriving the MSE by summing the chain's
    segment costs (O(s), independent of the DP's rolling rows)."""
    mse = 0.0
    for a, b in zip(pos[:-1], pos[1:]):
        mse += float(_kernels._cost_scalar(v, alpha, beta, gamma, a, b))
    _check_objective(mse, objective, v)
    return Codebook(levels=v[pos], expected_mse=mse)


def _walk_plain(K: np.ndarray, n: int) -> tuple[list[int], int]:
    """Backpointer walk for one-level-per-step DPs."""
    pos = {0, n - 1}
    j = n - 1
    reads = 0
    for t in range(K.shape[0] - 1, -1, -1):
        j = int(K[t, j])
        reads += 1
        pos.add(j)
    return sorted(pos), reads


def _walk_accelerated(
    K: np.ndarray, n: int, base_mode: int, v, alpha, beta
) -> tuple[list[int], int]:
    """Backpointer walk interleaving the closed-form midpoints."""
    pos = {0, n - 1}
    j = n - 1
    reads = 0
    for t in range(K.shape[0] - 1, -1, -1):
        k = int(K[t, j])
        reads += 1
        pos.add(int(_kernels._best_mid_scalar(v, alpha, beta, k, j)))
        pos.add(k)
        j = k
    if base_mode == _kernels.COST_TWO_LEVEL:
        pos.add(int(_kernels._best_mid_scalar(v, alpha, beta, 0, j)))
    return sorted(pos), reads


def _run_steps(v, alpha, beta, gamma, base_mode, step_mode, steps):
    """Run the rolling DP, returning (objective, DPState)."""
    obj, prev, row, K = _kernels._dp_run(v, alpha, beta, gamma, base_mode, step_mode, steps)
    return float(obj), DPState(mse_prev=prev, mse_curr=row, backpointers=K)


def _solve_sorted(input: SortedInput, s: int, algo: Algorithm) -> SolveReport:
    t0 = perf_counter()
    if input.d < 2:
        raise DimensionTooSmall(input.d)
    cb = degenerate_solve(input, s)  # also raises STooSmall
    if cb is not None:
        return SolveReport(
            codebook=cb,
            backpointers_used=0,
            wall_time=perf_counter() - t0,
            algorithm=algo,
            smawk_calls=0,
            objective=0.0,
        )
    v = input.values
    n = input.d
    alpha, beta, gamma = _exact_nodes(v)

    if algo is Algorithm.BaselineDP:
        steps = s - 2
        obj, _, _, K = _kernels._dp_baseline(v, alpha, beta, gamma, steps)
        obj = float(obj)
        pos, reads = _walk_plain(K, n)
        calls = 0
    elif algo is Algorithm.Quiver:
        steps = s - 2
        if steps == 0:
            obj = float(_kernels._cost_scalar(v, alpha, beta, gamma, 0, n - 1))
            pos, reads = [0, n - 1], 0
        else:
            obj, state = _run_steps(v, alpha, beta, gamma, _kernels.COST_PLAIN, _kernels.COST_PLAIN, steps)
            pos, reads = _walk_plain(state.backpointers, n)
        calls = steps
    elif algo is Algorithm.AcceleratedQuiver:
        base_mode = _kernels.COST_TWO_LEVEL if s % 2 else _kernels.COST_PLAIN
        steps = s // 2 - 1
        if steps == 0:
            if base_mode == _kernels.COST_PLAIN:
                obj = float(_kernels._cost_scalar(v, alpha, beta, gamma, 0, n - 1))
                pos = [0, n - 1]
            else:
                obj = float(_kernels._cost2_scalar(v, alpha, beta, gamma, 0, n - 1))
                mid = int(_kernels._best_mid_scalar(v, alpha, beta, 0, n - 1))
                pos = sorted({0, mid, n - 1})
            reads = 0
        else:
            obj, state = _run_steps(v, alpha, beta, gamma, base_mode, _kernels.COST_TWO_LEVEL, steps)
            pos, reads = _walk_accelerated(state.backpointers, n, base_mode, v, alpha, beta)
        calls = steps
    else:  # pragma: no cover - internal misuse
        raise ValueError(f"not an exact solver: {algo}")

    codebook = _chain_codebook(v, alpha, beta, gamma, pos, obj)
    return SolveReport(
        codebook=codebook,
        backpointers_used=reads,
        wall_time=perf_counter() - t0,
        algorithm=algo,
        smawk_calls=calls,
        objective=obj,
    )


def baseline_dp(input: SortedInput, s: int) -> SolveReport:
    """Optimal codebook by the O(s*d^2) reference dynamic program."""
    return _solve_sorted(input, s, Algorithm.BaselineDP)


def quiver(input: SortedInput, s: int) -> SolveReport:
    """Optimal codebook in O(s*d) via SMAWK column minima (s-2 calls)."""
    return _solve_sorted(input, s, Algorithm.Quiver)


def accelerated_quiver(input: SortedInput, s: int) -> SolveReport:
    """Optimal codebook placing two levels per DP step (floor(s/2)-1 calls).

    Each step minimizes MSE[i-2, k] + C2[k, j], where C2 places one
    interior level at the closed-form midpoint b*; reconstruction
    recovers the skipped midpoints, including the first segment's when s
    is odd.
    """
    return _solve_sorted(input, s, Algorithm.AcceleratedQuiver)


def _solve_nodes(
    node_values: np.ndarray,
    alpha: np.ndarray,
    beta: np.ndarray,
    gamma: np.ndarray,
    s: int,
    algo: Algorithm,
    original: np.ndarray,
    t0: float,
) -> SolveReport:
    """Plain one-level-per-step DP over an explicit node set."""
    n = node_values.shape[0]
    s_eff = min(s, n)
    steps = s_eff - 2
    if steps == 0:
        obj = float(_kernels._cost_scalar(node_values, alpha, beta, gamma, 0, n - 1))
        pos, reads = [0, n - 1], 0
    else:
        obj, state = _run_steps(
            node_values, alpha, beta, gamma, _kernels.COST_PLAIN, _kernels.COST_PLAIN, steps
        )
        pos, reads = _walk_plain(state.backpointers, n)
    codebook = _checked_codebook(original, node_values[pos], obj)
    return SolveReport(
        codebook=codebook,
        backpointers_used=reads,
        wall_time=perf_counter() - t0,
        algorithm=algo,
        smawk_calls=steps,
        objective=obj,
    )


def _compact_nodes(counts: np.ndarray, last: int) -> np.ndarray:
    """Node indices worth keeping: both ends of every massy bin, plus 0 and last.

    Between two consecutive retained nodes there is no mass, and the cost
    of a level sliding across a massless span is linear in its position,
    so some optimal solution uses retained nodes only.
    """
    nz = np.flatnonzero(counts > 0)
    return np.unique(np.concatenate([[0, last], nz, np.maximum(nz - 1, 0)]))


def approx_quiver(raw, s: int, m: int, compact: bool = True) -> SolveReport:
    """Near-optimal codebook over a uniform grid of m+1 levels, O(d + s*m).

    The input need not be sorted.  The result is the optimal codebook
    among subsets of the grid that include both grid endpoints, and its
    objective is the exact expected MSE of the original vector.  An
    all-equal input yields its single value with zero error.
    """
    t0 = perf_counter()
    if s < 2:
        raise STooSmall(s)
    values = _validate_raw(raw)
    try:
        H = histogram_preprocess(values, m, compact=compact)
    except DegenerateRange:
        cb = Codebook(levels=values[:1], expected_mse=0.0)
        return SolveReport(
            codebook=cb,
            backpointers_used=0,
            wall_time=perf_counter() - t0,
            algorithm=Algorithm.ApproxQuiver,
            smawk_calls=0,
            objective=0.0,
        )
    occ = H.occupied
    nodes = H.levels()[occ]
    return _solve_nodes(
        nodes,
        H.alpha[occ],
        H.beta[occ],
        H.gamma[occ],
        s,
        Algorithm.ApproxQuiver,
        values,
        t0,
    )


def weighted_quiver(input: WeightedInput, s: int) -> SolveReport:
    """Optimal codebook for the weighted objective sum w_i (x_i - xhat_i)^2.

    Identical DP structure to quiver with the weighted interval cost;
    unit weights reproduce quiver bit for bit.
    """
    t0 = perf_counter()
    if s < 2:
        raise STooSmall(s)
    if input.d < 2:
        raise DimensionTooSmall(input.d)
    v = input.values
    w = input.weights
    n = input.d
    distinct = np.unique(v)
    if distinct.shape[0] <= s:
        return SolveReport(
            codebook=Codebook(levels=distinct, expected_mse=0.0),
            backpointers_used=0,
            wall_time=perf_counter() - t0,
            algorithm=Algorithm.WeightedQuiver,
            smawk_calls=0,
            objective=0.0,
        )
    alpha = np.cumsum(w)
    beta = np.cumsum(w * v)
    gamma = np.cumsum(w * v * v)
    steps = s - 2
    if steps == 0:
        obj = float(_kernels._cost_scalar(v, alpha, beta, gamma, 0, n - 1))
        pos, reads = [0, n - 1], 0
    else:
        obj, state = _run_steps(v, alpha, beta, gamma, _kernels.COST_PLAIN, _kernels.COST_PLAIN, steps)
        pos, reads = _walk_plain(state.backpointers, n)
    codebook = _chain_codebook(v, alpha, beta, gamma, pos, obj)
    return SolveReport(
        codebook=codebook,
        backpointers_used=reads,
        wall_time=perf_counter() - t0,
        algorithm=Algorithm.WeightedQuiver,
        smawk_calls=steps,
        objective=obj,
    )


def uniform_candidates(raw, m: int) -> np.ndarray:
    """The m+1 uniformly spaced candidate levels over [min, max]."""
    values = _validate_raw(raw)
    return grid_levels(float(values.min()), float(values.max()), m)


def quantile_candidates(raw, m: int) -> np.ndarray:
    """The m+1 empirical-quantile candidate levels x_{floor(1 + l(d-1)/m)}."""
    values = np.sort(_validate_raw(raw))
    d = values.shape[0]
    idx = (np.arange(m + 1, dtype=np.int64) * (d - 1)) // m
    return values[idx]


def solve_on_candidates(raw, candidates, s: int) -> SolveReport:
    """Optimal codebook restricted to an arbitrary sorted candidate set.

    Candidates must include the input's min and max.  Mass is binned onto
    half-open candidate intervals, so the DP objective is the exact
    expected MSE of the original vector; candidates outside [min, max]
    are dropped (they can never improve the objective).
    """
    t0 = perf_counter()
    if s < 2:
        raise STooSmall(s)
    values = _validate_raw(raw)
    cand = np.unique(np.ascontiguousarray(candidates, dtype=np.float64).reshape(-1))
    if cand.size == 0 or not np.isfinite(cand).all():
        raise CandidatesMissingExtremes("candidate set must be finite and non-empty")
    rmin = float(values.min())
    rmax = float(values.max())
    if rmin not in cand or rmax not in cand:
        raise CandidatesMissingExtremes(
            f"candidates must include the input extremes {rmin!r} and {rmax!r}"
        )
    if rmin == rmax:
        cb = Codebook(levels=np.array([rmin]), expected_mse=0.0)
        return SolveReport(
            codebook=cb,
            backpointers_used=0,
            wall_time=perf_counter() - t0,
            algorithm=Algorithm.CandidatePoints,
            smawk_calls=0,
            objective=0.0,
        )
    cand = cand[(cand >= rmin) & (cand <= rmax)]
    nbins = cand.shape[0]
    idx = np.searchsorted(cand, values, side="left")
    counts = np.bincount(idx, minlength=nbins).astype(np.float64)
    sums = np.bincount(idx, weights=values, minlength=nbins)
    sqs = np.bincount(idx, weights=values * values, minlength=nbins)
    keep = _compact_nodes(counts, nbins - 1)
    return _solve_nodes(
        cand[keep],
        np.cumsum(counts)[keep],
        np.cumsum(sums)[keep],
        np.cumsum(sqs)[keep],
        s,
        Algorithm.CandidatePoints,
        values,
        t0,
    )


def exhaustive_opt(input: SortedInput, s: int) -> SolveReport:
    """Global optimum by enumerating every level subset; tiny inputs only.

    The ultimate ground truth for property tests: all subsets of input
    positions containing x_1 and x_d, sizes 2..s, in lexicographic order
    (so ties resolve to the first-found, smallest chain).  Segment costs
    are summed entry by entry — products of nonnegative differences with
    no cancellation — so a chain covering every distinct value scores
    exactly 0.0.
    """
    t0 = perf_counter()
    if s < 2:
        raise STooSmall(s)
    if input.d < 2:
        raise DimensionTooSmall(input.d)
    if input.d > 16 or s > 6:
        raise TooLargeForExhaustive(input.d, s)
    v = input.values
    n = input.d
    vals = v.tolist()
    best = math.inf
    best_chain: tuple[int, ...] = (0, n - 1)
    for size in range(0, s - 1):
        for combo in itertools.combinations(range(1, n - 1), size):
            chain = (0,) + combo + (n - 1,)
            total = 0.0
            ok = True
            for a, b in zip(chain[:-1], chain[1:]):
                va = vals[a]
                vb = vals[b]
                for i in range(a + 1, b):
                    x = vals[i]
                    total += (vb - x) * (x - va)
                if total >= best:
                    ok = False
                    break
            if ok and total < best:
                best = total
                best_chain = chain
    if not math.isfinite(best):
        best = 0.0
    codebook = _checked_codebook(v, v[list(best_chain)], best)
    return SolveReport(
        codebook=codebook,
        backpointers_used=0,
        wall_time=perf_counter() - t0,
        algorithm=Algorithm.Exhaustive,
        smawk_calls=0,
        objective=best,
    )
