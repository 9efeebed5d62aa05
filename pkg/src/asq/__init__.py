"""Adaptive stochastic quantization: optimal level sets for unbiased rounding.

Given a vector X and a budget of s levels, the solvers here compute the
set Q (|Q| <= s, containing min(X) and max(X)) minimizing the expected
squared error of unbiased stochastic rounding onto Q:

- :func:`quiver` — exact optimum in O(s*d) time via SMAWK column minima.
- :func:`accelerated_quiver` — same optimum, two levels per DP step.
- :func:`approx_quiver` — near-optimal over a uniform grid, O(d + s*m),
  no sorting required.
- :func:`weighted_quiver` — exact optimum for per-entry weights.
- :func:`solve_on_candidates` — exact optimum restricted to an arbitrary
  candidate level set.
- :func:`baseline_dp` / :func:`exhaustive_opt` — quadratic and brute-force
  reference oracles.

:func:`encode` then rounds a vector onto a codebook unbiasedly, and
:mod:`asq.bench` / the ``asq`` CLI drive end-to-end experiments.
"""

from .bench import (
    Distribution,
    ResultRecord,
    SweepConfig,
    parse_distribution,
    run_sweep,
    sample,
    solve_named,
)
from .core import (
    Algorithm,
    Codebook,
    QuantizedVector,
    SolveReport,
    SortedInput,
    WeightedInput,
    degenerate_solve,
    validate_and_sort,
)
from .costs import (
    Histogram,
    PrefixSums,
    WeightedPrefix,
    best_mid,
    cost,
    cost2,
    grid_cost,
    grid_levels,
    histogram_preprocess,
    preprocess,
    weighted_cost,
    weighted_preprocess,
)
from .errors import (
    AsqError,
    BadParameters,
    CandidatesMissingExtremes,
    DegenerateRange,
    DimensionTooSmall,
    Empty,
    IndexOutOfRange,
    NonFinite,
    NonPositiveWeight,
    OutOfCodebookRange,
    STooSmall,
    TooLargeForExhaustive,
    ZeroNorm,
)
from .quantize import (
    RandomSource,
    bracket,
    decode,
    empirical_mse,
    encode,
    expected_mse,
    vnmse,
)
from .smawk import ImplicitMatrix, MinimaResult, column_minima, row_minima
from .solvers import (
    DPState,
    accelerated_quiver,
    approx_quiver,
    baseline_dp,
    exhaustive_opt,
    quantile_candidates,
    quiver,
    solve_on_candidates,
    uniform_candidates,
    weighted_quiver,
)

__version__ = "0.1.0"

__all__ = [
    "Algorithm",
    "AsqError",
    "BadParameters",
    "CandidatesMissingExtremes",
    "Codebook",
    "DegenerateRange",
    "DimensionTooSmall",
    "Distribution",
    "DPState",
    "Empty",
    "Histogram",
    "ImplicitMatrix",
    "IndexOutOfRange",
    "MinimaResult",
    "NonFinite",
    "NonPositiveWeight",
    "OutOfCodebookRange",
    "PrefixSums",
    "QuantizedVector",
    "RandomSource",
    "ResultRecord",
    "STooSmall",
    "SolveReport",
    "SortedInput",
    "SweepConfig",
    "TooLargeForExhaustive",
    "WeightedInput",
    "WeightedPrefix",
    "ZeroNorm",
    "accelerated_quiver",
    "approx_quiver",
    "baseline_dp",
    "best_mid",
    "bracket",
    "column_minima",
    "cost",
    "cost2",
    "decode",
    "degenerate_solve",
    "empirical_mse",
    "encode",
    "exhaustive_opt",
    "expected_mse",
    "grid_cost",
    "grid_levels",
    "histogram_preprocess",
    "parse_distribution",
    "preprocess",
    "quantile_candidates",
    "quiver",
    "row_minima",
    "run_sweep",
    "sample",
    "solve_named",
    "solve_on_candidates",
    "uniform_candidates",
    "validate_and_sort",
    "vnmse",
    "weighted_cost",
    "weighted_preprocess",
    "weighted_quiver",
]
