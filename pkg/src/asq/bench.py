"""Synthetic distributions, timed solver sweeps, and CSV emission.

A sweep runs the Cartesian product of (algorithm, distribution, d, s, m,
seed) cells.  Each cell samples a fresh vector, prepares it (sorting is
timed separately from solving), solves ``repetitions`` times, and
records the median and mean solve time plus the exact expected MSE and
vNMSE.  Rows are appended to the CSV incrementally so a crashed sweep
keeps everything finished so far; failed cells become ``status=failed``
rows and the sweep continues.

Cells are independent; setting the environment variable ``ASQ_THREADS``
to more than 1 runs them in a thread pool (CSV writes stay serialized
through one lock).
"""

from __future__ import annotations

import csv
import json
import math
import os
import re
import statistics
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from enum import Enum
from itertools import product
from time import perf_counter
from typing import Callable

import numpy as np

from . import solvers
from .core import SolveReport, WeightedInput, validate_and_sort
from .errors import BadParameters, ZeroNorm

ALGORITHM_NAMES = (
    "baseline",
    "quiver",
    "accq",
    "approx",
    "weighted",
    "cp-uniform",
    "cp-quantile",
)
_NEEDS_BINS = frozenset({"approx", "cp-uniform", "cp-quantile"})


class DistKind(Enum):
    """Supported synthetic i.i.d. entry distributions."""

    LogNormal = "lognormal"
    Normal = "normal"
    Exponential = "exponential"
    TruncNorm = "truncnorm"
    Weibull = "weibull"


_PARAM_COUNT = {
    DistKind.LogNormal: 2,  # (mu, sigma^2) of the underlying normal
    DistKind.Normal: 2,  # (mu, sigma^2)
    DistKind.Exponential: 1,  # (lambda)
    DistKind.TruncNorm: 4,  # (mu, sigma^2, a, b); sigma^2 is the parent's
    DistKind.Weibull: 2,  # (k, lambda)
}

_DEFAULT_PARAMS = {
    DistKind.LogNormal: (0.0, 1.0),
    DistKind.Normal: (0.0, 1.0),
    DistKind.Exponential: (1.0,),
    DistKind.TruncNorm: (0.0, 1.0, -1.0, 1.0),
    DistKind.Weibull: (1.0, 1.0),
}


@dataclass(frozen=True)
class Distribution:
    """A distribution kind plus its parameter tuple (validated)."""

    kind: DistKind
    params: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        p = self.params
        want = _PARAM_COUNT[self.kind]
        if len(p) != want:
            raise BadParameters(f"{self.kind.value} takes {want} parameters, got {len(p)}")
        if not all(math.isfinite(x) for x in p):
            raise BadParameters(f"{self.kind.value} parameters must be finite: {p}")
        if self.kind in (DistKind.LogNormal, DistKind.Normal) and p[1] <= 0:
            raise BadParameters(f"variance must be > 0, got {p[1]}")
        if self.kind is DistKind.Exponential and p[0] <= 0:
            raise BadParameters(f"rate must be > 0, got {p[0]}")
        if self.kind is DistKind.TruncNorm:
            if p[1] <= 0:
                raise BadParameters(f"variance must be > 0, got {p[1]}")
            if not p[2] < p[3]:
                raise BadParameters(f"need a < b, got a={p[2]}, b={p[3]}")
        if self.kind is DistKind.Weibull and (p[0] <= 0 or p[1] <= 0):
            raise BadParameters(f"shape and scale must be > 0, got {p}")

    @property
    def spec(self) -> str:
        """Canonical parseable form, e.g. ``lognormal(0,1)``."""
        args = ",".join(f"{p:g}" for p in self.params)
        return f"{self.kind.value}({args})"


_DIST_RE = re.compile(r"^\s*([a-z]+)\s*(?:\(\s*([^()]*)\s*\))?\s*$")


def parse_distribution(text: str) -> Distribution:
    """Parse ``name`` or ``name(p1,p2,...)``; bare names use defaults."""
    m = _DIST_RE.match(str(text).lower())
    if not m:
        raise BadParameters(f"cannot parse distribution {text!r}")
    name, arglist = m.groups()
    try:
        kind = DistKind(name)
    except ValueError:
        valid = ", ".join(k.value for k in DistKind)
        raise BadParameters(f"unknown distribution {name!r} (one of: {valid})") from None
    if arglist is None or arglist == "":
        return Distribution(kind, _DEFAULT_PARAMS[kind])
    try:
        params = tuple(float(tok) for tok in arglist.split(","))
    except ValueError:
        raise BadParameters(f"bad distribution parameters in {text!r}") from None
    return Distribution(kind, params)


def sample(dist: Distribution, d: int, seed: int) -> np.ndarray:
    """d i.i.d. samples, deterministic per seed."""
    if d < 1:
        raise BadParameters(f"need d >= 1, got {d}")
    rng = np.random.default_rng(seed)
    p = dist.params
    if dist.kind is DistKind.Normal:
        return p[0] + math.sqrt(p[1]) * rng.standard_normal(d)
    if dist.kind is DistKind.LogNormal:
        return np.exp(p[0] + math.sqrt(p[1]) * rng.standard_normal(d))
    if dist.kind is DistKind.Exponential:
        return rng.exponential(scale=1.0 / p[0], size=d)
    if dist.kind is DistKind.TruncNorm:
        from scipy.stats import truncnorm

        mu, sigma = p[0], math.sqrt(p[1])
        lo, hi = (p[2] - mu) / sigma, (p[3] - mu) / sigma
        return truncnorm.rvs(lo, hi, loc=mu, scale=sigma, size=d, random_state=rng)
    if dist.kind is DistKind.Weibull:
        return p[1] * rng.weibull(p[0], size=d)
    raise BadParameters(f"unhandled distribution kind {dist.kind}")  # pragma: no cover


@dataclass(frozen=True)
class SweepConfig:
    """The Cartesian sweep grid plus timing/output settings.

    ``bins`` is consumed only by the approximate and candidate-point
    algorithms; other algorithms run one cell per (d, s, seed).
    ``repetitions`` is how many times each cell's solve is re-run for
    timing (median reported alongside mean); ``seeds`` controls data
    variation and defaults to five seeds.
    """

    algorithms: tuple[str, ...]
    dims: tuple[int, ...]
    levels: tuple[int, ...]
    distributions: tuple[Distribution, ...]
    bins: tuple[int, ...] = (400,)
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    repetitions: int = 3
    output_path: str = "results.csv"

    def __post_init__(self):
        for name in ("algorithms", "dims", "levels", "distributions", "bins", "seeds"):
            val = tuple(getattr(self, name))
            object.__setattr__(self, name, val)
            if len(val) == 0:
                raise BadParameters(f"sweep list {name!r} must be non-empty")
        for a in self.algorithms:
            if a not in ALGORITHM_NAMES:
                raise BadParameters(
                    f"unknown algorithm {a!r} (one of: {', '.join(ALGORITHM_NAMES)})"
                )
        if self.repetitions < 1:
            raise BadParameters(f"need repetitions >= 1, got {self.repetitions}")

    @classmethod
    def from_json(cls, path) -> "SweepConfig":
        """Load a sweep config from a JSON file."""
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
        known = {f.name for f in fields(cls)}
        extra = set(doc) - known
        if extra:
            raise BadParameters(f"unknown sweep config keys: {sorted(extra)}")
        for key in ("algorithms", "dims", "levels", "distributions"):
            if key not in doc:
                raise BadParameters(f"sweep config missing required key {key!r}")
        doc["distributions"] = tuple(parse_distribution(t) for t in doc["distributions"])
        return cls(**doc)


@dataclass(frozen=True)
class ResultRecord:
    """One sweep cell's outcome; field order is the CSV column order."""

    algorithm: str
    distribution: str
    d: int
    s: int
    m: int | None
    seed: int
    vnmse: float
    solve_time: float
    sort_time: float
    expected_mse: float
    solve_time_mean: float
    status: str = "ok"
    error: str = ""


CSV_FIELDS = tuple(f.name for f in fields(ResultRecord))


def _csv_row(rec: ResultRecord) -> dict:
    row = {name: getattr(rec, name) for name in CSV_FIELDS}
    if row["m"] is None:
        row["m"] = ""
    return row


def prepare_solver(
    algo: str, raw: np.ndarray, s: int, m: int | None = None, weights=None
) -> tuple[Callable[[], SolveReport], float]:
    """Bind an algorithm name to input, separating sort time from solve time.

    Returns (solve, sort_time): ``solve()`` runs the pure solver and can
    be called repeatedly for timing.  Exact and weighted solvers sort up
    front (timed); the approximate and candidate solvers take the raw
    vector directly, so their sort_time is 0 (cp-quantile's internal
    sort is part of its own algorithm and is counted as solve time).
    """
    if algo not in ALGORITHM_NAMES:
        raise BadParameters(f"unknown algorithm {algo!r} (one of: {', '.join(ALGORITHM_NAMES)})")
    if algo in _NEEDS_BINS and m is None:
        raise BadParameters(f"algorithm {algo!r} requires m (grid/candidate resolution)")
    if weights is not None and algo != "weighted":
        raise BadParameters(f"weights are only accepted by the weighted algorithm, not {algo!r}")
    sort_time = 0.0
    if algo in ("baseline", "quiver", "accq", "weighted"):
        t0 = perf_counter()
        if algo == "weighted":
            raw = np.ascontiguousarray(raw, dtype=np.float64).reshape(-1)
            if weights is None:
                weights = np.ones_like(raw)
            weights = np.ascontiguousarray(weights, dtype=np.float64).reshape(-1)
            order = np.argsort(raw, kind="stable")
            win = WeightedInput(values=raw[order], weights=weights[order])
        else:
            si = validate_and_sort(raw)
        sort_time = perf_counter() - t0
    if algo == "baseline":
        return (lambda: solvers.baseline_dp(si, s)), sort_time
    if algo == "quiver":
        return (lambda: solvers.quiver(si, s)), sort_time
    if algo == "accq":
        return (lambda: solvers.accelerated_quiver(si, s)), sort_time
    if algo == "weighted":
        return (lambda: solvers.weighted_quiver(win, s)), sort_time
    if algo == "approx":
        return (lambda: solvers.approx_quiver(raw, s, m)), sort_time
    if algo == "cp-uniform":
        return (
            lambda: solvers.solve_on_candidates(raw, solvers.uniform_candidates(raw, m), s)
        ), sort_time
    return (
        lambda: solvers.solve_on_candidates(raw, solvers.quantile_candidates(raw, m), s)
    ), sort_time


def solve_named(
    algo: str, raw: np.ndarray, s: int, m: int | None = None, weights=None
) -> tuple[SolveReport, float]:
    """One-shot named solve; returns (report, sort_time)."""
    run, sort_time = prepare_solver(algo, raw, s, m, weights)
    return run(), sort_time


def _cells(config: SweepConfig):
    for algo, dist, d, s, seed in product(
        config.algorithms, config.distributions, config.dims, config.levels, config.seeds
    ):
        for m in config.bins if algo in _NEEDS_BINS else (None,):
            yield algo, dist, d, s, m, seed


def run_sweep(config: SweepConfig, csv_path=None) -> list[ResultRecord]:
    """Run every sweep cell, appending rows to the CSV as they finish."""
    path = csv_path if csv_path is not None else config.output_path
    lock = threading.Lock()

    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=list(CSV_FIELDS))
        writer.writeheader()
        f.flush()

        def run_cell(cell) -> ResultRecord:
            algo, dist, d, s, m, seed = cell
            try:
                raw = sample(dist, d, seed)
                run, sort_time = prepare_solver(algo, raw, s, m)
                times = []
                report = None
                for _ in range(config.repetitions):
                    t0 = perf_counter()
                    report = run()
                    times.append(perf_counter() - t0)
                sq = float(np.dot(raw, raw))
                if sq == 0.0:
                    raise ZeroNorm("vNMSE is undefined for the zero vector")
                mse = report.codebook.expected_mse
                rec = ResultRecord(
                    algorithm=algo,
                    distribution=dist.spec,
                    d=d,
                    s=s,
                    m=m,
                    seed=seed,
                    vnmse=mse / sq,
                    solve_time=statistics.median(times),
                    sort_time=sort_time,
                    expected_mse=mse,
                    solve_time_mean=statistics.fmean(times),
                )
            except Exception as e:  # per-run failures become rows, sweep continues
                rec = ResultRecord(
                    algorithm=algo,
                    distribution=dist.spec,
                    d=d,
                    s=s,
                    m=m,
                    seed=seed,
                    vnmse=math.nan,
                    solve_time=math.nan,
                    sort_time=math.nan,
                    expected_mse=math.nan,
                    solve_time_mean=math.nan,
                    status="failed",
                    error=f"{type(e).__name__}: {e}",
                )
            with lock:
                writer.writerow(_csv_row(rec))
                f.flush()
            return rec

        cells = list(_cells(config))
        threads = max(1, int(os.environ.get("ASQ_THREADS", "1")))
        if threads == 1:
            records = [run_cell(c) for c in cells]
        else:
            with ThreadPoolExecutor(max_workers=threads) as ex:
                records = list(ex.map(run_cell, cells))
    return records
