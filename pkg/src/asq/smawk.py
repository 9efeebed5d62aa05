"""Row/column minima of implicitly defined totally monotone matrices.

The SMAWK algorithm finds all row minima in O(n_rows + n_cols) entry
evaluations.  The matrix is never materialized: callers supply an
``eval(row, col)`` function returning a finite float or +inf, and the
matrix must be totally monotone — for rows a < b and columns c < d,
``eval(a, c) > eval(b, c)`` implies ``eval(a, d) > eval(b, d)``.  Monge
(quadrangle-inequality) matrices qualify.

Ties break toward the smallest index everywhere, so results are
deterministic and argmins are non-decreasing across rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class ImplicitMatrix:
    """A matrix given by shape plus a deterministic O(1) entry function."""

    n_rows: int
    n_cols: int
    eval: Callable[[int, int], float]

    def __post_init__(self):
        if self.n_rows < 1 or self.n_cols < 1:
            raise ValueError("matrix must have at least one row and one column")

    def transpose(self) -> "ImplicitMatrix":
        f = self.eval
        return ImplicitMatrix(self.n_cols, self.n_rows, lambda r, c: f(c, r))


@dataclass(frozen=True)
class MinimaResult:
    """Per-row argmin column indices and the minima themselves."""

    argmin: np.ndarray
    min_value: np.ndarray


def _reduce(eval, rows: list, cols: list) -> list:
    """Prune columns down to at most len(rows) survivors.

    Keeps, for every row, a column achieving its leftmost minimum: a
    column is discarded only when strictly beaten at its probe row (ties
    keep the earlier column), which total monotonicity extends to all
    later rows.
    """
    stack: list = []
    n = len(rows)
    for c in cols:
        while stack:
            r = rows[len(stack) - 1]
            if eval(r, stack[-1]) > eval(r, c):
                stack.pop()
            else:
                break
        if len(stack) < n:
            stack.append(c)
    return stack


def _solve(eval, rows: list, cols: list, argmin: np.ndarray, minval: np.ndarray) -> None:
    cols = _reduce(eval, rows, cols)
    if len(rows) == 1:
        # _reduce left exactly the leftmost argmin of the single row.
        r = rows[0]
        argmin[r] = cols[0]
        minval[r] = eval(r, cols[0])
        return
    _solve(eval, rows[1::2], cols, argmin, minval)
    # Fill even-position rows; row 2i's argmin is bracketed by the solved
    # argmins of rows 2i-1 and 2i+1.
    ci = 0
    for ri in range(0, len(rows), 2):
        r = rows[ri]
        hi = argmin[rows[ri + 1]] if ri + 1 < len(rows) else cols[-1]
        best = cols[ci]
        bv = eval(r, best)
        while cols[ci] != hi:
            ci += 1
            v = eval(r, cols[ci])
            if v < bv:
                bv = v
                best = cols[ci]
        argmin[r] = best
        minval[r] = bv


def row_minima(M: ImplicitMatrix) -> MinimaResult:
    """Exact leftmost row minima in O(n_rows + n_cols) evaluations."""
    argmin = np.zeros(M.n_rows, dtype=np.int64)
    minval = np.zeros(M.n_rows, dtype=np.float64)
    _solve(M.eval, list(range(M.n_rows)), list(range(M.n_cols)), argmin, minval)
    return MinimaResult(argmin=argmin, min_value=minval)


def column_minima(M: ImplicitMatrix) -> MinimaResult:
    """Leftmost column minima: row_minima applied to the transposed view."""
    return row_minima(M.transpose())
