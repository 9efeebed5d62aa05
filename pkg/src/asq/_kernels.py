"""Compiled numerical kernels shared by every solver.

All dynamic programs run over a common "node" representation: strictly
ordered level positions ``v`` with inclusive cumulative mass ``alpha``,
mass-weighted sum ``beta``, and mass-weighted sum of squares ``gamma``.
The interval variance cost between nodes ``k < j`` is

    cost(k, j) = -v[j]*v[k]*(alpha[j]-alpha[k])
                 + (v[j]+v[k])*(beta[j]-beta[k]) - (gamma[j]-gamma[k])

which equals the summed variance of all mass in the half-open interval
(v[k], v[j]] when every entry is stochastically rounded to {v[k], v[j]}.
The same formula covers the exact case (alpha = 1-based positions), the
weighted case (alpha = cumulative weights), and grid/candidate cases
(alpha = cumulative bin counts).

The DP step "for every j, minimize over k of mse_prev[k] + cost(k, j)" is
an implicit totally monotone (Monge) matrix problem, solved by SMAWK in
O(n) evaluations per step.  The triangular invalid region k > j is padded
with steeply growing finite values, which provably preserves the Monge
property as long as the padding slope exceeds twice the largest valid
cost.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

# Mode flags for the DP step cost.
COST_PLAIN = 0  # one new level per step
COST_TWO_LEVEL = 1  # two new levels per step, midpoint in closed form


@njit(cache=True, inline="always")
def _cost(v, alpha, beta, gamma, k, j):
    c = (
        -(v[j] * v[k]) * (alpha[j] - alpha[k])
        + (v[j] + v[k]) * (beta[j] - beta[k])
        - (gamma[j] - gamma[k])
    )
    # Exact value is a sum of nonnegative variances; clamp float cancellation.
    return c if c > 0.0 else 0.0


@njit(cache=True, inline="always")
def _best_mid(v, alpha, beta, k, j):
    """Leftmost-of-closed-form argmin of cost(k, b) + cost(b, j) over b in [k, j].

    Requires alpha to hold 1-based positions (the exact, unweighted case).
    The difference g(b+1) - g(b) equals (v[b+1]-v[b]) * h(b) with h
    non-decreasing, so the cost is minimized at the smallest b with
    h(b) >= 0, i.e. the ceiling of the crossing point.
    """
    vk = v[k]
    vj = v[j]
    if vj == vk:
        return k
    r = (alpha[j] * vj - alpha[k] * vk - (beta[j] - beta[k])) / (vj - vk)
    b = int(math.ceil(r)) - 1  # 1-based position -> 0-based index
    if b < k:
        b = k
    if b > j:
        b = j
    return b


@njit(cache=True, inline="always")
def _cost2(v, alpha, beta, gamma, k, j):
    b = _best_mid(v, alpha, beta, k, j)
    return _cost(v, alpha, beta, gamma, k, b) + _cost(v, alpha, beta, gamma, b, j)


@njit(cache=True, inline="always")
def _entry(v, alpha, beta, gamma, mse_prev, pad, mode, j, k):
    """DP matrix entry A^T[j, k] = MSE_prev[k] + step cost from node k to j.

    Entries in the invalid triangle k > j grow linearly with k - j, which
    keeps the full rectangle Monge while never beating a valid entry.
    """
    if k > j:
        return mse_prev[k] + pad * (k - j)
    if mode == COST_PLAIN:
        return mse_prev[k] + _cost(v, alpha, beta, gamma, k, j)
    return mse_prev[k] + _cost2(v, alpha, beta, gamma, k, j)


@njit(cache=True, inline="always")
def _entry_row(vr, ar, br, gr, v, alpha, beta, gamma, mse_prev, pad, mode, r, k):
    """_entry with the row-side array loads already hoisted into scalars.

    The arithmetic mirrors _cost term for term so cached and recomputed
    entries are bit-identical.
    """
    if k > r:
        return mse_prev[k] + pad * (k - r)
    if mode == COST_PLAIN:
        c = -(vr * v[k]) * (ar - alpha[k]) + (vr + v[k]) * (br - beta[k]) - (gr - gamma[k])
        return mse_prev[k] + (c if c > 0.0 else 0.0)
    return mse_prev[k] + _cost2(v, alpha, beta, gamma, k, r)


@njit(cache=True, nogil=True)
def _smawk_colmin(v, alpha, beta, gamma, mse_prev, pad, mode, argmin, minval, colbuf, valbuf):
    """Leftmost column minima of the DP matrix: for each j, best k.

    Iterative SMAWK over the transposed matrix (rows are j, columns are
    k).  Row sets halve along a chain (no branching), so recursion
    unrolls into one descend/ascend pass.  ``colbuf`` and ``valbuf``
    must have room for 2 * n + 8 entries.

    A column pushed at stack position p is only ever compared again at
    that position's own row, so its entry value is computed once on push
    and cached in ``valbuf``; each pop test then costs one fresh entry
    evaluation instead of two.
    """
    n = v.shape[0]
    max_levels = 66
    loff = np.empty(max_levels, np.int64)
    llen = np.empty(max_levels, np.int64)
    lstart = np.empty(max_levels, np.int64)
    lstep = np.empty(max_levels, np.int64)
    lcnt = np.empty(max_levels, np.int64)

    # Descend.  Level-0 rows are all of 0..n-1 and columns are implicit.
    t = 0
    start = 0
    step = 1
    cnt = n
    off = 0
    sz = 0
    for c in range(n):
        while sz > 0:
            r = start + (sz - 1) * step
            cval = _entry_row(
                v[r], alpha[r], beta[r], gamma[r],
                v, alpha, beta, gamma, mse_prev, pad, mode, r, c,
            )
            if valbuf[off + sz - 1] > cval:
                sz -= 1
            else:
                break
        if sz < cnt:
            rp = start + sz * step
            colbuf[off + sz] = c
            valbuf[off + sz] = _entry(v, alpha, beta, gamma, mse_prev, pad, mode, rp, c)
            sz += 1
    loff[0] = off
    llen[0] = sz
    lstart[0] = start
    lstep[0] = step
    lcnt[0] = cnt

    while cnt > 1:
        poff = off
        psz = sz
        start = start + step
        step = step * 2
        cnt = cnt // 2
        off = poff + psz
        t += 1
        sz = 0
        for ci in range(psz):
            c = colbuf[poff + ci]
            while sz > 0:
                r = start + (sz - 1) * step
                cval = _entry_row(
                    v[r], alpha[r], beta[r], gamma[r],
                    v, alpha, beta, gamma, mse_prev, pad, mode, r, c,
                )
                if valbuf[off + sz - 1] > cval:
                    sz -= 1
                else:
                    break
            if sz < cnt:
                rp = start + sz * step
                colbuf[off + sz] = c
                valbuf[off + sz] = _entry(v, alpha, beta, gamma, mse_prev, pad, mode, rp, c)
                sz += 1
        loff[t] = off
        llen[t] = sz
        lstart[t] = start
        lstep[t] = step
        lcnt[t] = cnt

    # Base: a single row; REDUCE left exactly its leftmost argmin, and the
    # cached push value is exactly that entry.
    argmin[start] = colbuf[off]
    minval[start] = valbuf[off]

    # Ascend: fill the even-position rows of each level.
    for lev in range(t - 1, -1, -1):
        start = lstart[lev]
        step = lstep[lev]
        cnt = lcnt[lev]
        off = loff[lev]
        sz = llen[lev]
        ci = 0
        for ri in range(0, cnt, 2):
            r = start + ri * step
            vr = v[r]
            ar = alpha[r]
            br = beta[r]
            gr = gamma[r]
            if ri + 1 < cnt:
                hi = argmin[start + (ri + 1) * step]
            else:
                hi = colbuf[off + sz - 1]
            c = colbuf[off + ci]
            bv = _entry_row(vr, ar, br, gr, v, alpha, beta, gamma, mse_prev, pad, mode, r, c)
            bc = c
            while colbuf[off + ci] != hi:
                ci += 1
                c = colbuf[off + ci]
                val = _entry_row(vr, ar, br, gr, v, alpha, beta, gamma, mse_prev, pad, mode, r, c)
                if val < bv:
                    bv = val
                    bc = c
            argmin[r] = bc
            minval[r] = bv


@njit(cache=True, nogil=True)
def _dp_run(v, alpha, beta, gamma, base_mode, step_mode, steps):
    """Rolling-row DP: base row plus ``steps`` SMAWK column-minima passes.

    Returns the final objective MSE[..., n-1], the last two MSE rows,
    and the backpointer matrix K with one row per SMAWK pass.
    """
    n = v.shape[0]
    row = np.empty(n, np.float64)
    prev = np.empty(n, np.float64)
    if base_mode == COST_PLAIN:
        for j in range(n):
            row[j] = _cost(v, alpha, beta, gamma, 0, j)
    else:
        for j in range(n):
            row[j] = _cost2(v, alpha, beta, gamma, 0, j)
    for j in range(n):
        prev[j] = row[j]
    K = np.empty((steps, n), np.int32)
    if steps > 0:
        pad = 4.0 * _cost(v, alpha, beta, gamma, 0, n - 1) + 4.0
        colbuf = np.empty(2 * n + 8, np.int32)
        valbuf = np.empty(2 * n + 8, np.float64)
        argmin = np.empty(n, np.int32)
        minval = np.empty(n, np.float64)
        for tstep in range(steps):
            _smawk_colmin(v, alpha, beta, gamma, row, pad, step_mode, argmin, minval, colbuf, valbuf)
            for j in range(n):
                prev[j] = row[j]
                row[j] = minval[j]
                K[tstep, j] = argmin[j]
    return row[n - 1], prev, row, K


@njit(cache=True, nogil=True)
def _dp_baseline(v, alpha, beta, gamma, steps):
    """Quadratic reference DP: per row, a full leftmost-tie linear scan."""
    n = v.shape[0]
    row = np.empty(n, np.float64)
    prev = np.empty(n, np.float64)
    for j in range(n):
        row[j] = _cost(v, alpha, beta, gamma, 0, j)
        prev[j] = row[j]
    K = np.empty((steps, n), np.int32)
    nxt = np.empty(n, np.float64)
    for t in range(steps):
        for j in range(n):
            bb = row[0] + _cost(v, alpha, beta, gamma, 0, j)
            bk = 0
            for k in range(1, j + 1):
                val = row[k] + _cost(v, alpha, beta, gamma, k, j)
                if val < bb:
                    bb = val
                    bk = k
            nxt[j] = bb
            K[t, j] = bk
        for j in range(n):
            prev[j] = row[j]
            row[j] = nxt[j]
    return row[n - 1], prev, row, K


@njit(cache=True, nogil=True)
def _cost_scalar(v, alpha, beta, gamma, k, j):
    return _cost(v, alpha, beta, gamma, k, j)


@njit(cache=True, nogil=True)
def _cost2_scalar(v, alpha, beta, gamma, k, j):
    return _cost2(v, alpha, beta, gamma, k, j)


@njit(cache=True, nogil=True)
def _best_mid_scalar(v, alpha, beta, k, j):
    return _best_mid(v, alpha, beta, k, j)


@njit(cache=True, nogil=True)
def _bin_masses(raw, x1, delta, m):
    """One pass: per-bin count, sum, and sum of squares over a uniform grid.

    Entry x goes to bin ceil((x - x1) / delta) clamped to [0, m]; x == x1
    lands in bin 0, entries exactly on a grid point land in the bin that
    ends there.
    """
    counts = np.zeros(m + 1, np.float64)
    sums = np.zeros(m + 1, np.float64)
    sqs = np.zeros(m + 1, np.float64)
    for i in range(raw.shape[0]):
        x = raw[i]
        b = int(math.ceil((x - x1) / delta))
        if b < 0:
            b = 0
        if b > m:
            b = m
        counts[b] += 1.0
        sums[b] += x
        sqs[b] += x * x
    return counts, sums, sqs


def warm_up() -> None:
    """Trigger (or load from cache) compilation of every kernel."""
    v = np.array([0.0, 1.0, 2.0, 3.0], dtype=np.float64)
    alpha = np.array([1.0, 2.0, 3.0, 4.0], dtype=np.float64)
    beta = np.cumsum(v)
    gamma = np.cumsum(v * v)
    _dp_run(v, alpha, beta, gamma, COST_PLAIN, COST_PLAIN, 1)
    _dp_run(v, alpha, beta, gamma, COST_TWO_LEVEL, COST_TWO_LEVEL, 1)
    _dp_baseline(v, alpha, beta, gamma, 1)
    _cost_scalar(v, alpha, beta, gamma, 0, 3)
    _cost2_scalar(v, alpha, beta, gamma, 0, 3)
    _best_mid_scalar(v, alpha, beta, 0, 3)
    _bin_masses(v, 0.0, 1.5, 2)
