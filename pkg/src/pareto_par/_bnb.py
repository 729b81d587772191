"""Depth-first branch and bound kernel over bounded integer variables.

Rows are two-sided, ``lo[r] <= R[r] @ x <= hi[r]`` where each side is switched
on by ``has_lo`` / ``has_hi``.  Variables are fixed in index order, smallest
value first.  A node is pruned when some row cannot be satisfied by any
completion (suffix activity bounds) or when the objective's suffix bound
cannot beat the incumbent.  Compiled with numba when it is importable; the
plain Python body is kept numerically identical.
"""
import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

HAVE_NUMBA = njit.__module__.startswith("numba")


@njit(cache=True, nogil=True)
def suffix_bounds(R, lb, ub):
    m, c = R.shape
    smin = np.zeros((m, c + 1), dtype=np.int64)
    smax = np.zeros((m, c + 1), dtype=np.int64)
    for r in range(m):
        for j in range(c - 1, -1, -1):
            a = R[r, j]
            if a >= 0:
                smin[r, j] = smin[r, j + 1] + a * lb[j]
                smax[r, j] = smax[r, j + 1] + a * ub[j]
            else:
                smin[r, j] = smin[r, j + 1] + a * ub[j]
                smax[r, j] = smax[r, j + 1] + a * lb[j]
    return smin, smax


@njit(cache=True, nogil=True)
def branch_and_bound(R, colptr, rowidx, vals, lo, hi, has_lo, has_hi,
                     lb, ub, smin, smax, obj_row, x0, use_x0):
    """Return ``(status, value, x)``; status 1 is optimal, 0 infeasible."""
    m, c = R.shape
    x = np.empty(c, dtype=np.int64)
    bestx = np.zeros(c, dtype=np.int64)
    best = 0
    found = False

    for r in range(m):
        if has_hi[r] and smin[r, 0] > hi[r]:
            return 0, 0, bestx
        if has_lo[r] and smax[r, 0] < lo[r]:
            return 0, 0, bestx

    if use_x0:
        best = 0
        for j in range(c):
            best += R[obj_row, j] * x0[j]
            bestx[j] = x0[j]
        found = True
        if smin[obj_row, 0] >= best:
            return 1, best, bestx

    act = np.zeros(m, dtype=np.int64)
    j = 0
    x[0] = lb[0] - 1
    while j >= 0:
        p0 = colptr[j]
        p1 = colptr[j + 1]
        if x[j] >= lb[j]:
            if x[j] == ub[j]:
                v = x[j]
                for p in range(p0, p1):
                    act[rowidx[p]] -= vals[p] * v
                j -= 1
                continue
            x[j] += 1
            for p in range(p0, p1):
                act[rowidx[p]] += vals[p]
        else:
            x[j] = lb[j]
            v = lb[j]
            for p in range(p0, p1):
                act[rowidx[p]] += vals[p] * v

        ok = True
        stop = False
        for p in range(p0, p1):
            r = rowidx[p]
            a = act[r]
            if has_hi[r] and a + smin[r, j + 1] > hi[r]:
                ok = False
                stop = vals[p] > 0
                break
            if has_lo[r] and a + smax[r, j + 1] < lo[r]:
                ok = False
                stop = vals[p] < 0
                break
        if ok and found and act[obj_row] + smin[obj_row, j + 1] >= best:
            ok = False
            stop = R[obj_row, j] >= 0
        if not ok:
            if stop:
                v = x[j]
                for p in range(p0, p1):
                    act[rowidx[p]] -= vals[p] * v
                j -= 1
            continue
        if j == c - 1:
            best = act[obj_row]
            for i in range(c):
                bestx[i] = x[i]
            found = True
            continue
        j += 1
        x[j] = lb[j] - 1

    if found:
        return 1, best, bestx
    return 0, 0, bestx
