"""Compiled histogram kernels.

All kernels only ever add integers into caller-owned count arrays, so the
result is independent of how a scan is split across workers.
"""

import numba
import numpy as np


@numba.njit(nogil=True, cache=True)
def paired_hist(xs, ys, us, vs, p, counts):
    """counts[s, (us[s].xs[t] + vs[s].ys[t]) mod p] += 1 for every t."""
    m = xs.shape[0]
    dx = xs.shape[1]
    dy = ys.shape[1]
    for s in range(us.shape[0]):
        row = counts[s]
        for t in range(m):
            acc = 0
            for j in range(dx):
                acc += us[s, j] * xs[t, j]
            for j in range(dy):
                acc += vs[s, j] * ys[t, j]
            row[acc % p] += 1


@numba.njit(nogil=True, cache=True)
def grid_hist(au, bv, p, counts):
    """counts[i, j, (au[i, t] + bv[j, t]) mod p] += 1, with au, bv already reduced."""
    nu, m = au.shape
    nv = bv.shape[0]
    for i in range(nu):
        arow = au[i]
        for j in range(nv):
            brow = bv[j]
            row = counts[i, j]
            for t in range(m):
                z = arow[t] + brow[t]
                if z >= p:
                    z -= p
                row[z] += 1


def reduced_forms(coeffs: np.ndarray, pts: np.ndarray, p: int) -> np.ndarray:
    """(coeffs @ pts.T) mod p as a contiguous int64 array of shape (len(coeffs), len(pts))."""
    return np.ascontiguousarray((coeffs @ pts.T) % p, dtype=np.int64)
