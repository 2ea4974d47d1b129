"""Vectorised mod-p matrix arithmetic over batches of small matrices.

Batches are int64 arrays of shape ``(B, n, n)`` with entries in ``[0, p)``.
Intermediate products stay below ``p**2``, so ``p < 2**31`` is safe.
"""

from __future__ import annotations

import numpy as np


def index_to_flat(start: int, stop: int, n2: int, p: int) -> np.ndarray:
    """Rows of base-p digits for indices ``start..stop-1``, most significant first."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, n2), dtype=np.int64)
    for k in range(n2 - 1, -1, -1):
        idx, out[:, k] = np.divmod(idx, p)
    return out


def flat_to_index(flat: np.ndarray, p: int) -> np.ndarray:
    idx = np.zeros(flat.shape[0], dtype=np.int64)
    for k in range(flat.shape[1]):
        idx = idx * p + flat[:, k]
    return idx


def pow_mod(x: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.ones_like(x)
    base = x % p
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def inv_mod(x: np.ndarray, p: int) -> np.ndarray:
    """Elementwise inverse mod p; zeros map to zero."""
    return pow_mod(x, p - 2, p)


def det_inv(mats: np.ndarray, p: int, want_inverse: bool = True):
    """Batched Gauss-Jordan.

    Returns ``(det, inv)``; ``inv`` rows for singular matrices are garbage and
    ``inv`` is None when ``want_inverse`` is false.
    """
    a = np.array(mats, dtype=np.int64, copy=True) % p
    bsz, n, _ = a.shape
    if want_inverse:
        a = np.concatenate([a, np.broadcast_to(np.eye(n, dtype=np.int64), (bsz, n, n))], axis=2)
    det = np.ones(bsz, dtype=np.int64)
    rows = np.arange(bsz)
    alive = np.ones(bsz, dtype=bool)
    for k in range(n):
        nz = a[:, k:, k] != 0
        has = nz.any(axis=1)
        alive &= has
        piv = k + np.argmax(nz, axis=1)
        swap = piv != k
        if swap.any():
            r = rows[swap]
            top = a[r, k].copy()
            a[r, k] = a[r, piv[swap]]
            a[r, piv[swap]] = top
            det[swap] = (p - det[swap]) % p
        pv = a[:, k, k]
        det = det * pv % p
        scale = inv_mod(np.where(has, pv, 1), p)
        a[:, k] = a[:, k] * scale[:, None] % p
        targets = range(n) if want_inverse else range(k + 1, n)
        for r in targets:
            if r == k:
                continue
            f = a[:, r, k].copy()
            a[:, r] = (a[:, r] - f[:, None] * a[:, k]) % p
    det[~alive] = 0
    inv = a[:, :, n:] if want_inverse else None
    return det, inv


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Batched product; either operand may be a single (n, n) matrix."""
    return np.einsum("...ik,...kj->...ij", a, b) % p
