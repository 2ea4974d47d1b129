"""Exact character sums over matrix groups.

Every sum ``sum_X e_p(L(X))`` is first accumulated as a frequency vector,
the integer histogram of the linear form ``L(X) mod p`` over the summation
domain.  The complex value is produced only at the end, from the histogram,
with ``e_p(z) = exp(2 pi i z / p)``.  Identities such as the exact
cancellation between GL_n and Z_n are therefore integer statements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from ._kernels import paired_hist
from .errors import DeskScaleExceeded, DimensionMismatch, ModulusMismatch, Singular
from .fp import FpMatrix, as_matrix, check_prime
from .groups import GroupKind, scan

HYPER_CAP = 1 << 26


@dataclass(frozen=True, eq=False)
class FreqVector:
    """``counts[z]`` = number of domain elements whose form is congruent to z mod p."""

    counts: np.ndarray
    p: int

    def __post_init__(self):
        c = np.array(self.counts, dtype=np.int64)
        if c.ndim != 1 or c.size != self.p:
            raise DimensionMismatch(f"need {self.p} counts, got shape {c.shape}")
        if (c < 0).any():
            raise ValueError("counts must be nonnegative")
        c.setflags(write=False)
        object.__setattr__(self, "counts", c)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_complex(self) -> complex:
        return freq_to_complex(self)

    def concentrated_at_zero(self) -> bool:
        return bool(self.counts[1:].sum() == 0)

    def __eq__(self, other):
        if not isinstance(other, FreqVector):
            return NotImplemented
        return self.p == other.p and bool(np.array_equal(self.counts, other.counts))

    def __add__(self, other: "FreqVector") -> "FreqVector":
        if other.p != self.p:
            raise ModulusMismatch(f"{self.p} != {other.p}")
        return FreqVector(self.counts + other.counts, self.p)

    def scaled(self, c: int) -> "FreqVector":
        """Histogram of ``c * L`` (the same sum taken with the character e_p(c .))."""
        c %= self.p
        if c == 0:
            return FreqVector(np.eye(1, self.p, 0, dtype=np.int64)[0] * self.total, self.p)
        out = np.zeros(self.p, dtype=np.int64)
        out[(np.arange(self.p) * c) % self.p] = self.counts
        return FreqVector(out, self.p)

    def to_json(self) -> dict:
        return {"p": self.p, "counts": self.counts.tolist()}


@lru_cache(maxsize=256)
def _unit_circle(p: int) -> tuple[np.ndarray, np.ndarray]:
    ang = 2.0 * np.pi * np.arange(p) / p
    return np.cos(ang), np.sin(ang)


def evaluate_counts(counts: np.ndarray, p: int) -> np.ndarray:
    """Complex values of a stack of histograms (shape ``(..., p)``).

    Each row is summed with ``math.fsum`` in index order, which gives the
    correctly rounded sum of the products regardless of how the histogram
    was produced.
    """
    counts = np.asarray(counts)
    flat = counts.reshape(-1, p).astype(np.float64)
    cos, sin = _unit_circle(p)
    re = [math.fsum(r) for r in (flat * cos).tolist()]
    im = [math.fsum(r) for r in (flat * sin).tolist()]
    return (np.array(re) + 1j * np.array(im)).reshape(counts.shape[:-1])


def freq_to_complex(c: FreqVector) -> complex:
    return complex(evaluate_counts(c.counts[None, :], c.p)[0])


def _as_rows(mats, n: int, p: int) -> np.ndarray:
    """Matrices (FpMatrix objects or raw entries) as a contiguous ``(S, n*n)`` array."""
    if isinstance(mats, np.ndarray):
        return np.ascontiguousarray(mats.reshape(-1, n * n) % p, dtype=np.int64)
    rows = [as_matrix(m, n, p).flat for m in mats]
    return np.array(rows, dtype=np.int64).reshape(len(rows), n * n)


def form_histograms(kind, n: int, p: int, us, vs=None, *, threads: int | None = None) -> np.ndarray:
    """Histograms of ``U_s . X + V_s . X^{-1}`` over the group, one row per pair s.

    ``us`` and ``vs`` are sequences of matrices (or ``(S, n*n)`` arrays); when
    ``vs`` is None only ``U_s . X`` is histogrammed and no inverses are formed.
    """
    kind = GroupKind.parse(kind)
    p = check_prime(p)
    us = _as_rows(us, n, p)
    if vs is None:
        vs_arr = np.zeros((us.shape[0], 0), dtype=np.int64)
    else:
        if kind in (GroupKind.SINGULAR, GroupKind.FULL):
            raise Singular(f"{kind.name} contains singular matrices; X^-1 is undefined")
        vs_arr = _as_rows(vs, n, p)
        if vs_arr.shape[0] != us.shape[0]:
            raise DimensionMismatch("need one V per U")
    s = us.shape[0]

    def update(acc, blk):
        ys = blk.invs if vs is not None else np.zeros((len(blk), 0), dtype=np.int64)
        paired_hist(np.ascontiguousarray(blk.mats), np.ascontiguousarray(ys), us, vs_arr, p, acc)

    return scan(kind, n, p, lambda: np.zeros((s, p), dtype=np.int64), update,
                threads=threads, with_inverse=vs is not None)


def s_freq(kind, u: FpMatrix, *, threads: int | None = None) -> FreqVector:
    """Histogram of ``U . X`` over X in the given kind; its value is S(kind, U)."""
    counts = form_histograms(kind, u.n, u.p, [u], threads=threads)
    return FreqVector(counts[0], u.p)


def k_gl(u: FpMatrix, v: FpMatrix, m: FpMatrix | None = None, *, threads: int | None = None) -> FreqVector:
    """Histogram of ``U . X + V . (M X^{-1})`` over GL_n (the matrix Kloosterman sum)."""
    n, p = u.n, u.p
    v = as_matrix(v, n, p)
    m = FpMatrix.identity(n, p) if m is None else as_matrix(m, n, p)
    if m.det().value == 0:
        raise Singular("M must be invertible")
    # V . (M Y) = (M^T V) . Y
    v_eff = m.transpose() @ v
    counts = form_histograms(GroupKind.GL, n, p, [u], [v_eff], threads=threads)
    return FreqVector(counts[0], p)


def k_sl(u: FpMatrix, v: FpMatrix, *, threads: int | None = None) -> FreqVector:
    """Histogram of ``U . X + V . X^{-1}`` over SL_n."""
    v = as_matrix(v, u.n, u.p)
    counts = form_histograms(GroupKind.SL, u.n, u.p, [u], [v], threads=threads)
    return FreqVector(counts[0], u.p)


def kloosterman(u: int, v: int, p: int) -> complex:
    """Classical K(u, v; p) = sum over x in F_p^* of e_p(u x + v x^{-1})."""
    return freq_to_complex(k_gl(FpMatrix(((u,),), p), FpMatrix(((v,),), p)))


def hyper_kloosterman_freq(a: Sequence[int], p: int, cap: int = HYPER_CAP) -> FreqVector:
    """Histogram of ``sum_i lambda_i a_i`` over tuples of units with product 1."""
    p = check_prime(p)
    a = np.array([int(x) % p for x in a], dtype=np.int64)
    n = a.size
    if n < 1:
        raise ValueError("need at least one coefficient")
    if (p - 1) ** (n - 1) > cap:
        raise DeskScaleExceeded(f"(p-1)^(n-1) = {(p - 1) ** (n - 1)} tuples exceeds the cap {cap}")
    units = np.arange(1, p, dtype=np.int64)
    inv = np.array([0] + [pow(int(x), -1, p) for x in units], dtype=np.int64)
    # phase and running product over the free coordinates lambda_1..lambda_{n-1}
    phase = np.zeros(1, dtype=np.int64)
    prod = np.ones(1, dtype=np.int64)
    for i in range(n - 1):
        phase = ((phase[:, None] + units[None, :] * a[i]) % p).ravel()
        prod = ((prod[:, None] * units[None, :]) % p).ravel()
    phase = (phase + inv[prod] * a[n - 1]) % p
    return FreqVector(np.bincount(phase, minlength=p), p)


def hyper_kloosterman(a: Sequence[int], p: int) -> complex:
    return freq_to_complex(hyper_kloosterman_freq(a, p))
