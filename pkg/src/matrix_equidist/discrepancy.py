"""Erdos-Turan-Koksma upper bounds computed from exact group character sums.

For an embedded image, the exponential sum at an integer frequency h is a
character sum over the group: h is reduced mod p and split into the
coefficient matrix U of the A-block and, for the paired embeddings, V of the
inverse block.  All frequencies of a cube ``[-H, H]^k`` are handled in one
enumeration pass that fills one histogram per (U, V) pair.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from . import _batch
from ._kernels import grid_hist, reduced_forms
from .charsum import evaluate_counts, form_histograms
from .embed import Embedding
from .errors import CombinatorialBlowup, DimensionMismatch, IndexOverflow, Singular
from .fp import FpMatrix, as_matrix, check_prime
from .groups import order, scan
from .region import RegionUnion, count_image_many

FREQUENCY_CAP = 500_000
BANK_BYTES_CAP = 1 << 29
FORM_BYTES_BUDGET = 1 << 26


@dataclass(frozen=True)
class HVector:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(x) for x in self.values))

    @property
    def k(self) -> int:
        return len(self.values)

    @property
    def norm_inf(self) -> int:
        return max((abs(x) for x in self.values), default=0)

    @property
    def r(self) -> int:
        return r_of_h(self.values)

    def __neg__(self):
        return HVector(tuple(-x for x in self.values))

    def scaled(self, c: int) -> "HVector":
        return HVector(tuple(c * x for x in self.values))


def r_of_h(h) -> int:
    """prod_i max(1, |h_i|)."""
    vals = h.values if isinstance(h, HVector) else h
    out = math.prod(max(1, abs(int(x))) for x in vals)
    if out >= 2**63:
        raise IndexOverflow(f"r(h) = {out} does not fit in 64 bits")
    return out


def default_H(n: int, p: int) -> int:
    """floor(p ** (1 / (2 (2 n^2 + 1)))), computed with integers."""
    e = 2 * (2 * n * n + 1)
    h = max(1, int(round(p ** (1.0 / e))))
    while h**e > p:
        h -= 1
    while (h + 1) ** e <= p:
        h += 1
    return h


def split_frequency(h, n: int, p: int, embedding) -> tuple[FpMatrix, FpMatrix | None]:
    """Reduce h mod p into the coefficient matrices (U, V) of the embedded coordinates."""
    emb = Embedding.parse(embedding)
    vals = h.values if isinstance(h, HVector) else tuple(int(x) for x in h)
    if len(vals) != emb.dim(n):
        raise DimensionMismatch(f"h has {len(vals)} entries, embedding {emb.value} needs {emb.dim(n)}")
    if not emb.pairs_inverse:
        return FpMatrix.from_flat(vals, n, p), None
    u, v = [], []
    for i in range(n):
        row = vals[2 * n * i:2 * n * (i + 1)]
        u.extend(row[:n])
        v.extend(row[n:])
    return FpMatrix.from_flat(u, n, p), FpMatrix.from_flat(v, n, p)


def _effective_v(v: FpMatrix, emb: Embedding, aux) -> FpMatrix:
    if emb is Embedding.GT:
        if aux is None:
            raise ValueError("embedding gt needs the auxiliary matrix C")
        c = as_matrix(aux, v.n, v.p)
        if c.det().value == 0:
            raise Singular("C must be invertible")
        # V . (C Y) = (C^T V) . Y
        return c.transpose() @ v
    return v


def exp_sum_over_image(h, kind, n: int, p: int, embedding, aux=None, *,
                       threads: int | None = None) -> complex:
    """(1/N) sum over the image of e(h . x), evaluated through the group character sum."""
    emb = Embedding.parse(embedding)
    kind = emb.check_kind(kind)
    p = check_prime(p)
    u, v = split_frequency(h, n, p, emb)
    if v is None:
        counts = form_histograms(kind, n, p, [u], threads=threads)
    else:
        counts = form_histograms(kind, n, p, [u], [_effective_v(v, emb, aux)], threads=threads)
    return complex(evaluate_counts(counts[0], p)) / order(kind, n, p)


@dataclass
class EtkReport:
    k: int
    N: int
    H: int
    bound: float
    tail_sum: float
    n_frequencies: int
    max_magnitude: float
    magnitudes: dict | None = field(default=None, repr=False)

    @property
    def floor(self) -> float:
        return 1.5**self.k * 2.0 / (self.H + 1)

    def to_json(self, with_magnitudes: bool = False) -> dict:
        out = {"k": self.k, "N": self.N, "H": self.H, "bound": self.bound,
               "tail_sum": self.tail_sum, "n_frequencies": self.n_frequencies,
               "max_magnitude": self.max_magnitude}
        if with_magnitudes and self.magnitudes is not None:
            out["magnitudes"] = [[list(h), m] for h, m in self.magnitudes.items()]
        return out


def _check_cap(H: int, k: int, cap: int) -> int:
    if H < 1:
        raise ValueError("H must be a positive integer")
    count = (2 * H + 1) ** k - 1
    if count > cap:
        raise CombinatorialBlowup(f"(2H+1)^k - 1 = {count} frequencies exceeds the cap {cap}")
    return count


def _finish(k: int, N: int, H: int, terms: list, mags: Sequence[float], count: int,
            magnitudes: dict | None = None) -> EtkReport:
    tail = math.fsum(terms)
    bound = 1.5**k * (2.0 / (H + 1) + tail)
    return EtkReport(k=k, N=N, H=H, bound=bound, tail_sum=tail, n_frequencies=count,
                     max_magnitude=float(max(mags, default=0.0)), magnitudes=magnitudes)


def etk_bound(H: int, k: int, N: int, magnitudes: Callable | Mapping, *,
              cap: int = FREQUENCY_CAP, keep: bool = False) -> EtkReport:
    """Right-hand side of the ETK inequality.

    ``magnitudes`` maps each frequency tuple h with ``0 < |h|_inf <= H`` to
    ``|(1/N) sum_n e(h . x_n)|``; it may be a callable or a mapping.
    """
    count = _check_cap(H, k, cap)
    get = magnitudes if callable(magnitudes) else magnitudes.__getitem__
    terms, mags, kept = [], [], {} if keep else None
    for h in itertools.product(range(-H, H + 1), repeat=k):
        if not any(h):
            continue
        m = float(get(h))
        terms.append(m / r_of_h(h))
        mags.append(m)
        if keep:
            kept[h] = m
    return _finish(k, N, H, terms, mags, count, kept)


def _cube(H: int, d: int) -> np.ndarray:
    return np.array(list(itertools.product(range(-H, H + 1), repeat=d)), dtype=np.int64).reshape(-1, d)


def frequency_bank(kind, n: int, p: int, embedding, H: int, aux=None, *,
                   threads: int | None = None, bank_bytes_cap: int = BANK_BYTES_CAP):
    """Histograms for every frequency in ``[-H, H]^k`` from enumeration passes.

    Returns ``(hu, hv, counts)`` where ``hu``/``hv`` list the U- and V-block
    frequencies in lexicographic order and ``counts[i, j]`` is the histogram
    for the frequency assembled from ``hu[i]`` and ``hv[j]`` (``hv`` has a
    single zero row for unpaired embeddings).  When one bank would exceed
    ``bank_bytes_cap`` the U-range is processed in several passes.
    """
    emb = Embedding.parse(embedding)
    kind = emb.check_kind(kind)
    p = check_prime(p)
    d = n * n
    hu = _cube(H, d)
    us = np.ascontiguousarray(hu % p)
    if emb.pairs_inverse:
        hv = _cube(H, d)
        vs = hv % p
        if emb is Embedding.GT:
            if aux is None:
                raise ValueError("embedding gt needs the auxiliary matrix C")
            c = as_matrix(aux, n, p)
            if c.det().value == 0:
                raise Singular("C must be invertible")
            # V . (C Y) = (C^T V) . Y
            vs = _batch.matmul(c.to_array().T, vs.reshape(-1, n, n), p).reshape(-1, d)
        vs = np.ascontiguousarray(vs)
    else:
        hv = np.zeros((1, d), dtype=np.int64)
        vs = hv.copy()
    nv = vs.shape[0]
    per_u = nv * p * 8
    step = max(1, min(us.shape[0], bank_bytes_cap // per_u))
    banks = []
    for start in range(0, us.shape[0], step):
        u_part = us[start:start + step]
        nu = u_part.shape[0]
        sub = max(256, FORM_BYTES_BUDGET // (8 * (nu + nv)))

        def update(acc, blk, u_part=u_part):
            ys = blk.invs if emb.pairs_inverse else None
            for s in range(0, len(blk), sub):
                xs = blk.mats[s:s + sub]
                au = reduced_forms(u_part, xs, p)
                if ys is None:
                    bv = np.zeros((1, xs.shape[0]), dtype=np.int64)
                else:
                    bv = reduced_forms(vs, ys[s:s + sub], p)
                grid_hist(au, bv, p, acc)

        banks.append(scan(kind, n, p, lambda nu=nu: np.zeros((nu, nv, p), dtype=np.int64), update,
                          threads=threads, with_inverse=emb.pairs_inverse))
    return hu, hv, np.concatenate(banks, axis=0)


def etk_report(kind, n: int, p: int, embedding, H: int, aux=None, *, threads: int | None = None,
               cap: int = FREQUENCY_CAP, keep: bool = False) -> EtkReport:
    """ETK bound for the image of a group, with all magnitudes from one batched pass."""
    emb = Embedding.parse(embedding)
    kind = emb.check_kind(kind)
    k = emb.dim(n)
    count = _check_cap(H, k, cap)
    N = order(kind, n, p)
    hu, hv, bank = frequency_bank(kind, n, p, emb, H, aux, threads=threads)
    mags = np.abs(evaluate_counts(bank, p)) / N
    ru = np.prod(np.maximum(1, np.abs(hu)), axis=1)
    rv = np.prod(np.maximum(1, np.abs(hv)), axis=1)
    weights = 1.0 / (ru[:, None] * rv[None, :]).astype(np.float64)
    zero = (np.flatnonzero(~hu.any(axis=1))[0], np.flatnonzero(~hv.any(axis=1))[0])
    mags[zero] = 0.0
    terms = (mags * weights).ravel().tolist()
    flat_mags = mags.ravel().tolist()
    kept = None
    if keep:
        kept = {}
        for i, j in itertools.product(range(hu.shape[0]), range(hv.shape[0])):
            if (i, j) != zero:
                kept[assemble_frequency(hu[i], hv[j] if emb.pairs_inverse else None, n)] = float(mags[i, j])
    return _finish(k, N, H, terms, flat_mags, count, kept)


def assemble_frequency(hu_row, hv_row, n: int) -> tuple:
    """Inverse of :func:`split_frequency` on integer vectors (no reduction)."""
    hu_row = [int(x) for x in hu_row]
    if hv_row is None:
        return tuple(hu_row)
    hv_row = [int(x) for x in hv_row]
    out = []
    for i in range(n):
        out.extend(hu_row[n * i:n * (i + 1)])
        out.extend(hv_row[n * i:n * (i + 1)])
    return tuple(out)


@dataclass(frozen=True)
class BoxError:
    box: object
    count: int
    N: int
    area: Fraction
    error: Fraction

    @property
    def value(self) -> float:
        return float(self.error)

    def to_json(self) -> dict:
        return {"box": self.box.to_json(), "count": self.count, "N": self.N,
                "area": [self.area.numerator, self.area.denominator],
                "error": [self.error.numerator, self.error.denominator], "error_value": self.value}


def empirical_box_error(kind, n: int, p: int, embedding, boxes: Sequence, aux=None, *,
                        threads: int | None = None) -> list[BoxError]:
    """|count/N - area| for each box (or union), exactly, from one enumeration pass."""
    emb = Embedding.parse(embedding)
    kind = emb.check_kind(kind)
    N = order(kind, n, p)
    counts = count_image_many(kind, n, p, emb, boxes, aux=aux, threads=threads)
    out = []
    for b, c in zip(boxes, counts.tolist()):
        a = RegionUnion.of(b).area()
        out.append(BoxError(box=b, count=int(c), N=N, area=a, error=abs(Fraction(int(c), N) - a)))
    return out
