"""Fractional-part embeddings of matrices (and of units mod n) into unit cubes.

A point is stored as integer numerators over a common denominator, so region
membership can be decided exactly.  Flattening is row-major over the
displayed layout: for ``g`` the i-th row of the display is the i-th row of A
followed by the i-th row of A^{-1}, giving coordinates
``a_i1..a_in, b_i1..b_in`` for i = 1..n.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from . import _batch
from .errors import MembershipViolation, NotAUnit, Singular
from .fp import FpMatrix, as_matrix
from .groups import GroupKind


@dataclass(frozen=True)
class UnitPoint:
    """A point of [0,1)^k whose coordinates are ``numerators[i] / p``."""

    numerators: tuple
    p: int

    def __post_init__(self):
        nums = tuple(int(x) for x in self.numerators)
        if any(not 0 <= x < self.p for x in nums):
            raise ValueError(f"numerators must lie in [0, {self.p})")
        object.__setattr__(self, "numerators", nums)

    @property
    def k(self) -> int:
        return len(self.numerators)

    @property
    def coords(self) -> tuple:
        return tuple(Fraction(x, self.p) for x in self.numerators)

    def as_floats(self) -> np.ndarray:
        return np.array(self.numerators, dtype=float) / self.p

    def to_json(self) -> dict:
        return {"k": self.k, "p": self.p, "numerators": list(self.numerators)}

    @classmethod
    def from_json(cls, obj: dict) -> "UnitPoint":
        pt = cls(tuple(obj["numerators"]), obj["p"])
        if "k" in obj and int(obj["k"]) != pt.k:
            raise ValueError(f"declared k={obj['k']} but got {pt.k} numerators")
        return pt


class Embedding(enum.Enum):
    G = "g"    # (A, A^{-1}), dimension 2n^2
    H = "h"    # A, dimension n^2, A in GL_n
    S = "s"    # A, dimension n^2, A in SL_n
    GT = "gt"  # (A, C A^{-1}), dimension 2n^2

    @classmethod
    def parse(cls, value) -> "Embedding":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown embedding {value!r}; expected one of g, h, s, gt") from None

    def dim(self, n: int) -> int:
        return 2 * n * n if self in (Embedding.G, Embedding.GT) else n * n

    @property
    def pairs_inverse(self) -> bool:
        return self in (Embedding.G, Embedding.GT)

    def allowed_kinds(self) -> tuple:
        if self is Embedding.S:
            return (GroupKind.SL,)
        return (GroupKind.GL, GroupKind.SL)

    def check_kind(self, kind) -> GroupKind:
        kind = GroupKind.parse(kind)
        if kind not in self.allowed_kinds():
            raise MembershipViolation(
                f"embedding {self.value} is defined on {[k.value for k in self.allowed_kinds()]}, not {kind.value}")
        return kind

    def default_kind(self) -> GroupKind:
        return GroupKind.SL if self is Embedding.S else GroupKind.GL


def _interleave(a: FpMatrix, b: FpMatrix) -> tuple:
    out = []
    for ra, rb in zip(a.entries, b.entries):
        out.extend(ra)
        out.extend(rb)
    return tuple(out)


def g_p(a: FpMatrix) -> UnitPoint:
    return UnitPoint(_interleave(a, a.inverse()), a.p)


def h_p(a: FpMatrix) -> UnitPoint:
    if a.det().value == 0:
        raise MembershipViolation(f"{a!r} is not in GL_{a.n}(F_{a.p})")
    return UnitPoint(a.flat, a.p)


def s_p(a: FpMatrix) -> UnitPoint:
    if a.det().value != 1:
        raise MembershipViolation(f"{a!r} is not in SL_{a.n}(F_{a.p})")
    return UnitPoint(a.flat, a.p)


def tilde_g_p(a: FpMatrix, c: FpMatrix) -> UnitPoint:
    """Point for the solution pair of ``B A = C``: A's rows interleaved with B = C A^{-1}."""
    if c.det().value == 0:
        raise Singular("C must be invertible")
    return UnitPoint(_interleave(a, c @ a.inverse()), a.p)


def classical_f_n(x: int, n: int) -> UnitPoint:
    """The pair ({x/n}, {x^{-1}/n}) for a unit x mod n."""
    if n < 2:
        raise ValueError("n must be >= 2")
    x %= n
    if gcd(x, n) != 1:
        raise NotAUnit(f"{x} is not a unit mod {n}")
    return UnitPoint((x, pow(x, -1, n)), n)


def embed(embedding, a: FpMatrix, aux: FpMatrix | None = None) -> UnitPoint:
    emb = Embedding.parse(embedding)
    if emb is Embedding.G:
        return g_p(a)
    if emb is Embedding.H:
        return h_p(a)
    if emb is Embedding.S:
        return s_p(a)
    if aux is None:
        raise ValueError("embedding gt needs the auxiliary matrix C")
    return tilde_g_p(a, as_matrix(aux, a.n, a.p))


def block_numerators(embedding: Embedding, mats: np.ndarray, invs: np.ndarray | None,
                     n: int, p: int, aux: FpMatrix | None = None) -> np.ndarray:
    """Numerators of the embedded points for a block of flat matrices."""
    if not embedding.pairs_inverse:
        return mats
    second = invs
    if embedding is Embedding.GT:
        second = _batch.matmul(aux.to_array(), invs.reshape(-1, n, n), p).reshape(-1, n * n)
    out = np.empty((mats.shape[0], 2 * n * n), dtype=np.int64)
    for i in range(n):
        out[:, 2 * n * i:2 * n * i + n] = mats[:, n * i:n * (i + 1)]
        out[:, 2 * n * i + n:2 * n * (i + 1)] = second[:, n * i:n * (i + 1)]
    return out


def units_numerators(modulus: int) -> np.ndarray:
    """All points f_n(x) for x a unit mod ``modulus``, as an (phi, 2) array."""
    xs = [x for x in range(1, modulus) if gcd(x, modulus) == 1]
    return np.array([[x, pow(x, -1, modulus)] for x in xs], dtype=np.int64).reshape(-1, 2)
