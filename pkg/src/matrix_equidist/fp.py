"""Exact arithmetic over F_p and over n x n matrices with entries in F_p.

Every value is kept as a canonical residue in ``[0, p)``; a symbol such as
``-b`` is stored as ``p - b``.  The scalar types here are immutable and use
plain Python integers, so any prime below ``2**64`` is supported.  The
vectorised counterparts used by the enumeration scans live in
:mod:`matrix_equidist._batch`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, ModulusMismatch, NotPrime, Singular

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every ``n < 3.3 * 10**24``."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p: int) -> int:
    p = int(p)
    if not is_prime(p):
        raise NotPrime(f"modulus {p} is not prime")
    return p


@dataclass(frozen=True)
class Residue:
    """An element of F_p."""

    value: int
    modulus: int

    def __post_init__(self):
        p = check_prime(self.modulus)
        object.__setattr__(self, "modulus", p)
        object.__setattr__(self, "value", int(self.value) % p)

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ModulusMismatch(f"{self.modulus} != {other.modulus}")
            return other.value
        return int(other)

    def __add__(self, other):
        return Residue(self.value + self._coerce(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return Residue(self.value - self._coerce(other), self.modulus)

    def __mul__(self, other):
        return Residue(self.value * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def inverse(self) -> "Residue":
        if self.value == 0:
            raise Singular("0 has no inverse")
        return Residue(pow(self.value, -1, self.modulus), self.modulus)

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.value == other.value and self.modulus == other.modulus
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))


@dataclass(frozen=True)
class FpMatrix:
    """An n x n matrix over F_p, stored row-major as a tuple of tuples."""

    entries: tuple
    p: int
    n: int = field(init=False)

    def __post_init__(self):
        p = check_prime(self.p)
        rows = tuple(tuple(int(x) % p for x in row) for row in self.entries)
        n = len(rows)
        if n < 1 or any(len(r) != n for r in rows):
            raise DimensionMismatch(f"expected a square matrix, got row lengths {[len(r) for r in rows]}")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "n", n)

    @classmethod
    def from_flat(cls, flat: Sequence[int], n: int, p: int) -> "FpMatrix":
        flat = list(flat)
        if len(flat) != n * n:
            raise DimensionMismatch(f"need {n * n} entries, got {len(flat)}")
        return cls(tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n)), p)

    @classmethod
    def identity(cls, n: int, p: int) -> "FpMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), p)

    @classmethod
    def zeros(cls, n: int, p: int) -> "FpMatrix":
        return cls(((0,) * n,) * n, p)

    @classmethod
    def unit(cls, i: int, j: int, n: int, p: int) -> "FpMatrix":
        """The matrix unit E_ij (0-based indices)."""
        return cls(tuple(tuple(int((r, c) == (i, j)) for c in range(n)) for r in range(n)), p)

    @property
    def modulus(self) -> int:
        return self.p

    @property
    def flat(self) -> tuple:
        return tuple(x for row in self.entries for x in row)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_zero(self) -> bool:
        return not any(self.flat)

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def to_json(self) -> dict:
        return {"n": self.n, "p": self.p, "entries": [list(r) for r in self.entries]}

    @classmethod
    def from_json(cls, obj: dict) -> "FpMatrix":
        m = cls(tuple(tuple(r) for r in obj["entries"]), obj["p"])
        if "n" in obj and int(obj["n"]) != m.n:
            raise DimensionMismatch(f"declared n={obj['n']} but entries are {m.n}x{m.n}")
        return m

    def _check_compatible(self, other: "FpMatrix"):
        if self.p != other.p:
            raise ModulusMismatch(f"moduli differ: {self.p} vs {other.p}")
        if self.n != other.n:
            raise DimensionMismatch(f"dimensions differ: {self.n} vs {other.n}")

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._check_compatible(other)
        return FpMatrix.from_flat([a + b for a, b in zip(self.flat, other.flat)], self.n, self.p)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._check_compatible(other)
        return FpMatrix.from_flat([a - b for a, b in zip(self.flat, other.flat)], self.n, self.p)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix.from_flat([-a for a in self.flat], self.n, self.p)

    def scale(self, c: int) -> "FpMatrix":
        return FpMatrix.from_flat([c * a for a in self.flat], self.n, self.p)

    def transpose(self) -> "FpMatrix":
        return FpMatrix(tuple(zip(*self.entries)), self.p)

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        return mat_mul(self, other)

    def det(self) -> Residue:
        return det(self)

    def inverse(self) -> "FpMatrix":
        return inverse(self)

    def __repr__(self):
        return f"FpMatrix({[list(r) for r in self.entries]}, p={self.p})"


def mat_mul(a: FpMatrix, b: FpMatrix) -> FpMatrix:
    a._check_compatible(b)
    p = a.p
    cols = list(zip(*b.entries))
    return FpMatrix(
        tuple(tuple(sum(x * y for x, y in zip(row, col)) % p for col in cols) for row in a.entries),
        p,
    )


def _eliminate(m: FpMatrix, augment: bool):
    """Gauss-Jordan over F_p.  Returns (det, reduced augmented block or None)."""
    n, p = m.n, m.p
    rows = [list(r) + ([int(i == j) for j in range(n)] if augment else []) for i, r in enumerate(m.entries)]
    d = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if rows[r][k]), None)
        if piv is None:
            return 0, None
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            d = -d
        pv = rows[k][k]
        d = d * pv % p
        inv_pv = pow(pv, -1, p)
        rows[k] = [x * inv_pv % p for x in rows[k]]
        for r in range(n) if augment else range(k + 1, n):
            if r != k and rows[r][k]:
                f = rows[r][k]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[k])]
    return d % p, ([row[n:] for row in rows] if augment else None)


def det(a: FpMatrix) -> Residue:
    """Determinant mod p by Gaussian elimination."""
    return Residue(_eliminate(a, augment=False)[0], a.p)


def inverse(a: FpMatrix) -> FpMatrix:
    """Inverse over F_p; raises :class:`Singular` when ``det(a) == 0``."""
    d, block = _eliminate(a, augment=True)
    if d == 0:
        raise Singular(f"matrix {a!r} is singular mod {a.p}")
    return FpMatrix(tuple(tuple(r) for r in block), a.p)


def entrywise_dot(u: FpMatrix, x: FpMatrix) -> Residue:
    """The bilinear form ``U . X = sum_ij u_ij x_ij`` reduced mod p."""
    u._check_compatible(x)
    return Residue(sum(a * b for a, b in zip(u.flat, x.flat)), u.p)


def as_matrix(obj, n: int | None = None, p: int | None = None) -> FpMatrix:
    """Accept an FpMatrix, nested rows or a flat sequence and return an FpMatrix."""
    if isinstance(obj, FpMatrix):
        if p is not None and obj.p != p:
            raise ModulusMismatch(f"matrix is mod {obj.p}, expected mod {p}")
        if n is not None and obj.n != n:
            raise DimensionMismatch(f"matrix is {obj.n}x{obj.n}, expected {n}x{n}")
        return obj
    if p is None:
        raise ValueError("modulus required to build a matrix from raw entries")
    arr = np.asarray(obj, dtype=object)
    if arr.ndim == 1:
        if n is None:
            n = int(round(len(arr) ** 0.5))
        return FpMatrix.from_flat([int(x) for x in arr], n, p)
    m = FpMatrix(tuple(tuple(int(x) for x in row) for row in arr), p)
    if n is not None and m.n != n:
        raise DimensionMismatch(f"matrix is {m.n}x{m.n}, expected {n}x{n}")
    return m
