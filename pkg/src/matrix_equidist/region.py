"""Half-open axis-aligned boxes in [0,1)^k and finite unions of them."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .embed import Embedding, UnitPoint, block_numerators, units_numerators
from .errors import DimensionMismatch, Singular
from .fp import as_matrix
from .groups import scan


def _frac(v) -> Fraction:
    if isinstance(v, (list, tuple)):
        num, den = v
        return Fraction(int(num), int(den))
    return Fraction(v)


@dataclass(frozen=True)
class Box:
    """The product of the half-open intervals ``[lo_i, hi_i)``."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(_frac(x) for x in self.lo)
        hi = tuple(_frac(x) for x in self.hi)
        if len(lo) != len(hi) or not lo:
            raise DimensionMismatch(f"lo has {len(lo)} coordinates, hi has {len(hi)}")
        for a, b in zip(lo, hi):
            if not 0 <= a <= b <= 1:
                raise ValueError(f"need 0 <= lo <= hi <= 1, got [{a}, {b})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def cube(cls, k: int, side=1) -> "Box":
        return cls((0,) * k, (side,) * k)

    @property
    def k(self) -> int:
        return len(self.lo)

    def area(self) -> Fraction:
        return math.prod((b - a for a, b in zip(self.lo, self.hi)), start=Fraction(1))

    def is_empty(self) -> bool:
        return any(a == b for a, b in zip(self.lo, self.hi))

    def overlaps(self, other: "Box") -> bool:
        if self.is_empty() or other.is_empty():
            return False
        return all(max(a, c) < min(b, d) for a, b, c, d in zip(self.lo, self.hi, other.lo, other.hi))

    def contains_box(self, other: "Box") -> bool:
        return other.is_empty() or all(
            a <= c and d <= b for a, b, c, d in zip(self.lo, self.hi, other.lo, other.hi))

    def contains(self, x: UnitPoint) -> bool:
        if x.k != self.k:
            raise DimensionMismatch(f"point has dimension {x.k}, box has {self.k}")
        return all(a <= c < b for a, b, c in zip(self.lo, self.hi, x.coords))

    def thresholds(self, p: int) -> tuple[np.ndarray, np.ndarray]:
        """Integer bounds with ``lo <= x/p < hi`` iff ``tlo <= x < thi``."""
        tlo = np.array([math.ceil(a * p) for a in self.lo], dtype=np.int64)
        thi = np.array([math.ceil(b * p) for b in self.hi], dtype=np.int64)
        return tlo, thi

    def mask(self, nums: np.ndarray, p: int) -> np.ndarray:
        tlo, thi = self.thresholds(p)
        return np.all((nums >= tlo) & (nums < thi), axis=1)

    def to_json(self) -> dict:
        return {"lo": [[f.numerator, f.denominator] for f in self.lo],
                "hi": [[f.numerator, f.denominator] for f in self.hi]}

    @classmethod
    def from_json(cls, obj: dict) -> "Box":
        return cls(tuple(obj["lo"]), tuple(obj["hi"]))

    def __str__(self):
        return "x".join(f"[{a},{b})" for a, b in zip(self.lo, self.hi))


class RegionUnion:
    """A finite union of pairwise non-overlapping boxes of a common dimension."""

    def __init__(self, boxes: Iterable[Box], k: int | None = None):
        self.boxes = tuple(boxes)
        dims = {b.k for b in self.boxes}
        if k is not None:
            dims.add(k)
        if len(dims) > 1:
            raise DimensionMismatch(f"boxes of different dimensions {sorted(dims)}")
        if not dims:
            raise DimensionMismatch("an empty union needs an explicit dimension k")
        self.k = dims.pop()
        for i, a in enumerate(self.boxes):
            for b in self.boxes[i + 1:]:
                if a.overlaps(b):
                    raise ValueError(f"boxes {a} and {b} overlap")

    @classmethod
    def of(cls, region) -> "RegionUnion":
        return region if isinstance(region, RegionUnion) else cls([region])

    def area(self) -> Fraction:
        return sum((b.area() for b in self.boxes), Fraction(0))

    def contains(self, x: UnitPoint) -> bool:
        if x.k != self.k:
            raise DimensionMismatch(f"point has dimension {x.k}, region has {self.k}")
        return any(b.contains(x) for b in self.boxes)

    def mask(self, nums: np.ndarray, p: int) -> np.ndarray:
        out = np.zeros(nums.shape[0], dtype=bool)
        for b in self.boxes:
            out |= b.mask(nums, p)
        return out

    def to_json(self) -> dict:
        return {"k": self.k, "boxes": [b.to_json() for b in self.boxes]}

    @classmethod
    def from_json(cls, obj: dict) -> "RegionUnion":
        return cls([Box.from_json(b) for b in obj["boxes"]], k=obj.get("k"))

    @classmethod
    def load(cls, path) -> "RegionUnion":
        return cls.from_json(json.loads(Path(path).read_text()))

    def __len__(self):
        return len(self.boxes)

    def __repr__(self):
        return f"RegionUnion(k={self.k}, boxes={len(self.boxes)})"


def area(region) -> Fraction:
    return region.area()


def contains(region, x: UnitPoint) -> bool:
    return region.contains(x)


def slab(k: int, lows: Sequence, highs: Sequence) -> Box:
    """Box whose first coordinates are given and whose remaining sides are [0,1)."""
    m = len(lows)
    return Box(tuple(lows) + (0,) * (k - m), tuple(highs) + (1,) * (k - m))


def count_image(kind, n: int, p: int, embedding, region, aux=None,
                threads: int | None = None) -> int:
    """Number of group elements whose embedded point lies in ``region``."""
    return int(count_image_many(kind, n, p, embedding, [region], aux=aux, threads=threads)[0])


def count_image_many(kind, n: int, p: int, embedding, regions: Sequence, aux=None,
                     threads: int | None = None) -> np.ndarray:
    """Counts for several regions in one enumeration pass."""
    emb = Embedding.parse(embedding)
    kind = emb.check_kind(kind)
    regions = [RegionUnion.of(r) for r in regions]
    k = emb.dim(n)
    for r in regions:
        if r.k != k:
            raise DimensionMismatch(f"region dimension {r.k} does not match embedding {emb.value} (k={k})")
    c = None
    if emb is Embedding.GT:
        if aux is None:
            raise ValueError("embedding gt needs the auxiliary matrix C")
        c = as_matrix(aux, n, p)
        if c.det().value == 0:
            raise Singular("C must be invertible")

    def update(acc, blk):
        nums = block_numerators(emb, blk.mats, blk.invs, n, p, c)
        for i, r in enumerate(regions):
            acc[i] += int(np.count_nonzero(r.mask(nums, p)))

    return scan(kind, n, p, lambda: np.zeros(len(regions), dtype=np.int64), update,
                threads=threads, with_inverse=emb.pairs_inverse)


def count_units_image(modulus: int, region) -> int:
    """Count of units x mod ``modulus`` with f_n(x) in ``region`` (the classical case)."""
    region = RegionUnion.of(region)
    if region.k != 2:
        raise DimensionMismatch("the classical map lands in [0,1)^2")
    return int(np.count_nonzero(region.mask(units_numerators(modulus), modulus)))
