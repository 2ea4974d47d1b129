"""Exhaustive, chunkable enumeration of M_n, GL_n, SL_n and Z_n over F_p.

Every matrix of M_n(F_p) has an index in ``[0, p**(n*n))``: its n*n entries,
read row-major, are the base-p digits of the index (first entry most
significant).  A group is enumerated by filtering that ordering on the
determinant, so any index range can be processed independently and partial
results merge by addition.
"""

from __future__ import annotations

import contextlib
import contextvars
import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from . import _batch
from .errors import DeskScaleExceeded, IndexOverflow
from .fp import FpMatrix, check_prime

#: default refusal threshold on ``p**(n*n)``
DESK_SCALE_LIMIT = 2**40
#: kernels accumulate up to 2n^2 products of residues in int64
MAX_SCAN_PRIME = 2**28
BLOCK = 1 << 16
THREADS_ENV = "MATEQ_THREADS"

_limit = contextvars.ContextVar("desk_scale_limit", default=DESK_SCALE_LIMIT)


@contextlib.contextmanager
def desk_scale_limit(limit: int | None):
    """Temporarily change (or with ``None`` lift) the desk-scale guard."""
    token = _limit.set(limit)
    try:
        yield
    finally:
        _limit.reset(token)


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


class GroupKind(enum.Enum):
    FULL = "m"
    GL = "gl"
    SL = "sl"
    SINGULAR = "z"

    @classmethod
    def parse(cls, value) -> "GroupKind":
        if isinstance(value, cls):
            return value
        key = str(value).lower()
        aliases = {
            "m": cls.FULL, "full": cls.FULL, "fullmatrixset": cls.FULL,
            "gl": cls.GL, "generallinear": cls.GL,
            "sl": cls.SL, "speciallinear": cls.SL,
            "z": cls.SINGULAR, "singular": cls.SINGULAR,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown group kind {value!r}; expected one of m, gl, sl, z") from None

    def member_mask(self, det: np.ndarray) -> np.ndarray | None:
        if self is GroupKind.FULL:
            return None
        if self is GroupKind.GL:
            return det != 0
        if self is GroupKind.SL:
            return det == 1
        return det == 0

    def contains(self, m: FpMatrix) -> bool:
        d = m.det().value
        mask = self.member_mask(np.array([d]))
        return True if mask is None else bool(mask[0])


@dataclass(frozen=True)
class EnumChunk:
    """Half-open range of indices into the M_n ordering."""

    start: int
    stop: int

    def __post_init__(self):
        if not 0 <= self.start <= self.stop:
            raise ValueError(f"bad chunk [{self.start}, {self.stop})")

    def split(self, size: int) -> list["EnumChunk"]:
        return [EnumChunk(s, min(s + size, self.stop)) for s in range(self.start, self.stop, size)]

    def __len__(self):
        return self.stop - self.start


def full_chunk(n: int, p: int) -> EnumChunk:
    return EnumChunk(0, p ** (n * n))


def gl_order(n: int, p: int) -> int:
    out = 1
    for k in range(n):
        out *= p**n - p**k
    return out


def order(kind, n: int, p: int) -> int:
    """Exact cardinality from the classical product formulas."""
    kind = GroupKind.parse(kind)
    if n < 1:
        raise ValueError("n must be >= 1")
    p = check_prime(p)
    full = p ** (n * n)
    value = {
        GroupKind.FULL: full,
        GroupKind.GL: gl_order(n, p),
        GroupKind.SL: gl_order(n, p) // (p - 1),
        GroupKind.SINGULAR: full - gl_order(n, p),
    }[kind]
    if value >= 2**64:
        raise IndexOverflow(f"|{kind.name}_{n}(F_{p})| = {value} does not fit in 64 bits")
    return value


def check_desk_scale(n: int, p: int) -> None:
    if p >= MAX_SCAN_PRIME:
        raise DeskScaleExceeded(f"p={p} is too large for exhaustive scans (limit {MAX_SCAN_PRIME})")
    limit = _limit.get()
    size = p ** (n * n)
    if size >= 2**63:
        raise IndexOverflow(f"p^(n^2) = {p}^{n * n} overflows 64-bit index arithmetic")
    if limit is not None and size > limit:
        raise DeskScaleExceeded(
            f"exhaustive scan over p^(n^2) = {size} matrices exceeds the desk-scale limit {limit}; "
            "lift it with desk_scale_limit(None) or --allow-large"
        )


@dataclass
class Block:
    """A batch of group members as flat rows, optionally with their inverses."""

    mats: np.ndarray
    invs: np.ndarray | None

    def __len__(self):
        return self.mats.shape[0]


def iter_blocks(kind, n: int, p: int, chunk: EnumChunk | None = None,
                with_inverse: bool = False, block: int = BLOCK, guard: bool = True) -> Iterator[Block]:
    kind = GroupKind.parse(kind)
    p = check_prime(p)
    if guard:
        check_desk_scale(n, p)
    total = p ** (n * n)
    chunk = chunk or EnumChunk(0, total)
    if chunk.stop > total:
        raise ValueError(f"chunk {chunk} exceeds the index range [0, {total})")
    for sub in chunk.split(block):
        flat = _batch.index_to_flat(sub.start, sub.stop, n * n, p)
        need_det = kind is not GroupKind.FULL or with_inverse
        if not need_det:
            yield Block(flat, None)
            continue
        mats = flat.reshape(-1, n, n)
        det, _ = _batch.det_inv(mats, p, want_inverse=False)
        mask = kind.member_mask(det)
        if mask is not None:
            flat = flat[mask]
            mats = mats[mask]
        if flat.shape[0] == 0:
            continue
        invs = None
        if with_inverse:
            _, inv = _batch.det_inv(mats, p)
            invs = inv.reshape(-1, n * n)
        yield Block(flat, invs)


def enumerate_group(kind, n: int, p: int, chunk: EnumChunk | None = None) -> Iterator[FpMatrix]:
    """Yield each member of the group whose M_n index lies in ``chunk`` exactly once."""
    for blk in iter_blocks(kind, n, p, chunk):
        for row in blk.mats:
            yield FpMatrix.from_flat(row.tolist(), n, p)


def count_members(kind, n: int, p: int, chunk: EnumChunk | None = None, threads: int | None = None) -> int:
    def add(acc, blk):
        acc[0] += len(blk)

    return int(scan(kind, n, p, lambda: np.zeros(1, dtype=np.int64), add, threads=threads, chunk=chunk)[0])


def scan(kind, n: int, p: int, make_acc: Callable[[], np.ndarray],
         update: Callable[[np.ndarray, Block], None], *, threads: int | None = None,
         with_inverse: bool = False, chunk: EnumChunk | None = None,
         block: int = BLOCK) -> np.ndarray:
    """Map-reduce over the members of a group.

    The index range is cut into fixed-size blocks; ``threads`` workers each own
    a contiguous run of blocks and one accumulator.  Accumulators are integer
    arrays merged by addition, so the result does not depend on ``threads``.
    """
    kind = GroupKind.parse(kind)
    p = check_prime(p)
    check_desk_scale(n, p)
    threads = threads or default_threads()
    chunk = chunk or full_chunk(n, p)
    pieces = chunk.split(block) or [chunk]
    threads = max(1, min(threads, len(pieces)))
    per = -(-len(pieces) // threads)
    groups = [pieces[i:i + per] for i in range(0, len(pieces), per)]

    def work(group):
        acc = make_acc()
        for piece in group:
            # the guard was checked above; context variables do not reach worker threads
            for blk in iter_blocks(kind, n, p, piece, with_inverse=with_inverse, block=block, guard=False):
                update(acc, blk)
        return acc

    if len(groups) == 1:
        return work(groups[0])
    with ThreadPoolExecutor(max_workers=len(groups)) as pool:
        results = list(pool.map(work, groups))
    total = results[0]
    for r in results[1:]:
        total += r
    return total
