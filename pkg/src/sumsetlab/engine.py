"""Bit-packed truncated sumsets over [0, N].

Bit i of word j represents the integer 64*j + i. Every operation works at a
fixed inclusive bound N and discards sums above it, which is exact because
all elements are nonnegative.
"""

from __future__ import annotations

import os
import struct
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import InvalidParameterError

WORD_BITS = 64
MAGIC = b"SSL1"
_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)
# saturation is tested once per this many shifts
_SATURATION_STRIDE = 64


def _nwords(bound: int) -> int:
    return (bound + 1 + WORD_BITS - 1) // WORD_BITS


def _tail_mask(bound: int) -> np.uint64:
    used = (bound + 1) % WORD_BITS
    return _ONES if used == 0 else np.uint64((1 << used) - 1)


class IntervalBitmap:
    """Membership bitmap of a set intersected with [0, bound]."""

    __slots__ = ("bound", "words")

    def __init__(self, bound: int, words: np.ndarray):
        if bound < 0:
            raise InvalidParameterError(f"bound must be nonnegative, got {bound}")
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.shape != (_nwords(bound),):
            raise InvalidParameterError(
                f"expected {_nwords(bound)} words for bound {bound}, got {words.shape}"
            )
        if words[-1] & ~_tail_mask(bound):
            raise InvalidParameterError("bits above the bound must be zero")
        words.setflags(write=False)
        self.bound = bound
        self.words = words

    @classmethod
    def empty(cls, bound: int) -> "IntervalBitmap":
        return cls(bound, np.zeros(_nwords(bound), dtype=np.uint64))

    @classmethod
    def full(cls, bound: int) -> "IntervalBitmap":
        words = np.full(_nwords(bound), _ONES, dtype=np.uint64)
        words[-1] = _tail_mask(bound)
        return cls(bound, words)

    @classmethod
    def from_members(cls, bound: int, members: Iterable[int]) -> "IntervalBitmap":
        idx = np.fromiter((int(m) for m in members), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() > bound):
            raise InvalidParameterError(f"members must lie in [0, {bound}]")
        return cls.from_bools(bound, _scatter(bound, idx))

    @classmethod
    def from_bools(cls, bound: int, bits: np.ndarray) -> "IntervalBitmap":
        bits = np.asarray(bits, dtype=bool)
        if bits.shape != (bound + 1,):
            raise InvalidParameterError("boolean array must have length bound + 1")
        padded = np.zeros(_nwords(bound) * WORD_BITS, dtype=bool)
        padded[: bound + 1] = bits
        packed = np.packbits(padded, bitorder="little")
        return cls(bound, packed.view("<u8").astype(np.uint64))

    def to_bools(self) -> np.ndarray:
        raw = self.words.astype("<u8").view(np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.bound + 1].astype(bool)

    def members(self) -> list[int]:
        return np.flatnonzero(self.to_bools()).tolist()

    def popcount(self) -> int:
        """Number of set bits, bit 0 included."""
        return int(np.bitwise_count(self.words).sum())

    def is_full(self) -> bool:
        return self.popcount() == self.bound + 1

    def __contains__(self, i: int) -> bool:
        if not 0 <= i <= self.bound:
            return False
        return bool((int(self.words[i // WORD_BITS]) >> (i % WORD_BITS)) & 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntervalBitmap):
            return NotImplemented
        return self.bound == other.bound and np.array_equal(self.words, other.words)

    def __hash__(self) -> int:
        return hash((self.bound, self.words.tobytes()))

    def __repr__(self) -> str:
        return f"IntervalBitmap(bound={self.bound}, popcount={self.popcount()})"

    def issubset(self, other: "IntervalBitmap") -> bool:
        _check_same_bound(self, other)
        return not np.any(self.words & ~other.words)

    def flipped(self, i: int) -> "IntervalBitmap":
        """Copy with bit i toggled."""
        if not 0 <= i <= self.bound:
            raise InvalidParameterError(f"bit {i} outside [0, {self.bound}]")
        words = self.words.copy()
        words[i // WORD_BITS] ^= np.uint64(1 << (i % WORD_BITS))
        return IntervalBitmap(self.bound, words)

    def to_bytes(self) -> bytes:
        return MAGIC + struct.pack("<Q", self.bound) + self.words.astype("<u8").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "IntervalBitmap":
        if data[:4] != MAGIC:
            raise InvalidParameterError("not a bitmap file (bad magic)")
        (bound,) = struct.unpack_from("<Q", data, 4)
        body = data[12:]
        if len(body) != 8 * _nwords(bound):
            raise InvalidParameterError("bitmap file has wrong length for its bound")
        return cls(bound, np.frombuffer(body, dtype="<u8").astype(np.uint64))

    def save(self, path: str | os.PathLike) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path: str | os.PathLike) -> "IntervalBitmap":
        return cls.from_bytes(Path(path).read_bytes())


def _scatter(bound: int, idx: np.ndarray) -> np.ndarray:
    bits = np.zeros(bound + 1, dtype=bool)
    bits[idx] = True
    return bits


def _check_same_bound(x: IntervalBitmap, y: IntervalBitmap) -> None:
    if x.bound != y.bound:
        raise InvalidParameterError(f"mismatched bounds {x.bound} and {y.bound}")


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("SUMSETLAB_THREADS", "1")))
    except ValueError:
        return 1


class _Shifter:
    """Lazily built bit-offset copies of one operand, so a shift by 64q + r is a slice."""

    def __init__(self, words: np.ndarray):
        self.words = words
        self._by_offset: dict[int, np.ndarray] = {0: words}

    def __getitem__(self, r: int) -> np.ndarray:
        got = self._by_offset.get(r)
        if got is None:
            w = self.words
            got = w << np.uint64(r)
            got[1:] |= w[:-1] >> np.uint64(WORD_BITS - r)
            self._by_offset[r] = got
        return got


def _shift_or(shifter: _Shifter, offsets: np.ndarray, bound: int) -> np.ndarray:
    n = _nwords(bound)
    acc = np.zeros(n, dtype=np.uint64)
    target = bound + 1
    for count, a in enumerate(offsets.tolist(), 1):
        q, r = divmod(a, WORD_BITS)
        np.bitwise_or(acc[q:], shifter[r][: n - q], out=acc[q:])
        if count % _SATURATION_STRIDE == 0:
            acc[-1] &= _tail_mask(bound)
            if int(np.bitwise_count(acc).sum()) == target:
                break
    acc[-1] &= _tail_mask(bound)
    return acc


def sumset(x: IntervalBitmap, y: IntervalBitmap, workers: int | None = None) -> IntervalBitmap:
    """Truncated Minkowski sum {a + b : a in x, b in y, a + b <= N}.

    The operand with fewer set bits drives the loop; each of its members shifts
    the other operand into the accumulator. With ``workers > 1`` the driving
    members are split across threads and the partial results OR-ed, which is
    bit-identical to the sequential result.
    """
    _check_same_bound(x, y)
    sparse, dense = (x, y) if x.popcount() <= y.popcount() else (y, x)
    offsets = np.flatnonzero(sparse.to_bools())
    bound = x.bound
    if offsets.size == 0 or dense.popcount() == 0:
        return IntervalBitmap.empty(bound)
    shifter = _Shifter(dense.words)
    workers = default_workers() if workers is None else max(1, workers)
    if workers == 1 or offsets.size < 2 * workers:
        return IntervalBitmap(bound, _shift_or(shifter, offsets, bound))
    # warm the shifted copies up front so threads only read them
    for r in np.unique(offsets % WORD_BITS).tolist():
        shifter[r]
    chunks = [offsets[i::workers] for i in range(workers)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda c: _shift_or(shifter, c, bound), chunks))
    acc = parts[0]
    for part in parts[1:]:
        acc |= part
    return IntervalBitmap(bound, acc)


def hfold(
    a: IntervalBitmap, h: int, method: str = "auto", workers: int | None = None
) -> IntervalBitmap:
    """Truncated h-fold sumset hA.

    ``method="doubling"`` splits hA = floor(h/2)A + ceil(h/2)A recursively,
    ``"chain"`` iterates A + (h-1)A. ``"auto"`` uses doubling only for dense
    bases (more than one member per word on average), where the halves saturate
    quickly; for sparse bases such as polygonal numbers the chain keeps the
    sparse operand driving every step.
    """
    if h < 1:
        raise InvalidParameterError(f"h must be a positive integer, got {h}")
    if method == "auto":
        method = "doubling" if a.popcount() * WORD_BITS > a.bound + 1 else "chain"
    if method == "chain":
        acc = a
        for _ in range(h - 1):
            acc = sumset(a, acc, workers)
        return acc
    if method != "doubling":
        raise InvalidParameterError(f"unknown hfold method {method!r}")
    memo: dict[int, IntervalBitmap] = {1: a}

    def power(k: int) -> IntervalBitmap:
        if k not in memo:
            memo[k] = sumset(power(k // 2), power(k - k // 2), workers)
        return memo[k]

    return power(h)


def hfold_levels(a: IntervalBitmap, h_max: int, workers: int | None = None):
    """Yield (h, hA) for h = 1, 2, ..., h_max via the chain hA = A + (h-1)A."""
    if h_max < 1:
        raise InvalidParameterError(f"h_max must be >= 1, got {h_max}")
    acc = a
    yield 1, acc
    for h in range(2, h_max + 1):
        acc = sumset(a, acc, workers)
        yield h, acc


def complement_members(a: IntervalBitmap, lo: int, hi: int) -> list[int]:
    """Integers in [lo, hi] whose bit is clear."""
    if not 0 <= lo <= hi <= a.bound:
        raise InvalidParameterError(f"range [{lo}, {hi}] not inside [0, {a.bound}]")
    bits = a.to_bools()[lo : hi + 1]
    return (np.flatnonzero(~bits) + lo).tolist()


def counting(a: IntervalBitmap, n: int) -> int:
    """Number of members in [1, n]; 0 is never counted."""
    if not 0 <= n <= a.bound:
        raise InvalidParameterError(f"n = {n} outside [0, {a.bound}]")
    if n == 0:
        return 0
    whole, rest = divmod(n + 1, WORD_BITS)
    total = int(np.bitwise_count(a.words[:whole]).sum())
    if rest:
        total += (int(a.words[whole]) & ((1 << rest) - 1)).bit_count()
    return total - (1 if 0 in a else 0)


def counting_many(a: IntervalBitmap, points: Iterable[int]) -> list[int]:
    """``counting`` at several points with one prefix-popcount pass."""
    prefix = np.concatenate(([0], np.cumsum(np.bitwise_count(a.words), dtype=np.int64)))
    zero = 1 if 0 in a else 0
    out = []
    for n in points:
        if not 0 <= n <= a.bound:
            raise InvalidParameterError(f"n = {n} outside [0, {a.bound}]")
        if n == 0:
            out.append(0)
            continue
        whole, rest = divmod(n + 1, WORD_BITS)
        c = int(prefix[whole])
        if rest:
            c += (int(a.words[whole]) & ((1 << rest) - 1)).bit_count()
        out.append(c - zero)
    return out
