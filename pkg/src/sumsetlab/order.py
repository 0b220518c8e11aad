"""Empirical order on [0, N], representation search, and finite-stability experiments."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from . import engine
from .basis import (
    Augmented,
    BasisSpec,
    Polygonal,
    contains_zero,
    enumerate_basis,
    to_bitmap,
)
from .errors import InvalidParameterError


@dataclass(frozen=True)
class LevelCoverage:
    """Coverage facts for one h-fold sumset truncated at N."""

    h: int
    covered: bool
    smallest_gap: int | None
    largest_gap: int | None
    gap_count: int

    @property
    def covered_from(self) -> int:
        """Least c with [c, N] inside hA (0 when fully covered)."""
        return 0 if self.largest_gap is None else self.largest_gap + 1


@dataclass(frozen=True)
class OrderReport:
    spec: BasisSpec
    bound: int
    h_max: int
    empirical_order: int | None
    levels: tuple[LevelCoverage, ...]
    witness: int | None
    zero_in_basis: bool

    @property
    def exceeds_h_max(self) -> bool:
        return self.empirical_order is None

    @property
    def per_h_gaps(self) -> dict[int, int]:
        """Smallest uncovered integer for every level that fails to cover [0, N]."""
        return {lv.h: lv.smallest_gap for lv in self.levels if not lv.covered}

    def witnesses(self) -> list[int]:
        """Per-level smallest gaps plus the extremal witness, increasing."""
        found = set(self.per_h_gaps.values())
        if self.witness is not None:
            found.add(self.witness)
        return sorted(found)


def default_h_max(spec: BasisSpec) -> int:
    return spec.k + 3 if isinstance(spec, Polygonal) else 8


def _level(h: int, bitmap: engine.IntervalBitmap) -> LevelCoverage:
    gaps = np.flatnonzero(~bitmap.to_bools())
    if gaps.size == 0:
        return LevelCoverage(h, True, None, None, 0)
    return LevelCoverage(h, False, int(gaps[0]), int(gaps[-1]), int(gaps.size))


def empirical_order(
    spec: BasisSpec, bound: int, h_max: int | None = None, workers: int | None = None
) -> OrderReport:
    """Least h <= h_max whose truncated h-fold sumset covers all of [0, N].

    Bases containing 0 have nested sumsets, so the search stops at the first
    covering level. A 0-free basis can never cover 0; every level up to h_max
    is still examined so its per-level coverage is on record.
    """
    h_max = default_h_max(spec) if h_max is None else h_max
    if h_max < 1:
        raise InvalidParameterError(f"h_max must be >= 1, got {h_max}")
    base = to_bitmap(spec, bound)
    if base.popcount() == 0:
        raise InvalidParameterError(f"{spec} has no elements in [0, {bound}]")
    zero = contains_zero(spec)
    levels: list[LevelCoverage] = []
    order = None
    for h, bitmap in engine.hfold_levels(base, h_max, workers):
        lv = _level(h, bitmap)
        levels.append(lv)
        if lv.covered and order is None:
            order = h
            if zero:
                break
    witness = None
    if order is not None and order > 1:
        witness = levels[order - 2].largest_gap
    return OrderReport(spec, bound, h_max, order, tuple(levels), witness, zero)


def find_representation(n: int, spec: BasisSpec, h: int) -> list[int] | None:
    """Largest-first search for h members of ``spec`` summing to n.

    Parts come back nonincreasing; the first hit in lexicographically
    decreasing order is returned.
    """
    if n < 0:
        raise InvalidParameterError(f"n must be nonnegative, got {n}")
    if h < 1:
        raise InvalidParameterError(f"h must be a positive integer, got {h}")
    elems = enumerate_basis(spec, n)
    if not elems:
        return None
    lo = elems[0]
    dead: set[tuple[int, int, int]] = set()
    parts: list[int] = []

    def search(rem: int, left: int, cap: int) -> bool:
        # cap: largest index usable, keeps parts nonincreasing
        if left == 0:
            return rem == 0
        if rem < left * lo:
            return False
        key = (rem, left, cap)
        if key in dead:
            return False
        top = min(cap, bisect_right(elems, rem - (left - 1) * lo) - 1)
        for i in range(top, -1, -1):
            e = elems[i]
            if e * left < rem:
                break
            parts.append(e)
            if search(rem - e, left - 1, i):
                return True
            parts.pop()
        dead.add(key)
        return False

    return list(parts) if search(n, h, len(elems) - 1) else None


def oracle_hfold_membership(n: int, spec: BasisSpec, h: int) -> bool:
    """Brute-force check that n is a sum of h members of ``spec``.

    Independent of the bitmap engine: nested descending loops over the members
    up to n, closing the last level with a set lookup.
    """
    if n < 0 or h < 1:
        return False
    elems = enumerate_basis(spec, n)
    members = set(elems)
    desc = elems[::-1]

    def reach(rem: int, left: int, ceiling: int) -> bool:
        if left == 1:
            return rem <= ceiling and rem in members
        for e in desc:
            if e > ceiling or e > rem:
                continue
            if e * left < rem:
                return False
            if reach(rem - e, left - 1, e):
                return True
        return False

    return reach(n, h, n)


@dataclass(frozen=True)
class StabilityReport:
    spec: BasisSpec
    cutoff: int
    bound: int
    order_base: int | None
    order_augmented: int | None
    base_report: OrderReport
    augmented_report: OrderReport

    @property
    def stable(self) -> bool:
        return self.order_base is not None and self.order_base == self.order_augmented


def legendre_cutoff(m: int) -> int:
    return 28 * m**3


def stability_experiment(
    spec: BasisSpec,
    cutoff: int,
    bound: int,
    h_max: int | None = None,
    workers: int | None = None,
) -> StabilityReport:
    """Compare the empirical order of ``spec`` with that of spec ∪ {0, ..., cutoff-1}."""
    if cutoff < 2:
        raise InvalidParameterError(f"cutoff must be >= 2 so that F contains 0 and 1, got {cutoff}")
    if bound < 10 * cutoff:
        raise InvalidParameterError(f"bound {bound} must be at least 10 * cutoff = {10 * cutoff}")
    if isinstance(spec, Augmented):
        raise InvalidParameterError("stability experiments take a non-augmented basis")
    h_max = default_h_max(spec) if h_max is None else h_max
    base = empirical_order(spec, bound, h_max, workers)
    aug = empirical_order(Augmented.prefix(spec, cutoff), bound, h_max, workers)
    return StabilityReport(
        spec, cutoff, bound, base.empirical_order, aug.empirical_order, base, aug
    )


@dataclass(frozen=True)
class LegendreResult:
    m: int
    bound: int
    cutoff: int
    terms: int
    passed: bool
    counterexample: int | None


def verify_legendre(m: int, bound: int, workers: int | None = None) -> LegendreResult:
    """Check the four/five-term polygonal representation on [28m^3, N].

    Odd m: every integer in range is a sum of four (m+2)-gonal numbers.
    Even m: every v in range has v or v-1 among such four-term sums, i.e. v
    is a five-term sum with one part equal to 0 or 1.
    """
    if m < 3:
        raise InvalidParameterError(f"m must be >= 3, got {m}")
    cutoff = legendre_cutoff(m)
    if bound <= cutoff:
        raise InvalidParameterError(f"bound must exceed 28m^3 = {cutoff}, got {bound}")
    four = engine.hfold(to_bitmap(Polygonal(m + 2), bound), 4, workers=workers).to_bools()
    ok = four[cutoff:]
    if m % 2 == 0:
        ok = ok | four[cutoff - 1 : -1]
    bad = np.flatnonzero(~ok)
    first = int(bad[0]) + cutoff if bad.size else None
    return LegendreResult(m, bound, cutoff, 4 if m % 2 else 5, first is None, first)


__all__ = [
    "LevelCoverage",
    "OrderReport",
    "StabilityReport",
    "LegendreResult",
    "default_h_max",
    "empirical_order",
    "find_representation",
    "oracle_hfold_membership",
    "stability_experiment",
    "legendre_cutoff",
    "verify_legendre",
]
