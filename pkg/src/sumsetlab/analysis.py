"""Density profiles for the finite-stability hypotheses and residue obstructions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import engine
from .basis import Augmented, BasisSpec, Explicit, Polygonal, polygonal_value, to_bitmap
from .errors import InvalidParameterError

EVIDENCE_NOTE = "finite-N evidence, not proof"


@dataclass(frozen=True)
class Sample:
    n: int
    count: int
    ratio: float


@dataclass(frozen=True)
class CountingProfile:
    set_label: str
    bound: int
    samples: tuple[Sample, ...]
    note: str = EVIDENCE_NOTE

    def tail(self) -> tuple[Sample, ...]:
        """Samples in the top decade (n >= N/10)."""
        return tuple(s for s in self.samples if 10 * s.n >= self.bound)

    @property
    def tail_max_ratio(self) -> float:
        """Largest ratio over the top decade; the limsup estimate."""
        return max(s.ratio for s in self.tail())

    def ratio_at(self, n: int) -> float:
        for s in self.samples:
            if s.n == n:
                return s.ratio
        raise KeyError(n)


def geometric_grid(bound: int, points: int = 32, span: float = 1e3) -> list[int]:
    """About ``points`` integers spaced geometrically from bound/span to bound."""
    if bound < 1:
        raise InvalidParameterError("grid needs bound >= 1")
    lo = max(1.0, bound / span)
    raw = np.geomspace(lo, bound, points)
    grid = sorted({min(bound, max(1, int(round(v)))) for v in raw})
    grid[-1] = bound
    return grid


def density_profile(
    spec: BasisSpec,
    h: int,
    bound: int,
    grid: list[int] | None = None,
    workers: int | None = None,
) -> CountingProfile:
    """Sample (hA)(n)/n over ``grid`` for the truncated h-fold sumset of ``spec``."""
    grid = geometric_grid(bound) if grid is None else list(grid)
    if not grid or any(not 1 <= n <= bound for n in grid):
        raise InvalidParameterError(f"grid points must lie in [1, {bound}]")
    if any(a >= b for a, b in zip(grid, grid[1:])):
        raise InvalidParameterError("grid must be strictly increasing")
    bitmap = engine.hfold(to_bitmap(spec, bound), h, workers=workers)
    counts = engine.counting_many(bitmap, grid)
    samples = tuple(Sample(n, c, c / n) for n, c in zip(grid, counts))
    return CountingProfile(f"{h}*{spec}", bound, samples)


@dataclass(frozen=True)
class ObstructionReport:
    modulus: int
    h: int
    certificate: frozenset[int]
    attainable: frozenset[int]
    missing: frozenset[int] = field(default=frozenset())


def residue_set(spec: BasisSpec, modulus: int) -> frozenset[int]:
    """Residues mod ``modulus`` taken by the members of ``spec``.

    Polygonal residues come from one period x in [0, 2m); the period is
    checked over [0, 4m) before it is trusted.
    """
    if isinstance(spec, Polygonal):
        m = modulus
        seq = [polygonal_value(spec.k, x) % m for x in range(4 * m)]
        if seq[: 2 * m] != seq[2 * m :]:
            raise AssertionError(f"residues of poly:{spec.k} mod {m} not 2m-periodic")
        return frozenset(seq[: 2 * m])
    if isinstance(spec, Explicit):
        return frozenset(v % modulus for v in spec.values)
    if isinstance(spec, Augmented):
        return residue_set(spec.base, modulus) | {v % modulus for v in spec.finite_set}
    raise TypeError(f"not a basis spec: {spec!r}")


def modular_obstruction(spec: BasisSpec, h: int, modulus: int) -> ObstructionReport:
    """Residues mod m that no sum of h members of ``spec`` can reach."""
    if modulus < 2:
        raise InvalidParameterError(f"modulus must be >= 2, got {modulus}")
    if h < 1:
        raise InvalidParameterError(f"h must be a positive integer, got {h}")
    cert = residue_set(spec, modulus)
    reach = {0}
    for _ in range(h):
        reach = {(s + r) % modulus for s in reach for r in cert}
    attainable = frozenset(reach)
    missing = frozenset(range(modulus)) - attainable
    return ObstructionReport(modulus, h, cert, attainable, missing)


def cross_check_obstruction(report: ObstructionReport, bitmap: engine.IntervalBitmap) -> bool:
    """True iff no member of ``bitmap`` falls in a residue class the report calls missing."""
    if not report.missing:
        return True
    members = np.flatnonzero(bitmap.to_bools())
    bad = np.isin(members % report.modulus, sorted(report.missing))
    return not bool(bad.any())
