"""One-shot reproduction suite: every theorem-level check at a chosen scale."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from . import engine
from .analysis import cross_check_obstruction, density_profile, modular_obstruction
from .basis import Explicit, Polygonal, to_bitmap
from .order import (
    empirical_order,
    legendre_cutoff,
    oracle_hfold_membership,
    stability_experiment,
    verify_legendre,
)

SCALES = {"quick": 10**4, "full": 10**6}
DENSITY_BOUND = 10**6


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def check_gauss(bound: int, workers=None) -> CheckResult:
    t = to_bitmap(Polygonal(3), bound)
    three = engine.hfold(t, 3, workers=workers)
    two = engine.hfold(t, 2, workers=workers)
    gaps = engine.complement_members(two, 0, min(bound, 100))
    first = gaps[0] if gaps else None
    ok = three.is_full() and not two.is_full() and first == 5
    return CheckResult("gauss", ok, f"3T covers [0,{bound}]={three.is_full()} 2T first gap={first}")


def residue_count(bound: int, residues, modulus: int) -> int:
    return sum((bound - r) // modulus + 1 for r in residues if r <= bound)


def check_proposition(bound: int, workers=None) -> CheckResult:
    two = engine.hfold(to_bitmap(Polygonal(3), bound), 2, workers=workers)
    gaps = engine.complement_members(two, 0, bound)
    in_class = sum(1 for g in gaps if g % 9 in (5, 8))
    expected = residue_count(bound, (5, 8), 9)
    report = modular_obstruction(Polygonal(3), 2, 9)
    ok = (
        in_class == expected
        and report.missing == {5, 8}
        and cross_check_obstruction(report, two)
    )
    return CheckResult(
        "proposition-mod9",
        ok,
        f"uncovered in 5,8 mod 9: {in_class}/{expected}; missing residues {sorted(report.missing)}",
    )


def check_lagrange(bound: int, workers=None) -> CheckResult:
    sq = to_bitmap(Polygonal(4), bound)
    four = engine.hfold(sq, 4, workers=workers)
    three = engine.hfold(sq, 3, workers=workers)
    gaps = set(engine.complement_members(three, 0, bound))
    sevens = all(v in gaps for v in range(7, bound + 1, 8))
    ok = four.is_full() and 7 in gaps and sevens
    return CheckResult(
        "lagrange", ok, f"4S full={four.is_full()} 3S misses all 7 mod 8={sevens}"
    )


def check_fermat_cauchy(bound: int, workers=None) -> CheckResult:
    bad = []
    for k in range(3, 9):
        rep = empirical_order(Polygonal(k), bound, k + 2, workers)
        witness_ok = rep.witness is not None and not oracle_hfold_membership(
            rep.witness, Polygonal(k), k - 1
        )
        gaps_ok = all(
            not oracle_hfold_membership(g, Polygonal(k), h) for h, g in rep.per_h_gaps.items()
        )
        if rep.empirical_order != k or not witness_ok or not gaps_ok:
            bad.append(k)
    return CheckResult("fermat-cauchy", not bad, f"k=3..8 at N={bound}; failing k: {bad or 'none'}")


def check_legendre(bound: int, workers=None) -> CheckResult:
    results = [verify_legendre(m, bound, workers) for m in (3, 4)]
    detail = "; ".join(
        f"m={r.m}: {'pass' if r.passed else f'fails at {r.counterexample}'}" for r in results
    )
    return CheckResult("legendre", all(r.passed for r in results), detail)


STABILITY_CASES = (
    (3, 1000, 3, 3, True),
    (4, 1000, 4, 4, True),
    (5, legendre_cutoff(3), 5, 4, False),
    (6, legendre_cutoff(4), 6, 5, False),
)


def check_stability(bound: int, workers=None) -> CheckResult:
    parts, ok = [], True
    for k, cutoff, want_base, want_aug, want_stable in STABILITY_CASES:
        rep = stability_experiment(Polygonal(k), cutoff, max(bound, 10 * cutoff), workers=workers)
        got = (rep.order_base, rep.order_augmented, rep.stable)
        hit = got == (want_base, want_aug, want_stable)
        ok &= hit
        parts.append(f"k={k} C={cutoff}: ({got[0]},{got[1]}) {'stable' if got[2] else 'unstable'}"
                     + ("" if hit else f" [expected ({want_base},{want_aug})]"))
    return CheckResult("finite-stability", ok, "; ".join(parts))


def check_density(workers=None) -> CheckResult:
    bound = DENSITY_BOUND
    one = density_profile(Polygonal(3), 1, bound, workers=workers)
    two = density_profile(Polygonal(3), 2, bound, workers=workers)
    tail = [s.ratio for s in one.tail()]
    decreasing = all(a > b for a, b in zip(tail, tail[1:]))
    at_top = one.ratio_at(bound)
    ok = at_top <= 0.0015 and decreasing and two.tail_max_ratio <= 0.78
    return CheckResult(
        "density-evidence",
        ok,
        f"T(N)/N={at_top:.6f} tail decreasing={decreasing} 2T tail max={two.tail_max_ratio:.4f}",
    )


def check_oracle(cases: int, seed: int = 0, workers=None) -> CheckResult:
    rng = random.Random(seed)
    mismatches = 0
    for _ in range(cases):
        n_bound = rng.randint(1, 2000)
        if rng.random() < 0.5:
            spec = Polygonal(rng.randint(3, 8))
        else:
            spec = Explicit(sorted(rng.sample(range(n_bound + 1), rng.randint(1, 12))))
        h = rng.randint(1, 5)
        n = rng.randint(0, n_bound)
        bitmap = engine.hfold(to_bitmap(spec, n_bound), h, workers=workers)
        if (n in bitmap) != oracle_hfold_membership(n, spec, h):
            mismatches += 1
    return CheckResult("engine-vs-oracle", mismatches == 0, f"{cases} random cases, {mismatches} mismatches")


def verify_paper(
    scale: str = "quick", workers=None, emit: Callable[[str], None] | None = None
) -> list[CheckResult]:
    """Run every check at ``scale`` and return the results in a fixed order."""
    bound = SCALES[scale]
    fc_bound = 10**5 if scale == "full" else bound
    jobs = [
        lambda: check_gauss(bound, workers),
        lambda: check_proposition(bound, workers),
        lambda: check_lagrange(bound, workers),
        lambda: check_fermat_cauchy(fc_bound, workers),
        lambda: check_legendre(bound, workers),
        lambda: check_stability(bound, workers),
        lambda: check_density(workers),
        lambda: check_oracle(500 if scale == "full" else 100, workers=workers),
    ]
    results = []
    for job in jobs:
        start = time.perf_counter()
        res = job()
        res = CheckResult(res.name, res.passed, res.detail, time.perf_counter() - start)
        results.append(res)
        if emit:
            emit(format_result(res))
    return results


def format_result(res: CheckResult) -> str:
    status = "PASS" if res.passed else "FAIL"
    return f"{status} {res.name:<18} {res.seconds:7.3f}s  {res.detail}"
