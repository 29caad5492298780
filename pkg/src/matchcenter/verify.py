"""Randomized property harness.

Seeded instance generation plus the theorem suites: the sqrt(2) bound for
max-sum matchings, the 2/sqrt(3) bound for uncolored max-sum matchings, the
common-disk-point property of squared-max-sum matchings, and the search for
max-sum instances whose disks intersect pairwise but share no common point.

Every trial is reproducible from (seed, n, distribution): instances come from
``numpy.random.default_rng`` (PCG64). Suites never assert internally; they
return one ``TrialReport`` per trial and dump a violating instance as a JSON
fixture when asked, so a failure can be replayed.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .center import (
    CenterCertificate,
    center_of_pairs,
    center_point,
    disks_common_residual,
)
from .fileio import save_json
from .geometry import SQRT2, Disk, Point
from .matching import (
    Instance,
    Matching,
    brute_force_max_sum,
    brute_force_uncolored_max_sum,
    matched_pairs,
    max_sum_matching,
)
from .minimax import ConvergenceError
from .proofgraph import Accepted, Improved, refute_or_accept

__all__ = [
    "DISTRIBUTIONS",
    "FINGERHUT_BOUND",
    "TrialReport",
    "DiskGapResult",
    "LoopResult",
    "random_instance",
    "random_uncolored_points",
    "verify_theorem_suite",
    "verify_uncolored_suite",
    "verify_squared_variant",
    "search_disk_gap",
    "refutation_loop",
]

DISTRIBUTIONS = ("uniform-square", "gaussian", "clustered", "collinear-jitter")
FINGERHUT_BOUND = 2.0 / math.sqrt(3.0)
DEFAULT_BOUND_TOL = 1e-7


@dataclass(frozen=True)
class TrialReport:
    """One verification trial; ``passed`` iff ``margin >= -tol`` for the
    suite's bound. Reproducible from (seed, n, distribution) alone, up to the
    runtime field."""

    seed: int
    n: int
    distribution: str
    lambda_star: float
    bound: float
    margin: float
    passed: bool
    worst_pair: int
    runtime: float


@dataclass(frozen=True)
class DiskGapResult:
    """A max-sum matching whose disks intersect pairwise yet share no point."""

    instance: Instance
    matching: Matching
    residual: float
    seed: int


@dataclass(frozen=True)
class LoopResult:
    status: str  # "ACCEPT" or "LIMIT"
    matching: Matching
    steps: Tuple[Improved, ...]
    certificate: Optional[CenterCertificate]


def _sample(rng: np.random.Generator, n: int, distribution: str, centers) -> np.ndarray:
    if distribution == "uniform-square":
        return rng.random((n, 2))
    if distribution == "gaussian":
        return rng.standard_normal((n, 2))
    if distribution == "clustered":
        idx = rng.integers(0, len(centers), n)
        return centers[idx] + 0.05 * rng.standard_normal((n, 2))
    if distribution == "collinear-jitter":
        # near-degenerate strip, 1e-3 thick: stresses bisector robustness
        return np.column_stack([rng.random(n), 1e-3 * rng.random(n)])
    raise ValueError(f"unknown distribution {distribution!r}; pick from {DISTRIBUTIONS}")


def random_instance(seed: int, n: int, distribution: str = "uniform-square") -> Instance:
    """Deterministic instance from (seed, n, distribution); blue points are
    redrawn until the instance passes disjointness validation."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    centers = rng.random((3, 2)) if distribution == "clustered" else None
    red = _sample(rng, n, distribution, centers)
    for _ in range(64):
        blue = _sample(rng, n, distribution, centers)
        try:
            return Instance.from_coords(red.tolist(), blue.tolist())
        except ValueError:
            continue
    raise RuntimeError(f"could not draw a disjoint instance for seed={seed}, n={n}")


def random_uncolored_points(seed: int, count: int) -> List[Point]:
    """Deterministic uncolored point set, pairwise separated by > 1e-6."""
    rng = np.random.default_rng(seed)
    for _ in range(64):
        pts = rng.random((count, 2))
        diff = pts[:, None, :] - pts[None, :, :]
        gap = np.hypot(diff[..., 0], diff[..., 1])
        np.fill_diagonal(gap, np.inf)
        if float(gap.min()) > 1e-6:
            return [Point(x, y) for x, y in pts.tolist()]
    raise RuntimeError(f"could not draw separated points for seed={seed}")


def _dump_fixture(inst: Instance, directory: Optional[Path], tag: str, seed: int) -> None:
    if directory is None:
        return
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    save_json(
        {
            "tag": tag,
            "seed": seed,
            "red": [[p.x, p.y] for p in inst.red],
            "blue": [[p.x, p.y] for p in inst.blue],
        },
        directory / f"{tag}-seed{seed}.json",
    )


def verify_theorem_suite(
    trials: int,
    n_range: Sequence[int] = (2, 3, 4, 5, 6, 7),
    distribution: str = "uniform-square",
    base_seed: int = 0,
    bound_tol: float = DEFAULT_BOUND_TOL,
    force_polynomial: bool = False,
    fixture_dir: Optional[Path] = None,
) -> List[TrialReport]:
    """sqrt(2) bound for max-sum matchings: brute-force matchings for n <= 7
    (the polynomial solver above, or when forced), lambda* computed per trial.
    Zero violations expected; a violation would falsify a proven theorem and
    therefore flags an implementation bug."""
    ns = tuple(int(n) for n in n_range)
    reports = []
    for t in range(trials):
        n = ns[t % len(ns)]
        seed = base_seed + t
        start = time.perf_counter()
        inst = random_instance(seed, n, distribution)
        if force_polynomial or n > 7:
            m = max_sum_matching(inst)
        else:
            m = brute_force_max_sum(inst)
        try:
            cert = center_point(inst, m)
            lam = cert.lambda_star
            worst = int(np.argmax(cert.ratios))
        except ConvergenceError as exc:
            lam = exc.best.value if exc.best is not None else math.inf
            worst = -1
        margin = SQRT2 - lam
        passed = margin >= -bound_tol
        if not passed:
            _dump_fixture(inst, fixture_dir, "theorem-violation", seed)
        reports.append(
            TrialReport(
                seed=seed,
                n=n,
                distribution=distribution,
                lambda_star=lam,
                bound=SQRT2,
                margin=margin,
                passed=passed,
                worst_pair=worst,
                runtime=time.perf_counter() - start,
            )
        )
    return reports


def verify_uncolored_suite(
    trials: int,
    sizes: Sequence[int] = (4, 6),
    base_seed: int = 0,
    bound_tol: float = DEFAULT_BOUND_TOL,
    fixture_dir: Optional[Path] = None,
) -> List[TrialReport]:
    """2/sqrt(3) bound for uncolored max-sum matchings (brute force, sizes
    must be even and <= 8 here to keep the double factorial small)."""
    sizes = tuple(int(s) for s in sizes)
    if any(s % 2 != 0 or s > 8 for s in sizes):
        raise ValueError(f"sizes must be even and <= 8, got {sizes}")
    reports = []
    for t in range(trials):
        size = sizes[t % len(sizes)]
        seed = base_seed + t
        start = time.perf_counter()
        pts = random_uncolored_points(seed, size)
        pairing = brute_force_uncolored_max_sum(pts)
        cert = center_of_pairs([(pts[i], pts[j]) for i, j in pairing])
        margin = FINGERHUT_BOUND - cert.lambda_star
        passed = margin >= -bound_tol
        reports.append(
            TrialReport(
                seed=seed,
                n=size,
                distribution="uniform-square",
                lambda_star=cert.lambda_star,
                bound=FINGERHUT_BOUND,
                margin=margin,
                passed=passed,
                worst_pair=int(np.argmax(cert.ratios)),
                runtime=time.perf_counter() - start,
            )
        )
    return reports


def verify_squared_variant(
    trials: int,
    n_range: Sequence[int] = (2, 3, 4, 5),
    base_seed: int = 0,
    residual_tol: float = DEFAULT_BOUND_TOL,
    fixture_dir: Optional[Path] = None,
) -> List[TrialReport]:
    """Common-disk-point property of matchings maximizing the total squared
    distance: the minimax residual min_o max_i (|o-c_i| - r_i) must be <=
    residual_tol. Reports store the residual in ``lambda_star`` with bound 0."""
    ns = tuple(int(n) for n in n_range)
    if any(n > 7 for n in ns):
        raise ValueError("squared-variant suite is brute-force only (n <= 7)")
    reports = []
    for t in range(trials):
        n = ns[t % len(ns)]
        seed = base_seed + t
        start = time.perf_counter()
        inst = random_instance(seed, n, "uniform-square")
        m = brute_force_max_sum(inst, squared=True)
        disks = [Disk(p, q) for p, q in matched_pairs(inst, m)]
        residual, at = disks_common_residual(disks)
        margin = -residual
        passed = residual <= residual_tol
        worst = int(
            np.argmax([math.hypot(at.x - d.center.x, at.y - d.center.y) - d.radius for d in disks])
        )
        if not passed:
            _dump_fixture(inst, fixture_dir, "squared-violation", seed)
        reports.append(
            TrialReport(
                seed=seed,
                n=n,
                distribution="uniform-square",
                lambda_star=residual,
                bound=0.0,
                margin=margin,
                passed=passed,
                worst_pair=worst,
                runtime=time.perf_counter() - start,
            )
        )
    return reports


def search_disk_gap(
    budget: int,
    n: int = 3,
    base_seed: int = 0,
    gap_tol: float = 1e-6,
    fixture_dir: Optional[Path] = None,
) -> Optional[DiskGapResult]:
    """Search seeded random instances for a Euclidean max-sum matching whose
    disks have no common point (minimax residual > gap_tol). Returns the
    first hit or None when the budget is exhausted."""
    for k in range(budget):
        seed = base_seed + k
        inst = random_instance(seed, n, "uniform-square")
        m = brute_force_max_sum(inst)
        disks = [Disk(p, q) for p, q in matched_pairs(inst, m)]
        residual, _ = disks_common_residual(disks)
        if residual > gap_tol:
            _dump_fixture(inst, fixture_dir, "disk-gap", seed)
            return DiskGapResult(instance=inst, matching=m, residual=residual, seed=seed)
    return None


def refutation_loop(
    inst: Instance,
    m: Matching,
    tol: float = DEFAULT_BOUND_TOL,
    max_steps: Optional[int] = None,
) -> LoopResult:
    """Iterate ``refute_or_accept`` until acceptance or the step limit.

    Totals strictly increase along the way, so the loop terminates: there are
    finitely many matchings.
    """
    steps: List[Improved] = []
    current = m
    while max_steps is None or len(steps) < max_steps:
        outcome = refute_or_accept(inst, current, tol=tol)
        if isinstance(outcome, Accepted):
            return LoopResult(
                status="ACCEPT",
                matching=current,
                steps=tuple(steps),
                certificate=outcome.certificate,
            )
        steps.append(outcome)
        current = outcome.matching
    return LoopResult(status="LIMIT", matching=current, steps=tuple(steps), certificate=None)
