"""Derivative-light minimizer for planar pointwise maxima of convex functions.

Both objectives in this package (the worst focal-sum ratio of a matching and
the worst inflation a disk family needs to share a point) are maxima of
smooth convex functions of a planar point. Their minimizers sit on nonsmooth
ridges where several terms tie, so plain gradient descent zigzags and plain
coordinate search can stall on a ridge that is not axis-aligned.

The engine therefore runs, from every supplied start:

  1. a short subgradient-descent phase with diminishing steps 0.25*scale/k,
     keeping the best iterate seen (subgradient steps are not monotone), and
  2. a shrinking-pattern refinement: probe a ring of unit directions at the
     current step, move to the best strictly improving probe, and otherwise
     halve the step and rotate the ring by the golden angle so the probe
     directions are quasi-dense over the iterations.

The best endpoint over all starts is then refined once more down to
``step_min``. Convexity makes every converged run global up to the final
step size; callers verify the result independently via an active-set
subgradient certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

__all__ = ["MinimaxResult", "ConvergenceError", "minimize_convex_max"]

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))

ValueBatch = Callable[[np.ndarray], np.ndarray]
Subgradient = Callable[[float, float], Tuple[float, float]]


@dataclass(frozen=True)
class MinimaxResult:
    x: float
    y: float
    value: float
    sweeps: int
    converged: bool


class ConvergenceError(RuntimeError):
    """Refinement exhausted its sweep budget; ``best`` holds the best iterate."""

    def __init__(self, message: str, best: Optional[MinimaxResult] = None):
        super().__init__(message)
        self.best = best


def _value(value_batch: ValueBatch, x: float, y: float) -> float:
    return float(value_batch(np.array([[x, y]], dtype=float))[0])


def _subgradient_phase(
    value_batch: ValueBatch,
    subgradient: Subgradient,
    x: float,
    y: float,
    scale: float,
    iters: int,
) -> Tuple[float, float, float]:
    best_x, best_y = x, y
    best_f = _value(value_batch, x, y)
    for k in range(1, iters + 1):
        gx, gy = subgradient(x, y)
        norm = math.hypot(gx, gy)
        if norm < 1e-300:
            break
        step = 0.25 * scale / k
        x -= step * gx / norm
        y -= step * gy / norm
        f = _value(value_batch, x, y)
        if f < best_f:
            best_x, best_y, best_f = x, y, f
    return best_x, best_y, best_f


def _pattern_phase(
    value_batch: ValueBatch,
    x: float,
    y: float,
    f: float,
    step: float,
    step_min: float,
    n_dirs: int,
    max_sweeps: int,
) -> Tuple[float, float, float, int, bool]:
    base = np.arange(n_dirs) * (2.0 * math.pi / n_dirs)
    step_cap = 4.0 * step
    phase = 0.0
    sweeps = 0
    while step > step_min and sweeps < max_sweeps:
        sweeps += 1
        ang = base + phase
        probes = np.empty((n_dirs, 2), dtype=float)
        probes[:, 0] = x + step * np.cos(ang)
        probes[:, 1] = y + step * np.sin(ang)
        vals = value_batch(probes)
        j = int(np.argmin(vals))
        if vals[j] < f:
            x, y, f = float(probes[j, 0]), float(probes[j, 1]), float(vals[j])
            # expand on success so long valleys are traversed geometrically
            step = min(2.0 * step, step_cap)
        else:
            step *= 0.5
            phase += GOLDEN_ANGLE
    return x, y, f, sweeps, step <= step_min


def minimize_convex_max(
    value_batch: ValueBatch,
    subgradient: Subgradient,
    starts: Sequence[Tuple[float, float]],
    scale: float,
    step_min: float,
    subgrad_iters: int = 25,
    coarse_step_min: Optional[float] = None,
    n_dirs: int = 16,
    max_sweeps: int = 4000,
) -> MinimaxResult:
    """Minimize a convex max function over the plane.

    ``value_batch`` evaluates the objective on an (k, 2) array of points;
    ``subgradient`` returns any subgradient at a point. The search resolves
    positions down to ``step_min`` (derive it from the target value tolerance
    divided by a slope bound). Raises ``ConvergenceError`` if the final
    refinement exhausts ``max_sweeps`` before reaching ``step_min``.
    """
    if not starts:
        raise ValueError("need at least one start point")
    scale = max(scale, 1e-300)
    step_min = max(step_min, 4e-16 * scale)
    if coarse_step_min is None:
        coarse_step_min = max(step_min, 1e-5 * scale)

    best: Optional[Tuple[float, float, float]] = None
    total_sweeps = 0
    seen: list[Tuple[float, float]] = []
    for sx, sy in starts:
        if any(math.hypot(sx - px, sy - py) <= 1e-12 * scale for px, py in seen):
            continue
        seen.append((sx, sy))
        x, y, f = _subgradient_phase(
            value_batch, subgradient, sx, sy, scale, subgrad_iters
        )
        total_sweeps += subgrad_iters
        x, y, f, sweeps, _ = _pattern_phase(
            value_batch, x, y, f, 0.05 * scale, coarse_step_min, n_dirs, max_sweeps
        )
        total_sweeps += sweeps
        if best is None or f < best[2]:
            best = (x, y, f)

    assert best is not None
    x, y, f = best
    step0 = max(1e-3 * scale, 32.0 * step_min)
    x, y, f, sweeps, converged = _pattern_phase(
        value_batch, x, y, f, step0, step_min, n_dirs, max_sweeps
    )
    total_sweeps += sweeps
    result = MinimaxResult(x=x, y=y, value=f, sweeps=total_sweeps, converged=converged)
    if not converged:
        raise ConvergenceError(
            f"minimax refinement did not reach step {step_min:g} within "
            f"{max_sweeps} sweeps (tolerance too tight for this instance)",
            best=result,
        )
    return result


def refine(
    value_batch: ValueBatch,
    result: MinimaxResult,
    scale: float,
    step_min: float,
    n_dirs: int = 48,
    max_sweeps: int = 6000,
) -> MinimaxResult:
    """One extra pattern refinement with a denser direction ring; used when an
    optimality certificate is not tight enough after the standard run."""
    scale = max(scale, 1e-300)
    step0 = max(1e-2 * scale, 1e3 * step_min)
    x, y, f, sweeps, converged = _pattern_phase(
        value_batch, result.x, result.y, result.value, step0, step_min, n_dirs, max_sweeps
    )
    return MinimaxResult(
        x=x, y=y, value=f, sweeps=result.sweeps + sweeps, converged=converged
    )
