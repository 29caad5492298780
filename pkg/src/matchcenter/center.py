"""Minimax center of a matching.

``lambda_at`` evaluates the worst focal-sum ratio lambda(o) of a matching at
a probe point; ``center_point`` minimizes that convex function and returns a
certificate: the center, the achieved lambda*, per-pair ratios, the active
set, and the optimality gap (the norm of the minimum-norm point of the
convex hull of active-pair gradients, zero at a true minimizer).

``helly_triple_reduction`` checks the planar Helly identity: the maximum of
lambda* over all pair triples equals lambda* of the whole matching.
``disks_common_residual`` reuses the same minimax engine for the smallest
uniform inflation a disk family needs to share a point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .geometry import Disk, Point, PointLike, as_point
from .matching import Instance, Matching, matched_pairs
from .minimax import MinimaxResult, minimize_convex_max, refine

__all__ = [
    "CenterCertificate",
    "DEFAULT_SOLVER_TOL",
    "DEFAULT_ACTIVATION_TOL",
    "DEFAULT_GAP_TOL",
    "focal_sum_ratios",
    "lambda_at",
    "center_of_pairs",
    "center_point",
    "optimality_certificate",
    "min_common_lambda",
    "helly_triple_reduction",
    "disks_common_residual",
]

DEFAULT_SOLVER_TOL = 1e-9
DEFAULT_ACTIVATION_TOL = 1e-7
DEFAULT_GAP_TOL = 1e-6


@dataclass(frozen=True)
class CenterCertificate:
    """Solution and optimality evidence for one minimax center computation.

    ``lambda_star`` is the maximum of ``ratios`` (clamped below at 1);
    ``active_set`` holds the pair indices whose ratio is within the
    activation tolerance of ``lambda_star``; ``optimality_gap`` is the
    subgradient-hull residual at the center.
    """

    center: Point
    lambda_star: float
    ratios: Tuple[float, ...]
    active_set: Tuple[int, ...]
    optimality_gap: float
    iterations: int


class _PairArrays:
    """Vectorized focal-sum-ratio evaluation for a fixed list of point pairs."""

    def __init__(self, pairs: Sequence[Tuple[Point, Point]]):
        if not pairs:
            raise ValueError("need at least one pair")
        self.ax = np.array([p.x for p, _ in pairs], dtype=float)
        self.ay = np.array([p.y for p, _ in pairs], dtype=float)
        self.bx = np.array([q.x for _, q in pairs], dtype=float)
        self.by = np.array([q.y for _, q in pairs], dtype=float)
        self.d = np.hypot(self.ax - self.bx, self.ay - self.by)
        if np.any(self.d == 0.0):
            raise ValueError("matched pair with zero length")
        xs = np.concatenate([self.ax, self.bx])
        ys = np.concatenate([self.ay, self.by])
        self.scale = float(math.hypot(xs.max() - xs.min(), ys.max() - ys.min()))

    def ratios(self, x: float, y: float) -> np.ndarray:
        da = np.hypot(self.ax - x, self.ay - y)
        db = np.hypot(self.bx - x, self.by - y)
        return (da + db) / self.d

    def value_batch(self, probes: np.ndarray) -> np.ndarray:
        px = probes[:, 0][:, None]
        py = probes[:, 1][:, None]
        da = np.hypot(px - self.ax[None, :], py - self.ay[None, :])
        db = np.hypot(px - self.bx[None, :], py - self.by[None, :])
        return ((da + db) / self.d[None, :]).max(axis=1)

    def subgradient(self, x: float, y: float) -> Tuple[float, float]:
        r = self.ratios(x, y)
        i = int(np.argmax(r))
        dax, day = x - self.ax[i], y - self.ay[i]
        dbx, dby = x - self.bx[i], y - self.by[i]
        na = math.hypot(dax, day)
        nb = math.hypot(dbx, dby)
        # at a focus the norm subdifferential contains 0: drop that term
        gx = (dax / na if na > 0.0 else 0.0) + (dbx / nb if nb > 0.0 else 0.0)
        gy = (day / na if na > 0.0 else 0.0) + (dby / nb if nb > 0.0 else 0.0)
        return gx / self.d[i], gy / self.d[i]

    def gradients(self, x: float, y: float, idx: Sequence[int]) -> np.ndarray:
        out = np.empty((len(idx), 2), dtype=float)
        for row, i in enumerate(idx):
            dax, day = x - self.ax[i], y - self.ay[i]
            dbx, dby = x - self.bx[i], y - self.by[i]
            na = math.hypot(dax, day)
            nb = math.hypot(dbx, dby)
            if na == 0.0 or nb == 0.0:
                raise ValueError(
                    "gradient undefined: probe point coincides with a matched point"
                )
            out[row, 0] = (dax / na + dbx / nb) / self.d[i]
            out[row, 1] = (day / na + dby / nb) / self.d[i]
        return out

    def hessian(self, x: float, y: float, i: int) -> np.ndarray:
        dax, day = x - self.ax[i], y - self.ay[i]
        dbx, dby = x - self.bx[i], y - self.by[i]
        na = math.hypot(dax, day)
        nb = math.hypot(dbx, dby)
        if na == 0.0 or nb == 0.0:
            raise ZeroDivisionError("hessian undefined at a matched point")
        ua = np.array([dax / na, day / na])
        ub = np.array([dbx / nb, dby / nb])
        eye = np.eye(2)
        return ((eye - np.outer(ua, ua)) / na + (eye - np.outer(ub, ub)) / nb) / self.d[i]

    def starts(self) -> List[Tuple[float, float]]:
        mids = list(zip(0.5 * (self.ax + self.bx), 0.5 * (self.ay + self.by)))
        cx = float(np.concatenate([self.ax, self.bx]).mean())
        cy = float(np.concatenate([self.ay, self.by]).mean())
        return [(float(x), float(y)) for x, y in mids] + [(cx, cy)]


def _cross(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def _active_system(arr: _PairArrays, x: float, y: float, active: Sequence[int]):
    """Residuals and Jacobian of the first-order system a minimax optimum
    with the given active pairs must satisfy.

    With two active pairs the optimum is where both ratios agree and their
    gradients are antiparallel (cross product zero); with three or more it is
    the common-equality point of the active ratios (solved least-squares when
    overdetermined). The hull certificate validates the result afterwards.
    """
    ratios = arr.ratios(x, y)
    grads = arr.gradients(x, y, active)
    if len(active) == 2:
        g1, g2 = grads
        h1 = arr.hessian(x, y, active[0])
        h2 = arr.hessian(x, y, active[1])
        res = np.array(
            [ratios[active[0]] - ratios[active[1]], _cross(g1, g2)]
        )
        jac = np.array(
            [
                g1 - g2,
                [
                    _cross(h1[:, 0], g2) + _cross(g1, h2[:, 0]),
                    _cross(h1[:, 1], g2) + _cross(g1, h2[:, 1]),
                ],
            ]
        )
        return res, jac
    res = np.array([ratios[active[0]] - ratios[k] for k in active[1:]])
    jac = np.array([grads[0] - grads[j] for j in range(1, len(active))])
    return res, jac


def _scaled_residual(arr: _PairArrays, x: float, y: float, active: Sequence[int]) -> float:
    ratios = arr.ratios(x, y)
    lam = float(ratios.max())
    parts = [abs(ratios[active[0]] - ratios[k]) / lam for k in active[1:]]
    if len(active) == 2:
        g1, g2 = arr.gradients(x, y, active)
        denom = math.hypot(*g1) * math.hypot(*g2)
        if denom == 0.0:
            return 0.0
        parts.append(abs(_cross(g1, g2)) / denom)
        if float(g1 @ g2) > 0.0:
            # parallel rather than antiparallel gradients: wrong root
            return math.inf
    return max(parts)


def _newton_run(
    arr: _PairArrays, x: float, y: float, scale: float, active: Sequence[int]
) -> Tuple[float, float, bool]:
    entry_value = float(arr.ratios(x, y).max())
    guard = entry_value + 1e-13 * max(1.0, entry_value)
    for _ in range(50):
        try:
            res, jac = _active_system(arr, x, y, active)
        except ZeroDivisionError:
            return x, y, False
        res_norm = float(np.linalg.norm(res))
        if _scaled_residual(arr, x, y, active) <= 1e-11:
            return x, y, True
        try:
            delta, *_ = np.linalg.lstsq(jac, -res, rcond=None)
        except np.linalg.LinAlgError:
            return x, y, False
        dn = float(math.hypot(delta[0], delta[1]))
        if not math.isfinite(dn) or dn == 0.0:
            return x, y, False
        if dn > 0.1 * scale:
            delta *= 0.1 * scale / dn
        t = 1.0
        accepted = False
        for _bt in range(20):
            nx, ny = x + t * delta[0], y + t * delta[1]
            try:
                new_res, _ = _active_system(arr, nx, ny, active)
            except ZeroDivisionError:
                t *= 0.5
                continue
            if (
                float(np.linalg.norm(new_res)) <= (1.0 - 1e-4 * t) * res_norm
                and float(arr.ratios(nx, ny).max()) <= guard
            ):
                x, y = nx, ny
                accepted = True
                break
            t *= 0.5
        if not accepted:
            return x, y, False
    return x, y, _scaled_residual(arr, x, y, active) <= 1e-11


def _gap_at(arr: _PairArrays, x: float, y: float, activation_tol: float) -> float:
    ratios = arr.ratios(x, y)
    lam = float(ratios.max())
    active = [int(i) for i in np.flatnonzero(ratios >= lam - activation_tol)]
    return _min_norm_in_hull(arr.gradients(x, y, active))


def _polish_round(
    arr: _PairArrays,
    x: float,
    y: float,
    scale: float,
    activation_tol: float,
    gap_trigger: float,
) -> Tuple[float, float]:
    try:
        entry_gap = _gap_at(arr, x, y, activation_tol)
    except ValueError:
        return x, y
    if entry_gap <= 1e-3 * gap_trigger:
        return x, y
    ratios = arr.ratios(x, y)
    lam = float(ratios.max())
    order = [int(i) for i in np.argsort(-ratios)]
    candidates = [(lam, entry_gap, x, y)]
    natural = max(2, min(4, sum(1 for r in ratios if lam - r <= 1e-4 * lam)))
    sizes = [natural] + [k for k in (2, 3, 4) if k != natural]
    for k in sizes:
        if k > len(order):
            continue
        nx, ny, _ok = _newton_run(arr, x, y, scale, order[:k])
        try:
            gap = _gap_at(arr, nx, ny, activation_tol)
        except ValueError:
            continue
        value = float(arr.ratios(nx, ny).max())
        candidates.append((value, gap, nx, ny))
        if gap <= gap_trigger and value <= min(c[0] for c in candidates) + 1e-12 * lam:
            break
    # smallest certificate gap among the (near-)minimal-value endpoints
    vmin = min(c[0] for c in candidates)
    value, gap, bx, by = min(
        (c for c in candidates if c[0] <= vmin + 1e-12 * max(1.0, vmin)),
        key=lambda c: c[1],
    )
    return bx, by


def _newton_polish(
    arr: _PairArrays,
    x: float,
    y: float,
    scale: float,
    activation_tol: float,
    gap_trigger: float,
) -> Tuple[float, float]:
    """Drive the active-set optimality system to machine precision.

    The pattern phase resolves the minimax value well but can stall along the
    nonsmooth valley where several ratios tie (the descent cone narrows as
    the optimum nears), which leaves the subgradient certificate loose. Each
    round runs a damped Newton iteration on the equality system of candidate
    active sets (top-k prefixes of the ratio ranking, k = 2..4), never lets
    the max ratio grow beyond rounding noise, and keeps the endpoint with the
    smallest subgradient-hull gap among those of (near-)minimal value.
    Rounds repeat because near-degenerate instances re-rank the candidates as
    the value drops; the loop stops at a fixed point.
    """
    for _ in range(8):
        nx, ny = _polish_round(arr, x, y, scale, activation_tol, gap_trigger)
        if nx == x and ny == y:
            break
        x, y = nx, ny
    return x, y


def _segment_distance_to_origin(u: np.ndarray, v: np.ndarray) -> float:
    w = v - u
    ww = float(w @ w)
    if ww == 0.0:
        return float(np.hypot(u[0], u[1]))
    t = min(1.0, max(0.0, float(-(u @ w)) / ww))
    p = u + t * w
    return float(np.hypot(p[0], p[1]))


def _min_norm_in_hull(vectors: np.ndarray) -> float:
    """Norm of the minimum-norm point of the convex hull of 2D vectors.

    Zero when no open half-plane through the origin contains every vector
    (then the origin lies in the hull); otherwise the minimum lies on a
    vertex or an edge, so scanning all vertex pairs suffices.
    """
    norms = np.hypot(vectors[:, 0], vectors[:, 1])
    if np.any(norms == 0.0):
        return 0.0
    if len(vectors) >= 2:
        ang = np.sort(np.arctan2(vectors[:, 1], vectors[:, 0]))
        gaps = np.diff(ang, append=ang[0] + 2.0 * math.pi)
        if float(gaps.max()) < math.pi - 1e-12:
            return 0.0
    best = float(norms.min())
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            best = min(best, _segment_distance_to_origin(vectors[i], vectors[j]))
    return best


def focal_sum_ratios(
    pairs: Sequence[Tuple[PointLike, PointLike]], o: PointLike
) -> List[float]:
    """Per-pair focal-sum ratios (|p-o| + |q-o|) / |p-q| at probe point o."""
    o = as_point(o)
    arr = _PairArrays([(as_point(p), as_point(q)) for p, q in pairs])
    return [float(v) for v in arr.ratios(o.x, o.y)]


def lambda_at(inst: Instance, m: Matching, o: PointLike) -> float:
    """Worst focal-sum ratio of the matching at ``o`` (>= 1 always)."""
    ratios = focal_sum_ratios(matched_pairs(inst, m), o)
    return max(max(ratios), 1.0)


def center_of_pairs(
    pairs: Sequence[Tuple[PointLike, PointLike]],
    tol: float = DEFAULT_SOLVER_TOL,
    activation_tol: float = DEFAULT_ACTIVATION_TOL,
) -> CenterCertificate:
    """Minimize the worst focal-sum ratio over any pair list; see
    ``center_point`` for the matching-level wrapper."""
    arr = _PairArrays([(as_point(p), as_point(q)) for p, q in pairs])
    slope = float(np.max(2.0 / arr.d))
    # the pattern phase only needs to land in the Newton polish's basin;
    # tighten it instead when the caller's tolerance asks for less than that
    step_min = max(tol / slope, 1e-7 * arr.scale)
    result = minimize_convex_max(
        arr.value_batch, arr.subgradient, arr.starts(), arr.scale, step_min
    )
    gap_trigger = DEFAULT_GAP_TOL * max(1.0, slope)
    x, y = _newton_polish(arr, result.x, result.y, arr.scale, activation_tol, gap_trigger)

    def certify(px: float, py: float):
        r = arr.ratios(px, py)
        lam = max(float(r.max()), 1.0)
        act = tuple(int(i) for i in np.flatnonzero(r >= lam - activation_tol))
        return r, lam, act, _min_norm_in_hull(arr.gradients(px, py, act))

    ratios, lam, active, gap = certify(x, y)
    # fall back to a denser, deeper pattern run if the certificate stays loose
    sweeps = result.sweeps
    for _ in range(2):
        if gap <= gap_trigger:
            break
        result = refine(arr.value_batch, result, arr.scale, tol / slope)
        sweeps = result.sweeps
        x, y = _newton_polish(
            arr, result.x, result.y, arr.scale, activation_tol, gap_trigger
        )
        ratios, lam, active, gap = certify(x, y)
    return CenterCertificate(
        center=Point(x, y),
        lambda_star=lam,
        ratios=tuple(float(v) for v in ratios),
        active_set=active,
        optimality_gap=float(gap),
        iterations=sweeps,
    )


def center_point(
    inst: Instance,
    m: Matching,
    tol: float = DEFAULT_SOLVER_TOL,
    activation_tol: float = DEFAULT_ACTIVATION_TOL,
) -> CenterCertificate:
    """The point minimizing lambda(o) for the matching, with certificate.

    For a max-sum matching the certified ``lambda_star`` never exceeds
    sqrt(2) (up to tolerance); for arbitrary matchings it may.
    """
    return center_of_pairs(matched_pairs(inst, m), tol=tol, activation_tol=activation_tol)


def optimality_certificate(
    inst: Instance,
    m: Matching,
    o: PointLike,
    activation_tol: float = DEFAULT_ACTIVATION_TOL,
) -> float:
    """Subgradient-hull gap of the matching's ratio function at ``o``.

    Zero certifies that ``o`` is a global minimizer of lambda (the function
    is convex); a positive gap is the norm of a descent direction's
    subgradient witness.
    """
    o = as_point(o)
    arr = _PairArrays(matched_pairs(inst, m))
    ratios = arr.ratios(o.x, o.y)
    lam = max(float(ratios.max()), 1.0)
    active = [int(i) for i in np.flatnonzero(ratios >= lam - activation_tol)]
    if not active:
        raise ValueError("empty active set")
    return _min_norm_in_hull(arr.gradients(o.x, o.y, active))


def min_common_lambda(
    inst: Instance, m: Matching, tol: float = DEFAULT_SOLVER_TOL
) -> float:
    """Smallest lambda >= 1 whose inflated ellipse regions share a point."""
    return center_point(inst, m, tol=tol).lambda_star


def helly_triple_reduction(
    inst: Instance, m: Matching, tol: float = DEFAULT_SOLVER_TOL
) -> Tuple[float, Tuple[int, int, int]]:
    """Maximum of lambda* over all triples of matched pairs, with the argmax
    triple. In the plane this equals the full matching's lambda* because the
    ellipse regions are convex."""
    pairs = matched_pairs(inst, m)
    if len(pairs) < 3:
        raise ValueError("triple reduction needs at least three matched pairs")
    best_lam = -math.inf
    best_triple: Optional[Tuple[int, int, int]] = None
    for triple in itertools.combinations(range(len(pairs)), 3):
        cert = center_of_pairs([pairs[i] for i in triple], tol=tol)
        if cert.lambda_star > best_lam:
            best_lam = cert.lambda_star
            best_triple = triple
    assert best_triple is not None
    return best_lam, best_triple


def disks_common_residual(
    disks: Sequence[Disk], tol: float = DEFAULT_SOLVER_TOL
) -> Tuple[float, Point]:
    """Minimum over o of max_i (|o - center_i| - radius_i), with a minimizer.

    Nonpositive residual means the disks share a point; the value is the
    uniform radius inflation that would make them just touch otherwise.
    """
    if not disks:
        raise ValueError("need at least one disk")
    cx = np.array([d.center.x for d in disks], dtype=float)
    cy = np.array([d.center.y for d in disks], dtype=float)
    rad = np.array([d.radius for d in disks], dtype=float)

    def value_batch(probes: np.ndarray) -> np.ndarray:
        dd = np.hypot(
            probes[:, 0][:, None] - cx[None, :], probes[:, 1][:, None] - cy[None, :]
        )
        return (dd - rad[None, :]).max(axis=1)

    def subgradient(x: float, y: float) -> Tuple[float, float]:
        dd = np.hypot(cx - x, cy - y) - rad
        i = int(np.argmax(dd))
        dx, dy = x - cx[i], y - cy[i]
        n = math.hypot(dx, dy)
        if n == 0.0:
            return 0.0, 0.0
        return dx / n, dy / n

    span = math.hypot(
        (cx + rad).max() - (cx - rad).min(), (cy + rad).max() - (cy - rad).min()
    )
    starts = [(float(x), float(y)) for x, y in zip(cx, cy)]
    starts.append((float(cx.mean()), float(cy.mean())))
    result = minimize_convex_max(
        value_batch, subgradient, starts, span, max(tol, 4e-16 * span)
    )
    return result.value, Point(result.x, result.y)
