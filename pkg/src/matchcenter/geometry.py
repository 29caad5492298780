"""Planar primitives: points, diameter disks, and focal-sum ellipse regions.

All containment predicates are closed-region tests with an explicit absolute
tolerance: a point within ``tol`` of a boundary counts as contained.
``default_tolerance`` derives a scale-aware tolerance from a length (pass the
instance diameter), which keeps the predicates robust without exact
arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

__all__ = [
    "SQRT2",
    "Point",
    "PointLike",
    "Disk",
    "EllipseRegion",
    "as_point",
    "default_tolerance",
    "dist",
    "ellipse_contains",
    "disk_contains",
    "disks_intersect",
    "bisector_direction",
    "reflection_residual",
]

SQRT2 = math.sqrt(2.0)


def default_tolerance(scale: float = 0.0) -> float:
    """Absolute tolerance ``1e-9 * (1 + scale)``; pass the instance diameter."""
    return 1e-9 * (1.0 + abs(scale))


@dataclass(frozen=True)
class Point:
    """A point in the plane. Coordinates are coerced to float and must be finite."""

    x: float
    y: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"coordinates must be finite, got ({self.x!r}, {self.y!r})")

    def __iter__(self):
        return iter((self.x, self.y))


PointLike = Union[Point, Tuple[float, float]]


def as_point(p: PointLike) -> Point:
    """Coerce a ``Point`` or ``(x, y)`` pair to a validated ``Point``."""
    if isinstance(p, Point):
        return p
    x, y = p
    return Point(x, y)


def dist(p: PointLike, q: PointLike) -> float:
    """Euclidean distance between two points."""
    p = as_point(p)
    q = as_point(q)
    return math.hypot(p.x - q.x, p.y - q.y)


def _unit(dx: float, dy: float) -> Tuple[float, float]:
    n = math.hypot(dx, dy)
    if n == 0.0:
        raise ValueError("cannot normalize a zero vector")
    return dx / n, dy / n


@dataclass(frozen=True)
class Disk:
    """Closed disk whose diameter is the segment between the defining pair.

    Center and radius are derived: the midpoint of the pair and half its
    distance. By Thales, a point sees the pair under an angle >= pi/2 exactly
    when it lies in the disk.
    """

    focus_a: Point
    focus_b: Point

    def __post_init__(self) -> None:
        object.__setattr__(self, "focus_a", as_point(self.focus_a))
        object.__setattr__(self, "focus_b", as_point(self.focus_b))
        if dist(self.focus_a, self.focus_b) == 0.0:
            raise ValueError("defining pair must be two distinct points")

    @property
    def center(self) -> Point:
        return Point(
            0.5 * (self.focus_a.x + self.focus_b.x),
            0.5 * (self.focus_a.y + self.focus_b.y),
        )

    @property
    def radius(self) -> float:
        return 0.5 * dist(self.focus_a, self.focus_b)


@dataclass(frozen=True)
class EllipseRegion:
    """Closed convex region bounded by the ellipse with the given foci whose
    major axis is ``lam`` times the focal distance.

    ``lam`` must be >= 1; at exactly 1 the region degenerates to the focal
    segment. Semi-axes follow from the focal distance d: semi-major
    ``lam*d/2`` and semi-minor ``(d/2)*sqrt(lam**2 - 1)``.
    """

    focus_a: Point
    focus_b: Point
    lam: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "focus_a", as_point(self.focus_a))
        object.__setattr__(self, "focus_b", as_point(self.focus_b))
        object.__setattr__(self, "lam", float(self.lam))
        if not math.isfinite(self.lam) or self.lam < 1.0:
            raise ValueError(f"lam must be finite and >= 1, got {self.lam!r}")
        if dist(self.focus_a, self.focus_b) == 0.0:
            raise ValueError("foci must be two distinct points")

    @property
    def focal_distance(self) -> float:
        return dist(self.focus_a, self.focus_b)

    @property
    def semi_major(self) -> float:
        return 0.5 * self.lam * self.focal_distance

    @property
    def semi_minor(self) -> float:
        return 0.5 * self.focal_distance * math.sqrt(self.lam * self.lam - 1.0)

    @property
    def center(self) -> Point:
        return Point(
            0.5 * (self.focus_a.x + self.focus_b.x),
            0.5 * (self.focus_a.y + self.focus_b.y),
        )

    @property
    def axis_angle(self) -> float:
        """Angle of the major axis (focus_a toward focus_b) against the x axis."""
        return math.atan2(
            self.focus_b.y - self.focus_a.y, self.focus_b.x - self.focus_a.x
        )

    def boundary_point(self, t: float) -> Point:
        """Boundary point at parameter ``t``: center-frame ``(a*cos t, b*sin t)``
        rotated into the focal frame."""
        u = self.semi_major * math.cos(t)
        v = self.semi_minor * math.sin(t)
        ca = math.cos(self.axis_angle)
        sa = math.sin(self.axis_angle)
        c = self.center
        return Point(c.x + u * ca - v * sa, c.y + u * sa + v * ca)


def ellipse_contains(e: EllipseRegion, z: PointLike, tol: Optional[float] = None) -> bool:
    """Closed containment test: focal sum of ``z`` <= lam * focal distance + tol."""
    z = as_point(z)
    if tol is None:
        tol = default_tolerance(e.lam * e.focal_distance)
    s = dist(e.focus_a, z) + dist(e.focus_b, z)
    return s <= e.lam * e.focal_distance + tol


def disk_contains(d: Disk, z: PointLike, tol: Optional[float] = None) -> bool:
    """Closed containment test: distance from ``z`` to the center <= radius + tol."""
    z = as_point(z)
    if tol is None:
        tol = default_tolerance(2.0 * d.radius)
    return dist(z, d.center) <= d.radius + tol


def disks_intersect(d1: Disk, d2: Disk, tol: Optional[float] = None) -> bool:
    """True when the closed disks overlap: center gap <= radius sum + tol."""
    if tol is None:
        tol = default_tolerance(2.0 * (d1.radius + d2.radius))
    return dist(d1.center, d2.center) <= d1.radius + d2.radius + tol


def bisector_direction(
    o: PointLike,
    p: PointLike,
    q: PointLike,
    degenerate_tol: float = 1e-12,
) -> Optional[Tuple[float, float]]:
    """Unit direction of the ray from ``o`` bisecting the rays toward ``p`` and ``q``.

    Returns ``None`` when the two rays are antipodal within ``degenerate_tol``
    (``o`` on the open segment pq), in which case no single bisecting ray
    exists. Raises if ``o`` coincides with ``p`` or ``q``.
    """
    o = as_point(o)
    p = as_point(p)
    q = as_point(q)
    if dist(o, p) == 0.0 or dist(o, q) == 0.0:
        raise ValueError("bisector undefined: apex coincides with an endpoint")
    ux, uy = _unit(p.x - o.x, p.y - o.y)
    vx, vy = _unit(q.x - o.x, q.y - o.y)
    sx, sy = ux + vx, uy + vy
    n = math.hypot(sx, sy)
    if n <= degenerate_tol:
        return None
    return sx / n, sy / n


def reflection_residual(
    e: EllipseRegion,
    o: PointLike,
    boundary_tol: Optional[float] = None,
) -> float:
    """Angle mismatch between the two focal rays and the tangent line at ``o``.

    ``o`` must lie on the boundary of ``e`` (focal sum within ``boundary_tol``
    of ``lam * focal_distance``; default ``1e-6`` relative). The tangent
    direction is the perpendicular of the focal bisector at ``o``, and the
    returned residual is the absolute difference of the two unsigned ray/line
    angles, which is ~0 for genuine boundary points.
    """
    o = as_point(o)
    target = e.lam * e.focal_distance
    if boundary_tol is None:
        boundary_tol = 1e-6 * target
    s = dist(e.focus_a, o) + dist(e.focus_b, o)
    if abs(s - target) > boundary_tol:
        raise ValueError(
            f"point is not on the ellipse boundary: focal sum {s!r} vs {target!r}"
        )
    b = bisector_direction(o, e.focus_a, e.focus_b)
    if b is None:
        raise ValueError("tangent undefined: point lies on the focal segment")
    tx, ty = -b[1], b[0]
    ux, uy = _unit(e.focus_a.x - o.x, e.focus_a.y - o.y)
    vx, vy = _unit(e.focus_b.x - o.x, e.focus_b.y - o.y)
    alpha = math.acos(min(1.0, abs(ux * tx + uy * ty)))
    beta = math.acos(min(1.0, abs(vx * tx + vy * ty)))
    return abs(alpha - beta)
