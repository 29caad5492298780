"""Deterministic SVG figures: points, matched segments, diameter disks,
ellipse regions, and the center with its bisector rays.

Fixed 800x800 canvas, instance bounding box plus a 15% margin, fixed stroke
palette, fixed-precision coordinates: identical inputs produce byte-identical
output, so figures can be golden-file tested.
"""

from __future__ import annotations

import math
from typing import List, Optional

from .geometry import EllipseRegion, Point, bisector_direction
from .matching import Instance, Matching, matched_pairs

__all__ = ["render_svg"]

CANVAS = 800.0
MARGIN = 0.15

COLOR_BACKGROUND = "#ffffff"
COLOR_RED = "#c62828"
COLOR_BLUE = "#1565c0"
COLOR_SEGMENT = "#37474f"
COLOR_DISK = "#90a4ae"
COLOR_ELLIPSE = "#2e7d32"
COLOR_CENTER = "#000000"
COLOR_RAY = "#7b1fa2"


def _fmt(v: float) -> str:
    # fixed precision keeps output deterministic; avoid "-0.0000"
    s = f"{v:.4f}"
    return "0.0000" if s == "-0.0000" else s


class _Frame:
    def __init__(self, inst: Instance):
        xs = [p.x for p in inst.red] + [p.x for p in inst.blue]
        ys = [p.y for p in inst.red] + [p.y for p in inst.blue]
        self.cx = 0.5 * (min(xs) + max(xs))
        self.cy = 0.5 * (min(ys) + max(ys))
        span = max(max(xs) - min(xs), max(ys) - min(ys))
        if span == 0.0:
            span = 1.0
        self.span = span
        self.s = CANVAS / (span * (1.0 + 2.0 * MARGIN))

    def x(self, wx: float) -> float:
        return (wx - self.cx) * self.s + CANVAS / 2.0

    def y(self, wy: float) -> float:
        return CANVAS / 2.0 - (wy - self.cy) * self.s


def render_svg(
    inst: Instance,
    m: Optional[Matching] = None,
    center: Optional[Point] = None,
    lam: float = math.sqrt(2.0),
) -> str:
    """SVG text for the instance; pass a matching to draw segments, disks and
    the lambda-ellipses, and a center point to draw it with bisector rays."""
    f = _Frame(inst)
    parts: List[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS:.0f}" '
        f'height="{CANVAS:.0f}" viewBox="0 0 {CANVAS:.0f} {CANVAS:.0f}">',
        f'<rect x="0" y="0" width="{CANVAS:.0f}" height="{CANVAS:.0f}" '
        f'fill="{COLOR_BACKGROUND}"/>',
    ]
    pairs = matched_pairs(inst, m) if m is not None else []

    for p, q in pairs:
        mx, my = 0.5 * (p.x + q.x), 0.5 * (p.y + q.y)
        r = 0.5 * math.hypot(p.x - q.x, p.y - q.y)
        parts.append(
            f'<circle cx="{_fmt(f.x(mx))}" cy="{_fmt(f.y(my))}" r="{_fmt(r * f.s)}" '
            f'fill="none" stroke="{COLOR_DISK}" stroke-width="1" stroke-dasharray="4 3"/>'
        )
    for p, q in pairs:
        e = EllipseRegion(p, q, lam)
        angle = -math.degrees(e.axis_angle)
        cx, cy = f.x(e.center.x), f.y(e.center.y)
        parts.append(
            f'<ellipse cx="{_fmt(cx)}" cy="{_fmt(cy)}" rx="{_fmt(e.semi_major * f.s)}" '
            f'ry="{_fmt(e.semi_minor * f.s)}" fill="none" stroke="{COLOR_ELLIPSE}" '
            f'stroke-width="1.5" transform="rotate({_fmt(angle)} {_fmt(cx)} {_fmt(cy)})"/>'
        )
    for p, q in pairs:
        parts.append(
            f'<line x1="{_fmt(f.x(p.x))}" y1="{_fmt(f.y(p.y))}" x2="{_fmt(f.x(q.x))}" '
            f'y2="{_fmt(f.y(q.y))}" stroke="{COLOR_SEGMENT}" stroke-width="1.5"/>'
        )
    if center is not None:
        ray_len = 0.55 * f.span
        for p, q in pairs:
            b = bisector_direction(center, p, q)
            if b is None:
                continue
            ex, ey = center.x + ray_len * b[0], center.y + ray_len * b[1]
            parts.append(
                f'<line x1="{_fmt(f.x(center.x))}" y1="{_fmt(f.y(center.y))}" '
                f'x2="{_fmt(f.x(ex))}" y2="{_fmt(f.y(ey))}" stroke="{COLOR_RAY}" '
                f'stroke-width="1" stroke-dasharray="6 3"/>'
            )
    for p in inst.red:
        parts.append(
            f'<circle cx="{_fmt(f.x(p.x))}" cy="{_fmt(f.y(p.y))}" r="5" fill="{COLOR_RED}"/>'
        )
    for p in inst.blue:
        parts.append(
            f'<circle cx="{_fmt(f.x(p.x))}" cy="{_fmt(f.y(p.y))}" r="5" fill="{COLOR_BLUE}"/>'
        )
    if center is not None:
        cx, cy = f.x(center.x), f.y(center.y)
        parts.append(
            f'<path d="M {_fmt(cx - 7)} {_fmt(cy)} L {_fmt(cx + 7)} {_fmt(cy)} '
            f'M {_fmt(cx)} {_fmt(cy - 7)} L {_fmt(cx)} {_fmt(cy + 7)}" '
            f'stroke="{COLOR_CENTER}" stroke-width="2" fill="none"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
