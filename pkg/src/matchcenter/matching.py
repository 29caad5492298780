"""Bichromatic instances and max-sum matchings.

The polynomial solver runs an exact O(n^3) assignment algorithm on the
negated distance matrix (``scipy.optimize.linear_sum_assignment``); the
brute-force enumerators are the independent oracles the solver is checked
against and the only route for the uncolored variant.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from .geometry import Point, PointLike, as_point, default_tolerance, dist

__all__ = [
    "Instance",
    "Matching",
    "OracleSizeError",
    "total_distance",
    "matched_pairs",
    "max_sum_matching",
    "brute_force_max_sum",
    "brute_force_uncolored_max_sum",
    "all_uncolored_pairings",
    "two_swap_improve",
]

BRUTE_FORCE_MAX_N = 8
UNCOLORED_MAX_POINTS = 16
SWAP_GAIN_TOL = 1e-12


class OracleSizeError(ValueError):
    """Raised when a brute-force enumeration would be factorially large."""


@dataclass(frozen=True)
class Instance:
    """A bichromatic planar point set with equally many red and blue points.

    The two color classes must be disjoint as point sets: no red point may
    coincide with a blue point within the scale-aware default tolerance.
    Duplicate points of the same color are allowed.
    """

    red: Tuple[Point, ...]
    blue: Tuple[Point, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "red", tuple(as_point(p) for p in self.red))
        object.__setattr__(self, "blue", tuple(as_point(p) for p in self.blue))
        if len(self.red) != len(self.blue):
            raise ValueError(
                f"need equally many red and blue points, got {len(self.red)} vs {len(self.blue)}"
            )
        if not self.red:
            raise ValueError("instance must contain at least one pair of points")
        tol = default_tolerance(self.diameter)
        if self.min_cross_distance() <= tol:
            raise ValueError(
                "red and blue point sets must be disjoint: a red point coincides "
                "with a blue point within tolerance"
            )

    @classmethod
    def from_coords(
        cls, red: Sequence[PointLike], blue: Sequence[PointLike]
    ) -> "Instance":
        return cls(tuple(as_point(p) for p in red), tuple(as_point(p) for p in blue))

    @property
    def n(self) -> int:
        return len(self.red)

    @cached_property
    def diameter(self) -> float:
        """Bounding-box diagonal over all points (scale proxy for tolerances)."""
        xs = [p.x for p in self.red] + [p.x for p in self.blue]
        ys = [p.y for p in self.red] + [p.y for p in self.blue]
        return math.hypot(max(xs) - min(xs), max(ys) - min(ys))

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        """Read-only (n, n) matrix of red-to-blue distances."""
        r = np.array([(p.x, p.y) for p in self.red], dtype=float)
        b = np.array([(p.x, p.y) for p in self.blue], dtype=float)
        d = np.hypot(r[:, None, 0] - b[None, :, 0], r[:, None, 1] - b[None, :, 1])
        d.flags.writeable = False
        return d

    def min_cross_distance(self) -> float:
        r = np.array([(p.x, p.y) for p in self.red], dtype=float)
        b = np.array([(p.x, p.y) for p in self.blue], dtype=float)
        if self.n > 512:
            from scipy.spatial import cKDTree

            gaps, _ = cKDTree(b).query(r, k=1)
            return float(np.min(gaps))
        d = np.hypot(r[:, None, 0] - b[None, :, 0], r[:, None, 1] - b[None, :, 1])
        return float(d.min())


@dataclass(frozen=True)
class Matching:
    """A perfect red-blue matching: pairs of (red_index, blue_index) plus the
    total Euclidean length of the matched segments."""

    pairs: Tuple[Tuple[int, int], ...]
    total: float

    @classmethod
    def of(cls, inst: Instance, pairs: Sequence[Tuple[int, int]]) -> "Matching":
        """Validate ``pairs`` against ``inst``, sort by red index, and compute
        the total."""
        norm = _checked_pairs(inst, pairs)
        total = sum(dist(inst.red[i], inst.blue[j]) for i, j in norm)
        return cls(norm, total)


def _checked_pairs(
    inst: Instance, pairs: Sequence[Tuple[int, int]]
) -> Tuple[Tuple[int, int], ...]:
    n = inst.n
    if len(pairs) != n:
        raise ValueError(f"matching must contain exactly {n} pairs, got {len(pairs)}")
    reds = []
    blues = []
    for i, j in pairs:
        i, j = int(i), int(j)
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"pair ({i}, {j}) out of range for n={n}")
        reds.append(i)
        blues.append(j)
    if sorted(reds) != list(range(n)) or sorted(blues) != list(range(n)):
        raise ValueError("matching indices must each be a permutation of 0..n-1")
    return tuple(sorted((int(i), int(j)) for i, j in pairs))


def total_distance(inst: Instance, m: Matching) -> float:
    """Sum of matched segment lengths, recomputed from the instance."""
    pairs = _checked_pairs(inst, m.pairs)
    return sum(dist(inst.red[i], inst.blue[j]) for i, j in pairs)


def matched_pairs(inst: Instance, m: Matching) -> List[Tuple[Point, Point]]:
    """The matched point pairs of ``m`` in red-index order."""
    pairs = _checked_pairs(inst, m.pairs)
    return [(inst.red[i], inst.blue[j]) for i, j in pairs]


def max_sum_matching(inst: Instance) -> Matching:
    """A matching maximizing the total Euclidean length of matched pairs.

    Exact: solves the assignment problem on the negated distance matrix.
    Any optimum may be returned under ties.
    """
    d = inst.distance_matrix
    rows, cols = linear_sum_assignment(-d)
    pairs = tuple((int(i), int(j)) for i, j in zip(rows, cols))
    return Matching.of(inst, pairs)


@lru_cache(maxsize=None)
def _permutation_array(n: int) -> np.ndarray:
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    perms.flags.writeable = False
    return perms


def brute_force_max_sum(inst: Instance, squared: bool = False) -> Matching:
    """Exhaustive max-sum matching over all n! pairings (oracle, n <= 8).

    With ``squared=True`` the total of squared lengths is maximized instead.
    Ties resolve to the lexicographically smallest pair list.
    """
    n = inst.n
    if n > BRUTE_FORCE_MAX_N:
        raise OracleSizeError(
            f"brute-force matching refuses n={n} > {BRUTE_FORCE_MAX_N} (factorial blowup)"
        )
    d = inst.distance_matrix
    if squared:
        d = d * d
    perms = _permutation_array(n)
    totals = d[np.arange(n)[None, :], perms].sum(axis=1)
    # argmax returns the first maximum; permutations are in lexicographic order
    best = perms[int(np.argmax(totals))]
    return Matching.of(inst, tuple((i, int(best[i])) for i in range(n)))


def all_uncolored_pairings(count: int) -> Iterator[Tuple[Tuple[int, int], ...]]:
    """All (count-1)!! perfect pairings of ``range(count)``, in lexicographic
    order of the pair list; ``count`` must be even."""
    if count % 2 != 0:
        raise ValueError(f"cannot pair an odd number of points ({count})")

    def rec(avail: Tuple[int, ...]) -> Iterator[Tuple[Tuple[int, int], ...]]:
        if not avail:
            yield ()
            return
        first = avail[0]
        rest = avail[1:]
        for k, partner in enumerate(rest):
            remaining = rest[:k] + rest[k + 1 :]
            for tail in rec(remaining):
                yield ((first, partner),) + tail

    return rec(tuple(range(count)))


def brute_force_uncolored_max_sum(points: Sequence[PointLike]) -> List[Tuple[int, int]]:
    """Exhaustive max-sum perfect matching of uncolored points (<= 16).

    Returns index pairs (i, j) with i < j; ties resolve to the
    lexicographically smallest pair list.
    """
    pts = [as_point(p) for p in points]
    count = len(pts)
    if count % 2 != 0:
        raise ValueError(f"need an even number of points, got {count}")
    if count > UNCOLORED_MAX_POINTS:
        raise OracleSizeError(
            f"uncolored brute force refuses {count} > {UNCOLORED_MAX_POINTS} points"
        )
    for i in range(count):
        for j in range(i + 1, count):
            if dist(pts[i], pts[j]) == 0.0:
                raise ValueError(f"points {i} and {j} coincide")
    d = [[dist(p, q) for q in pts] for p in pts]
    best_total = -math.inf
    best: Optional[Tuple[Tuple[int, int], ...]] = None
    for pairing in all_uncolored_pairings(count):
        total = sum(d[i][j] for i, j in pairing)
        if total > best_total:
            best_total = total
            best = pairing
    assert best is not None
    return list(best)


def two_swap_improve(inst: Instance, m: Matching) -> Matching:
    """Greedy 2-swap local search: repeatedly apply the best strict pairwise
    exchange until none improves the total by more than ``SWAP_GAIN_TOL``.

    The total never decreases; the result admits no improving 2-swap.
    """
    d = inst.distance_matrix
    pairs = list(_checked_pairs(inst, m.pairs))
    n = len(pairs)
    while True:
        best_gain = SWAP_GAIN_TOL
        best_swap = None
        for a in range(n):
            ia, ja = pairs[a]
            for b in range(a + 1, n):
                ib, jb = pairs[b]
                gain = d[ia, jb] + d[ib, ja] - d[ia, ja] - d[ib, jb]
                if gain > best_gain:
                    best_gain = gain
                    best_swap = (a, b)
        if best_swap is None:
            break
        a, b = best_swap
        ia, ja = pairs[a]
        ib, jb = pairs[b]
        pairs[a] = (ia, jb)
        pairs[b] = (ib, ja)
    return Matching.of(inst, pairs)
