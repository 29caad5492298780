"""Max-sum bichromatic matchings, their minimax center points, and
executable optimality certificates."""

from .geometry import (
    SQRT2,
    Disk,
    EllipseRegion,
    Point,
    bisector_direction,
    default_tolerance,
    disk_contains,
    disks_intersect,
    dist,
    ellipse_contains,
    reflection_residual,
)
from .matching import (
    Instance,
    Matching,
    OracleSizeError,
    brute_force_max_sum,
    brute_force_uncolored_max_sum,
    matched_pairs,
    max_sum_matching,
    total_distance,
    two_swap_improve,
)
from .center import (
    CenterCertificate,
    center_of_pairs,
    center_point,
    disks_common_residual,
    helly_triple_reduction,
    lambda_at,
    min_common_lambda,
    optimality_certificate,
)
from .minimax import ConvergenceError
from .proofgraph import (
    Accepted,
    AlternatingCycle,
    ColoredGraph,
    EdgeColor,
    Improved,
    ToleranceFailure,
    apply_cycle_swap,
    build_graph,
    find_alternating_cycle,
    refute_or_accept,
)
from .verify import (
    TrialReport,
    random_instance,
    refutation_loop,
    search_disk_gap,
    verify_squared_variant,
    verify_theorem_suite,
    verify_uncolored_suite,
)

__version__ = "0.1.0"

__all__ = [
    "SQRT2",
    "Point",
    "Disk",
    "EllipseRegion",
    "dist",
    "default_tolerance",
    "ellipse_contains",
    "disk_contains",
    "disks_intersect",
    "bisector_direction",
    "reflection_residual",
    "Instance",
    "Matching",
    "OracleSizeError",
    "total_distance",
    "matched_pairs",
    "max_sum_matching",
    "brute_force_max_sum",
    "brute_force_uncolored_max_sum",
    "two_swap_improve",
    "CenterCertificate",
    "ConvergenceError",
    "lambda_at",
    "center_of_pairs",
    "center_point",
    "optimality_certificate",
    "min_common_lambda",
    "helly_triple_reduction",
    "disks_common_residual",
    "EdgeColor",
    "ColoredGraph",
    "AlternatingCycle",
    "ToleranceFailure",
    "Accepted",
    "Improved",
    "build_graph",
    "find_alternating_cycle",
    "apply_cycle_swap",
    "refute_or_accept",
    "TrialReport",
    "random_instance",
    "refutation_loop",
    "search_disk_gap",
    "verify_theorem_suite",
    "verify_uncolored_suite",
    "verify_squared_variant",
]
