"""Monochromatic needle probabilities on colored planes and unit-distance graphs."""

from .bounds import (
    BoundsReport,
    KAPPA,
    SweepPoint,
    build_bounds_report,
    lower_bound,
    min_edges_non_k_colorable,
    optimize_hex_edge,
    table_bound_gap,
    upper_bound_construction,
)
from .colorings import (
    ConstantColoring,
    GridColoring,
    Hex3Coloring,
    PolygonalColoring,
    StripeColoring,
    make_random_grid,
    verify_periodicity,
)
from .estimator import (
    Estimate,
    GraphThrowEstimator,
    JointDistribution,
    NeedleEstimator,
    TableEstimator,
    estimate_p_per,
    estimate_p_table,
    estimate_via_graph_throw,
    exact_stripe_p,
    joint_distribution,
)
from .exceptions import (
    InvalidArgumentError,
    InvalidConstructionError,
    InvalidLatticeError,
    NoInformationError,
    ResourceLimitError,
)
from .geometry import (
    Needle,
    PeriodLattice,
    Point2,
    Rect,
    inner_border_area,
    parallelogram_area,
    reduce_to_cell,
    sample_needle,
)
from .graphs import (
    EmbeddedGraph,
    MkResult,
    MkSolver,
    catalog,
    monochromatic_count,
    moser_spindle,
    solve_mk,
    triangle,
    verify_unit_embedding,
)

__version__ = "0.1.0"
