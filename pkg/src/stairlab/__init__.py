"""Exact stair-convexity toolkit: stretched grids, weak-net refutation,
interval-chain stabbing, and thin-triangle selection, all over rational
arithmetic with certified transcendental bounds."""

from .chains import (
    IntervalChain,
    StabFamily,
    StabTuple,
    ackermann,
    ackermann_A,
    alpha,
    alpha_k,
    beta_d,
    check_lemma10,
    diag_net_from_stabbing,
    enumerate_chains,
    min_stabbing,
    net_to_stabbing,
    p3,
    q3,
    stabs,
)
from .client import ServiceClient
from .errors import GuardError, check_guard, guard_cap
from .geometry import AxisBox, BoxUnion, Point, PointSet, StairPath
from .grid import (
    Diagonal,
    GridSpec,
    build_grid,
    check_curve_position,
    diagonal,
    far_apart,
    far_apart_sets,
    make_grid,
    pi_inverse,
    pi_map,
)
from .nets import (
    Fan,
    NetCertificate,
    RefuteResult,
    build_stair_net,
    make_fan,
    build_stair_net_report,
    certify_stair_net,
    choose_k,
    hammersley,
    largest_empty_box,
    refute_net,
    stair_volume_bound,
    transfer_from_weak_net,
    transfer_to_weak_net,
)
from .rational import (
    ceil_log2,
    format_scalar,
    ln_bounds,
    log2_bounds,
    parse_scalar,
    round_down,
    round_up,
)
from .stair import (
    conv_contains,
    conv_intersects,
    erode,
    grid_count,
    is_stair_convex,
    point_types,
    sconv_contains,
    sconv_intersection_witness,
    sconv_intersects,
    stair_path,
    volume,
)
from .triangles import (
    IncreasingTriangle,
    ProbeReport,
    TriangleFamily,
    class_count_bound,
    count_containing,
    count_simplices_containing,
    gen_thin_triangles,
    probe_report,
    rho_for,
    type_class_sizes,
)

__all__ = [
    "AxisBox",
    "BoxUnion",
    "Diagonal",
    "Fan",
    "GridSpec",
    "GuardError",
    "IncreasingTriangle",
    "IntervalChain",
    "NetCertificate",
    "Point",
    "PointSet",
    "ProbeReport",
    "RefuteResult",
    "ServiceClient",
    "StabFamily",
    "StabTuple",
    "StairPath",
    "TriangleFamily",
    "ackermann",
    "ackermann_A",
    "alpha",
    "alpha_k",
    "beta_d",
    "build_grid",
    "build_stair_net",
    "build_stair_net_report",
    "ceil_log2",
    "certify_stair_net",
    "check_curve_position",
    "check_guard",
    "check_lemma10",
    "choose_k",
    "class_count_bound",
    "conv_contains",
    "conv_intersects",
    "count_containing",
    "count_simplices_containing",
    "diag_net_from_stabbing",
    "diagonal",
    "enumerate_chains",
    "erode",
    "far_apart",
    "far_apart_sets",
    "format_scalar",
    "gen_thin_triangles",
    "grid_count",
    "guard_cap",
    "hammersley",
    "is_stair_convex",
    "largest_empty_box",
    "ln_bounds",
    "log2_bounds",
    "make_fan",
    "make_grid",
    "min_stabbing",
    "net_to_stabbing",
    "p3",
    "parse_scalar",
    "pi_inverse",
    "pi_map",
    "point_types",
    "probe_report",
    "q3",
    "refute_net",
    "rho_for",
    "round_down",
    "round_up",
    "sconv_contains",
    "sconv_intersection_witness",
    "sconv_intersects",
    "stabs",
    "stair_path",
    "stair_volume_bound",
    "transfer_from_weak_net",
    "transfer_to_weak_net",
    "type_class_sizes",
    "volume",
]

__version__ = "0.1.0"
