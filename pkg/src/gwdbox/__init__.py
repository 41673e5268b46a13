"""Rotated bounding boxes as 2-D Gaussians.

A small numerical toolkit: exact rotated-rectangle IoU, the closed-form
Gaussian Wasserstein distance with analytic gradients, IoU-consistent loss
transforms, and a deterministic experiment harness (sweeps, boundary
fixtures, gradient-descent fitting) with CSV/SVG reports.
"""

from .gaussian import (
    Gaussian2,
    NotCommutative,
    NotSPD,
    SymMat2,
    box_to_gaussian,
    gaussian_from_params,
    gwd_gradient,
    gwd_gradient_params,
    gwd_squared,
    gwd_squared_commutative,
    gwd_squared_params,
    sqrtm_spd2,
    transport_map,
)
from .geometry import (
    EPS_GEOM,
    Convention,
    ConvexPolygon,
    NonFinite,
    NonPositiveExtent,
    OrientedBox,
    box_vertices,
    clip_convex,
    convert_convention,
    format_box_literal,
    make_box,
    monte_carlo_iou,
    parse_box_file,
    parse_box_literal,
    rotated_iou,
)
from .harness import (
    IOU_LOSS,
    SMOOTH_L1,
    DescentSpec,
    Diverged,
    SweepKind,
    SweepSpec,
    Trajectory,
    default_sweep,
    run_boundary_cases,
    run_descent,
    run_sweep,
)
from .losses import (
    EmptyBatch,
    Form,
    LossConfig,
    RegressionDelta,
    RegressionWeights,
    Transform,
    decode_deltas,
    encode_deltas,
    gwd_loss,
    loss_from_distance,
    regression_objective,
    smooth_l1,
)
from .report import EmptyTable, Table, emit_csv, emit_svg

__version__ = "0.1.0"

__all__ = [
    "Convention", "ConvexPolygon", "OrientedBox", "EPS_GEOM",
    "NonFinite", "NonPositiveExtent", "NotSPD", "NotCommutative",
    "make_box", "convert_convention", "box_vertices", "clip_convex",
    "rotated_iou", "monte_carlo_iou", "parse_box_literal", "parse_box_file",
    "format_box_literal",
    "Gaussian2", "SymMat2", "box_to_gaussian", "gaussian_from_params",
    "sqrtm_spd2", "gwd_squared", "gwd_squared_params", "gwd_squared_commutative",
    "gwd_gradient", "gwd_gradient_params", "transport_map",
    "Form", "Transform", "LossConfig", "RegressionDelta", "RegressionWeights",
    "EmptyBatch", "gwd_loss", "loss_from_distance", "encode_deltas",
    "decode_deltas", "smooth_l1", "regression_objective",
    "SweepKind", "SweepSpec", "DescentSpec", "Trajectory", "Diverged",
    "SMOOTH_L1", "IOU_LOSS", "default_sweep", "run_sweep",
    "run_boundary_cases", "run_descent",
    "Table", "EmptyTable", "emit_csv", "emit_svg",
]
