"""Localisation accuracy of circular camera arrays.

Quantised camera readings partition the disc of interest into cells of
indistinguishable points; this package computes those cells exactly,
reconstructs points from readings, evaluates closed-form worst-case error
bounds, and runs Monte-Carlo error experiments, with a CLI and an HTTP
explorer service on top.
"""

from .errors import (
    BehindCamera,
    CamringError,
    CellNotFound,
    DegenerateArrangement,
    NoSolution,
    ParallelImagePlanes,
    RankDeficient,
    SingularFit,
)
from .geometry import (
    CameraArray,
    PixelReading,
    Point2,
    Projection,
    Snapshot,
    discontinuity_angles,
    dual_pair,
    frame_vector,
    normal_vector,
    project,
    quantise,
    snapshot,
    sweep,
)
from .localise import (
    error_matrix_compact,
    error_matrix_expanded,
    imaginary_angle,
    point_bound,
    reconstruct_cell_centroid,
    reconstruct_least_squares,
    reconstruct_two_view,
    worst_case_bound,
)
from .partition import (
    BoundaryLine,
    Cell,
    Partition,
    boundary_lines,
    build_partition,
    cell_of,
    central_radius,
    partition_to_dict,
    pixel_backprojection,
    raster_partition,
)
from .experiments import (
    FitResult,
    MseRow,
    MseTable,
    fit_reciprocal_quadratic,
    mse_monte_carlo,
    run_growth_preset,
    sweep_cameras,
)

__version__ = "0.1.0"
