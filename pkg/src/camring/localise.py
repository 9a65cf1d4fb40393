"""Point estimators from quantised readings and worst-case error bounds.

Three estimators are provided: the two-view dual combination, an
all-camera least-squares solve, and the consistent cell-centroid estimate
(the centroid of the partition cell matching the observed signature). The
error machinery expresses the two-view quantisation error through a pair of
angle-shifted virtual cameras whose exact readings equal the quantised ones,
which yields a closed-form error matrix and the quadratic decay bound.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NoSolution, ParallelImagePlanes, RankDeficient
from .geometry import (
    EPS_PARALLEL,
    CameraArray,
    Point2,
    Snapshot,
    as_point,
    dual_pair,
    sweep,
)
from .partition import Partition


def reconstruct_two_view(
    s1: float, s2: float, alpha1: float, alpha2: float
) -> Point2:
    """Combine two image-plane readings through the dual vectors.

    Exact readings reproduce the point; quantised readings give the standard
    two-view estimate.

    Raises:
        ParallelImagePlanes: the two planes cannot resolve a point.
    """
    d1, d2 = dual_pair(alpha1, alpha2)
    est = s1 * d1 + s2 * d2
    return Point2(float(est[0]), float(est[1]))


def select_two_view_pair(array: CameraArray) -> tuple[int, int]:
    """Best-conditioned camera pair: maximises |sin(angle gap)|.

    Ties are broken by lowest indices.
    """
    if array.m < 2:
        raise RankDeficient("two-view estimation needs at least two cameras")
    ang = array.angles
    best = None
    best_val = -1.0
    for i in range(array.m):
        for j in range(i + 1, array.m):
            val = abs(math.sin(ang[j] - ang[i]))
            if val > best_val + 1e-15:
                best_val = val
                best = (i, j)
    if best is None or best_val <= EPS_PARALLEL:
        raise ParallelImagePlanes("all camera pairs are parallel")
    return best


def reconstruct_two_view_snapshot(
    snap: Snapshot, array: CameraArray, pair: tuple[int, int] | None = None
) -> Point2:
    """Two-view estimate from a snapshot, picking the pair if not given."""
    if pair is None:
        pair = select_two_view_pair(array)
    i, j = pair
    ang = array.angles
    return reconstruct_two_view(snap.centers[i], snap.centers[j], ang[i], ang[j])


def reconstruct_least_squares(snap: Snapshot, array: CameraArray) -> Point2:
    """All-camera least-squares estimate.

    Orthogonal: minimises the residual of the stacked frame expansion, i.e.
    the pseudo-inverse applied to the reading vector. Perspective: solves the
    stacked linearised pinhole equations
    ``f*<p,phi_i> - s_i*(r + f - <p,phi_perp_i>) = 0`` in least squares.

    Raises:
        RankDeficient: the stacked system has rank below 2.
    """
    s = np.asarray(snap.centers, dtype=float)
    ang = array.angles
    frame = np.stack([-np.sin(ang), np.cos(ang)], axis=1)
    if array.projection.is_perspective:
        f = array.projection.focal_length
        perp = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        design = f * frame + s[:, None] * perp
        rhs = s * (array.r + f)
    else:
        design = frame
        rhs = s
    sol, _, rank, _ = np.linalg.lstsq(design, rhs, rcond=None)
    if rank < 2:
        raise RankDeficient("stacked projection system has rank < 2")
    return Point2(float(sol[0]), float(sol[1]))


def reconstruct_cell_centroid(snap: Snapshot, partition: Partition) -> Point2:
    """Centroid of the cell matching the observed signature.

    This estimate is consistent: its own snapshot reproduces the input
    signature, because the centroid of a convex cell lies inside it.

    Raises:
        CellNotFound: the signature has no cell (boundary slivers).
    """
    return partition.cell_for_signature(snap.indices).centroid


def imaginary_angle(p, alpha: float, s: float) -> float:
    """Camera angle at which the exact reading of ``p`` equals ``s``.

    Solves ``|p| sin(angle + phase) = s`` and returns the solution nearest to
    ``alpha`` among the two arcsine branches.

    Raises:
        NoSolution: ``|s|`` exceeds the projection amplitude ``|p|``.
    """
    p = as_point(p)
    amplitude, phase = sweep(p)
    if amplitude == 0.0:
        if s == 0.0:
            return alpha
        raise NoSolution("origin projects to 0 in every camera")
    ratio = s / amplitude
    if abs(ratio) > 1.0 + 1e-12:
        raise NoSolution(f"reading {s} unreachable for |p| = {amplitude}")
    ratio = min(1.0, max(-1.0, ratio))
    base = math.asin(ratio)
    two_pi = 2.0 * math.pi
    best = None
    best_gap = math.inf
    for root in (base - phase, math.pi - base - phase):
        gap = (root - alpha) % two_pi
        if gap > math.pi:
            gap -= two_pi
        if abs(gap) < best_gap:
            best_gap = abs(gap)
            best = alpha + gap
    return best


def error_matrix_compact(
    alpha1: float, alpha2: float, alpha1p: float, alpha2p: float
) -> np.ndarray:
    """Error map E with ``p - p_hat = E @ p`` for angle-shifted readings.

    ``E = I - dual(a1) outer frame(a1') - dual(a2) outer frame(a2')``; the
    shifted angles are the virtual cameras whose exact readings equal the
    quantised ones. E vanishes when the shifts are zero.
    """
    d1, d2 = dual_pair(alpha1, alpha2)
    f1p = np.array([-math.sin(alpha1p), math.cos(alpha1p)])
    f2p = np.array([-math.sin(alpha2p), math.cos(alpha2p)])
    return np.eye(2) - np.outer(d1, f1p) - np.outer(d2, f2p)


def error_matrix_expanded(
    alpha1: float, alpha2: float, alpha1p: float, alpha2p: float
) -> np.ndarray:
    """Expanded algebraic form of :func:`error_matrix_compact`.

    The prefactor ``1/sin(a1 - a2)`` times two explicit 2x2 factors; agrees
    with the compact form entrywise to rounding error.
    """
    s12 = math.sin(alpha1 - alpha2)
    if abs(s12) <= EPS_PARALLEL:
        raise ParallelImagePlanes(
            f"image planes at {alpha1} and {alpha2} are parallel"
        )
    left = np.array(
        [
            [math.cos(alpha2), -math.cos(alpha1)],
            [math.sin(alpha2), -math.sin(alpha1)],
        ]
    )
    right = np.array(
        [
            [
                math.sin(alpha1) - math.sin(alpha1p),
                math.cos(alpha1p) - math.cos(alpha1),
            ],
            [
                math.sin(alpha2) - math.sin(alpha2p),
                math.cos(alpha2p) - math.cos(alpha2),
            ],
        ]
    )
    return (left @ right) / s12


def worst_case_bound(m: int, r: float) -> float:
    """Worst-case squared localisation error outside the central circle:
    ``8 pi^2 r^2 / m^2``."""
    if m < 2:
        raise ValueError("bound needs at least two cameras")
    if r <= 0:
        raise ValueError("radius must be positive")
    return 8.0 * math.pi**2 * r * r / (m * m)


def point_bound(p, m: int) -> float:
    """Point-dependent intermediate bound ``4 pi^2 (x + y)^2 / m^2``."""
    if m < 2:
        raise ValueError("bound needs at least two cameras")
    p = as_point(p)
    return 4.0 * math.pi**2 * (p.x + p.y) ** 2 / (m * m)
