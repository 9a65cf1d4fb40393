"""Indistinguishability cells induced by the quantised camera readings.

Every quantisation threshold of every camera traces a straight line across
the disc of interest (a level set of an inner product for orthogonal
projection, a ray through the pinhole for perspective projection), so the
regions of constant signature are convex. The exact partition is built by
splitting a fine polygonal approximation of the disc with each boundary
line in turn; a rasterised labelling of the disc serves as an independent
oracle for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import CellNotFound, DegenerateArrangement
from .geometry import (
    CameraArray,
    Point2,
    as_point,
    snapshot,
)

# Fragments below this area (times r^2) are numerical slivers, not cells.
SLIVER_AREA = 1e-14

# Vertex-on-line tolerance for convex splitting, relative to the disc radius.
SPLIT_EPS = 1e-12


@dataclass(frozen=True)
class BoundaryLine:
    """One quantisation-threshold line ``a*x + b*y = c`` with ``a^2+b^2 = 1``.

    ``camera`` is the camera whose sensor owns the threshold; ``k`` is the
    integer labelling it (threshold value ``k*w`` for even pixel counts,
    ``(k + 1/2)*w`` for odd).
    """

    a: float
    b: float
    c: float
    camera: int
    k: int

    @property
    def distance_from_origin(self) -> float:
        return abs(self.c)


@dataclass(frozen=True)
class Cell:
    """A maximal region of the disc over which all readings are constant."""

    signature: tuple[int, ...]
    polygon: np.ndarray  # (V, 2), counter-clockwise
    area: float
    centroid: Point2
    diameter: float


@dataclass(frozen=True)
class Partition:
    """The full cell decomposition of the (polygon-approximated) disc."""

    array: CameraArray
    cells: tuple[Cell, ...]
    disc_sides: int
    lines: tuple[BoundaryLine, ...]
    central_radius: float

    def __post_init__(self):
        by_sig = {cell.signature: cell for cell in self.cells}
        object.__setattr__(self, "_by_signature", by_sig)

    def cell_for_signature(self, signature: tuple[int, ...]) -> Cell:
        try:
            return self._by_signature[signature]
        except KeyError:
            raise CellNotFound(f"no cell with signature {signature}") from None


class RasterResult(NamedTuple):
    """Distinct-signature count and per-signature grid-point occupancy."""

    count: int
    occupancy: dict[tuple[int, ...], int]


def _threshold_values(array: CameraArray) -> list[tuple[int, float]]:
    """(k, threshold value) pairs whose boundary line crosses the open disc.

    A threshold line meets the open disc exactly when its value lies strictly
    inside the sensor, for both projection kinds, which reduces to an integer
    range on k: |k| <= n/2 - 1 (even n), k in [-(n-1)/2, (n-1)/2 - 1] (odd).
    """
    n, w = array.n, array.pixel_width
    if n % 2 == 0:
        ks = range(-(n // 2 - 1), n // 2)
        return [(k, k * w) for k in ks]
    half = (n - 1) // 2
    ks = range(-half, half)
    return [(k, (k + 0.5) * w) for k in ks]


def boundary_lines(array: CameraArray) -> list[BoundaryLine]:
    """All quantisation-threshold lines that cross the open disc.

    Tangent and exterior lines are excluded: they bound no interior cell.
    """
    lines: list[BoundaryLine] = []
    thresholds = _threshold_values(array)
    f = array.projection.focal_length
    for i, alpha in enumerate(array.angles):
        sin_a, cos_a = math.sin(alpha), math.cos(alpha)
        for k, t in thresholds:
            if array.projection.is_perspective:
                # f*<p,phi> + t*<p,phi_perp> = t*(r + f)
                a = -f * sin_a + t * cos_a
                b = f * cos_a + t * sin_a
                c = t * (array.r + f)
                norm = math.hypot(a, b)
                lines.append(BoundaryLine(a / norm, b / norm, c / norm, i, k))
            else:
                lines.append(BoundaryLine(-sin_a, cos_a, t, i, k))
    return lines


def central_radius(array: CameraArray) -> float:
    """Radius of the central disc that extra cameras refine at most angularly.

    Distance from the origin to the nearest boundary line ignoring, for even
    pixel counts, the through-origin (k = 0) lines. Returns the disc radius
    when no qualifying line exists.
    """
    best = array.r
    for line in boundary_lines(array):
        if array.n % 2 == 0 and line.k == 0:
            continue
        best = min(best, line.distance_from_origin)
    return best


def regular_disc_polygon(r: float, sides: int) -> np.ndarray:
    """Regular polygon inscribed in the circle of radius ``r``, CCW.

    Vertices sit at half-step angles so that none lands on a coordinate
    axis, where through-origin boundary lines are common.
    """
    theta = 2.0 * np.pi * (np.arange(sides) + 0.5) / sides
    return np.stack([r * np.cos(theta), r * np.sin(theta)], axis=1)


def polygon_area(vertices) -> float:
    """Signed shoelace area (positive for counter-clockwise order)."""
    x = [v[0] for v in vertices]
    y = [v[1] for v in vertices]
    s = 0.0
    for i in range(len(vertices)):
        j = (i + 1) % len(vertices)
        s += x[i] * y[j] - x[j] * y[i]
    return 0.5 * s


def polygon_centroid(vertices) -> tuple[float, float]:
    """Area centroid of a simple polygon (interior point when convex)."""
    a = 0.0
    cx = 0.0
    cy = 0.0
    for i in range(len(vertices)):
        j = (i + 1) % len(vertices)
        cross = vertices[i][0] * vertices[j][1] - vertices[j][0] * vertices[i][1]
        a += cross
        cx += (vertices[i][0] + vertices[j][0]) * cross
        cy += (vertices[i][1] + vertices[j][1]) * cross
    a *= 0.5
    if a == 0.0:
        xs = [v[0] for v in vertices]
        ys = [v[1] for v in vertices]
        return sum(xs) / len(xs), sum(ys) / len(ys)
    return cx / (6.0 * a), cy / (6.0 * a)


def polygon_diameter(vertices) -> float:
    """Largest pairwise vertex distance."""
    best = 0.0
    for i in range(len(vertices)):
        xi, yi = vertices[i]
        for j in range(i + 1, len(vertices)):
            d = (xi - vertices[j][0]) ** 2 + (yi - vertices[j][1]) ** 2
            if d > best:
                best = d
    return math.sqrt(best)


def convex_contains(vertices, p, eps: float = 1e-12) -> bool:
    """Point-in-convex-polygon test for CCW vertex lists."""
    x, y = p
    for i in range(len(vertices)):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % len(vertices)]
        if (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1) < -eps:
            return False
    return True


def split_convex_polygon(
    vertices: list[tuple[float, float]],
    a: float,
    b: float,
    c: float,
    eps: float,
) -> tuple[list[tuple[float, float]] | None, list[tuple[float, float]] | None]:
    """Split a convex CCW polygon by the line ``a*x + b*y = c``.

    Returns (negative-side polygon, positive-side polygon); a side with no
    interior is None. Vertices within ``eps`` of the line belong to both.
    """
    n = len(vertices)
    d = [a * vx + b * vy - c for vx, vy in vertices]
    neg: list[tuple[float, float]] = []
    pos: list[tuple[float, float]] = []
    for i in range(n):
        j = (i + 1) % n
        di, dj = d[i], d[j]
        vi = vertices[i]
        if di >= -eps:
            pos.append(vi)
        if di <= eps:
            neg.append(vi)
        # True sign change: insert the crossing point on both sides.
        if (di > eps and dj < -eps) or (di < -eps and dj > eps):
            t = di / (di - dj)
            vj = vertices[j]
            cross = (vi[0] + t * (vj[0] - vi[0]), vi[1] + t * (vj[1] - vi[1]))
            pos.append(cross)
            neg.append(cross)
    if len(neg) < 3:
        neg_out = None
    else:
        neg_out = neg
    if len(pos) < 3:
        pos_out = None
    else:
        pos_out = pos
    return neg_out, pos_out


class _Piece:
    """Mutable polygon record with a cached bounding circle for quick rejects."""

    __slots__ = ("vertices", "cx", "cy", "rad")

    def __init__(self, vertices: list[tuple[float, float]]):
        self.vertices = vertices
        xs = [v[0] for v in vertices]
        ys = [v[1] for v in vertices]
        self.cx = sum(xs) / len(xs)
        self.cy = sum(ys) / len(ys)
        self.rad = math.sqrt(
            max((x - self.cx) ** 2 + (y - self.cy) ** 2 for x, y in vertices)
        )


def build_partition(array: CameraArray, disc_sides: int = 720) -> Partition:
    """Exact cell decomposition of the disc-sides-gon by all boundary lines.

    Each line splits every polygon it crosses; fragments below the sliver
    cutoff are dropped, and each final polygon gets its signature from a
    snapshot at its centroid (an interior point, never a vertex).

    Raises:
        DegenerateArrangement: if a split produces non-finite vertices.
    """
    if disc_sides < 16:
        raise ValueError("disc polygon needs at least 16 sides")
    r = array.r
    eps = SPLIT_EPS * r
    pieces = [_Piece([tuple(v) for v in regular_disc_polygon(r, disc_sides)])]
    for line in boundary_lines(array):
        a, b, c = line.a, line.b, line.c
        next_pieces: list[_Piece] = []
        for piece in pieces:
            d0 = a * piece.cx + b * piece.cy - c
            if d0 > piece.rad or d0 < -piece.rad:
                next_pieces.append(piece)
                continue
            neg, pos = split_convex_polygon(piece.vertices, a, b, c, eps)
            if neg is None or pos is None:
                next_pieces.append(piece)
                continue
            for part in (neg, pos):
                if not all(
                    math.isfinite(x) and math.isfinite(y) for x, y in part
                ):
                    raise DegenerateArrangement(
                        f"non-finite vertex while splitting by line {line}"
                    )
                next_pieces.append(_Piece(part))
        pieces = next_pieces

    cells = []
    min_area = SLIVER_AREA * r * r
    for piece in pieces:
        area = polygon_area(piece.vertices)
        if area <= min_area:
            continue
        cx, cy = polygon_centroid(piece.vertices)
        snap = snapshot(array, (cx, cy))
        cells.append(
            Cell(
                signature=snap.indices,
                polygon=np.array(piece.vertices),
                area=area,
                centroid=Point2(cx, cy),
                diameter=polygon_diameter(piece.vertices),
            )
        )
    return Partition(
        array=array,
        cells=tuple(cells),
        disc_sides=disc_sides,
        lines=tuple(boundary_lines(array)),
        central_radius=central_radius(array),
    )


def _signature_codes(indices: np.ndarray, n: int) -> np.ndarray:
    """Pack per-camera pixel indices into one integer code per point."""
    m = indices.shape[1]
    base = n + 2  # indices span at most n+1 values; keep a spare slot
    if base ** m < 2**62:
        offset = n // 2 + 1
        codes = np.zeros(indices.shape[0], dtype=np.int64)
        for i in range(m):
            codes *= base
            codes += indices[:, i] + offset
        return codes
    # Rare wide-array fallback: compare rows through a structured view.
    rows = np.ascontiguousarray(indices.astype(np.int16))
    dt = np.dtype([(f"c{i}", np.int16) for i in range(m)])
    return rows.view(dt).ravel()


def _decode_codes(codes: np.ndarray, m: int, n: int) -> list[tuple[int, ...]]:
    base = n + 2
    offset = n // 2 + 1
    out = []
    for code in codes.tolist():
        sig = []
        for _ in range(m):
            sig.append(code % base - offset)
            code //= base
        out.append(tuple(reversed(sig)))
    return out


@lru_cache(maxsize=4)
def _disc_grid(resolution: int, r: float) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates of the grid points strictly inside the disc (float32)."""
    step = 2.0 * r / resolution
    axis = (-r + step * (np.arange(resolution, dtype=np.float32) + 0.5)).astype(
        np.float32
    )
    xs, ys = np.meshgrid(axis, axis)
    inside = xs * xs + ys * ys < np.float32(r * r)
    x = np.ascontiguousarray(xs[inside])
    y = np.ascontiguousarray(ys[inside])
    x.setflags(write=False)
    y.setflags(write=False)
    return x, y


def raster_partition(
    array: CameraArray,
    resolution: int = 2048,
    exclude_margin: float | None = None,
) -> RasterResult:
    """Label a dense grid over the disc with snapshot signatures.

    Serves as a brute-force oracle for :func:`build_partition`. Grid points
    within ``exclude_margin`` of any boundary line can be dropped to resolve
    pixel-versus-line ambiguities when comparing against the exact cells.
    Projections run in float32: the grid step dwarfs that precision.
    """
    if resolution < 64:
        raise ValueError("raster resolution must be at least 64")
    x, y = _disc_grid(resolution, array.r)

    m, n = array.m, array.n
    w = np.float32(array.pixel_width)
    persp = array.projection.is_perspective
    f = np.float32(array.projection.focal_length) if persp else None
    half = np.float32(0.5)
    npts = x.shape[0]
    indices = np.empty((m, npts), dtype=np.int16)
    keep = np.ones(npts, dtype=bool)
    has_lines = bool(_threshold_values(array))
    # reusable scratch buffers: the loop is memory-bandwidth bound
    q = np.empty(npts, dtype=np.float32)
    v = np.empty(npts, dtype=np.float32) if persp else None
    scratch = np.empty(npts, dtype=np.float32)
    for i, alpha in enumerate(array.angles):
        sin_a = np.float32(math.sin(alpha))
        cos_a = np.float32(math.cos(alpha))
        np.multiply(x, -sin_a, out=q)
        q += cos_a * y
        if persp:
            np.multiply(x, cos_a, out=v)
            v += sin_a * y
            np.subtract(np.float32(array.r) + f, v, out=v)  # v: pinhole depth
            q *= f
            q /= v
        np.divide(q, w, out=scratch)
        if n % 2 == 0:
            idx = np.floor(scratch, out=scratch)
            np.clip(idx, -(n // 2), n // 2 - 1, out=idx)
        else:
            idx = np.rint(scratch, out=scratch)  # pixel k covers (k -+ 1/2)w
            np.clip(idx, -((n - 1) // 2), (n - 1) // 2, out=idx)
        indices[i] = idx.astype(np.int16)
        if exclude_margin is not None and has_lines:
            # distance to the nearest threshold line of this camera
            if n % 2 == 0:
                np.divide(q, w, out=scratch)
                np.rint(scratch, out=scratch)
            else:
                np.divide(q, w, out=scratch)
                np.floor(scratch, out=scratch)
                scratch += half
            t_near = scratch
            t_near *= w
            if persp:
                dist = np.sqrt(f * f + t_near * t_near)
                np.subtract(q, t_near, out=t_near)
                np.abs(t_near, out=t_near)
                t_near *= v
                np.divide(t_near, dist, out=dist)
            else:
                dist = np.subtract(q, t_near, out=t_near)
                np.abs(dist, out=dist)
            keep &= dist > np.float32(exclude_margin)

    codes = _signature_codes(indices.T[keep], n)
    uniq, counts = np.unique(codes, return_counts=True)
    if uniq.dtype == np.int64:
        sigs = _decode_codes(uniq, m, n)
    else:
        raw = uniq.view(np.int16).reshape(-1, m)
        sigs = [tuple(int(v) for v in row) for row in raw]
    occupancy = dict(zip(sigs, counts.tolist()))
    return RasterResult(count=len(occupancy), occupancy=occupancy)


def pixel_backprojection(array: CameraArray, camera: int, pixel: int) -> np.ndarray:
    """World-space region a single pixel integrates over, clipped to the disc slab.

    Orthogonal: a rectangle of width ``w`` running across the disc's bounding
    box. Perspective: the trapezoid between the two pixel-edge rays, cut by
    the slab tangent to the disc front and back; its parallel sides measure
    ``w`` (on the image plane) and ``(1 + 2r/f)*w`` (far side).
    """
    if not 0 <= camera < array.m:
        raise ValueError(f"camera index {camera} out of range")
    n, w, r = array.n, array.pixel_width, array.r
    if n % 2 == 0:
        lo_i, hi_i = -n // 2, n // 2 - 1
        if not lo_i <= pixel <= hi_i:
            raise ValueError(f"pixel index {pixel} out of range")
        u_lo, u_hi = pixel * w, (pixel + 1) * w
    else:
        half = (n - 1) // 2
        if not -half <= pixel <= half:
            raise ValueError(f"pixel index {pixel} out of range")
        u_lo, u_hi = (pixel - 0.5) * w, (pixel + 0.5) * w

    alpha = 2.0 * math.pi * camera / array.m
    frame = np.array([-math.sin(alpha), math.cos(alpha)])
    toward = np.array([math.cos(alpha), math.sin(alpha)])
    if array.projection.is_perspective:
        f = array.projection.focal_length
        far = 1.0 + 2.0 * r / f  # ray spread factor at the slab's far side
        corners = [
            (u_lo, r),
            (u_hi, r),
            (u_hi * far, -r),
            (u_lo * far, -r),
        ]
    else:
        corners = [(u_lo, r), (u_hi, r), (u_hi, -r), (u_lo, -r)]
    poly = np.array([u * frame + v * toward for u, v in corners])
    if polygon_area(poly.tolist()) < 0:
        poly = poly[::-1]
    return poly


def cell_of(partition: Partition, p) -> Cell:
    """The cell whose signature matches the snapshot of ``p``.

    Raises:
        CellNotFound: the signature is absent (possible only for points in
            slivers discarded near the disc-polygon boundary).
    """
    p = as_point(p)
    snap = snapshot(partition.array, p)
    return partition.cell_for_signature(snap.indices)


def partition_to_dict(partition: Partition) -> dict:
    """JSON-ready document for a partition (the wire schema of the service)."""
    array = partition.array
    return {
        "m": array.m,
        "n": array.n,
        "r": array.r,
        "kind": array.projection.kind,
        "f": array.projection.focal_length,
        "w": array.pixel_width,
        "central_radius": partition.central_radius,
        "cells": [
            {
                "signature": list(cell.signature),
                "polygon": [[float(x), float(y)] for x, y in cell.polygon],
                "area": cell.area,
                "centroid": [cell.centroid.x, cell.centroid.y],
                "diameter": cell.diameter,
            }
            for cell in partition.cells
        ],
    }
