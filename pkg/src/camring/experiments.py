"""Monte-Carlo error experiments, curve fitting, and tabular outputs.

Sampling is deterministic regardless of worker count: points are generated
in fixed-size blocks from counter-based Philox streams keyed on
``(seed, block index)``, and per-block results are reduced in block order.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import RankDeficient, SingularFit
from .geometry import (
    CameraArray,
    Projection,
    centers_from_indices,
    snapshot_indices,
)
from .localise import select_two_view_pair
from .partition import Partition, build_partition

SAMPLE_BLOCK = 2048

# Sample radius stops a hair short of the rim so no reading is ambiguous.
RIM_SHRINK = 1.0 - 1e-9

ESTIMATORS = ("centroid", "lsq", "twoview")


class MseRow(NamedTuple):
    """One Monte-Carlo row: camera count, error stats, sample accounting."""

    m: int
    mse: float
    stderr: float
    samples: int
    excluded: int


@dataclass(frozen=True)
class MseTable:
    """Monte-Carlo MSE per camera count for one configuration."""

    rows: tuple[MseRow, ...]
    n: int
    r: float
    kind: str
    f: float | None
    estimator: str
    seed: int

    def __post_init__(self):
        ms = [row.m for row in self.rows]
        if ms != sorted(ms) or len(ms) != len(set(ms)):
            raise ValueError("rows must be sorted by m with no duplicates")


class FitResult(NamedTuple):
    """Coefficients of MSE(m) ~ 1/(a*m^2 + b*m + c) and the linearised R^2."""

    a: float
    b: float
    c: float
    r_squared: float


class McResult(NamedTuple):
    mse: float
    stderr: float
    excluded: int


def sample_disc_block(
    seed: int, block: int, count: int, radius: float, inner: float = 0.0
) -> np.ndarray:
    """Points ``block*SAMPLE_BLOCK .. +count`` of the uniform sampling stream.

    Uniform by area over the disc of the given radius, or over the annulus
    ``inner <= |p| <= radius`` when ``inner > 0``.
    """
    sq = np.random.SeedSequence(entropy=seed, spawn_key=(block,))
    rng = np.random.Generator(np.random.Philox(sq))
    vals = rng.random((count, 2))
    rho = np.sqrt(inner * inner + (radius * radius - inner * inner) * vals[:, 0])
    theta = 2.0 * np.pi * vals[:, 1]
    return np.stack([rho * np.cos(theta), rho * np.sin(theta)], axis=1)


def _centroid_lookup(partition: Partition) -> dict[tuple[int, ...], tuple[float, float]]:
    return {
        cell.signature: (cell.centroid.x, cell.centroid.y)
        for cell in partition.cells
    }


def _estimate_lsq_block(array: CameraArray, centers: np.ndarray) -> np.ndarray:
    """Batched least-squares estimates from (B, m) reading centers."""
    ang = array.angles
    frame = np.stack([-np.sin(ang), np.cos(ang)], axis=1)  # (m, 2)
    if array.projection.is_perspective:
        f = array.projection.focal_length
        perp = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        design = f * frame[None, :, :] + centers[:, :, None] * perp[None, :, :]
        rhs = centers * (array.r + f)
        gram = np.einsum("bmi,bmj->bij", design, design)
        moment = np.einsum("bmi,bm->bi", design, rhs)
        return np.linalg.solve(gram, moment[:, :, None])[:, :, 0]
    pinv = np.linalg.pinv(frame)  # (2, m)
    if np.linalg.matrix_rank(frame) < 2:
        raise RankDeficient("camera frame does not span the plane")
    return centers @ pinv.T


def _estimate_block(
    array: CameraArray,
    pts: np.ndarray,
    estimator: str,
    centroid_by_sig,
    pair,
) -> tuple[np.ndarray, np.ndarray]:
    """Squared errors for one block plus the excluded-sample mask."""
    indices = snapshot_indices(array, pts)
    excluded = np.zeros(pts.shape[0], dtype=bool)
    if estimator == "centroid":
        est = np.empty_like(pts)
        for row, sig in enumerate(map(tuple, indices.tolist())):
            hit = centroid_by_sig.get(sig)
            if hit is None:
                excluded[row] = True
                est[row] = 0.0
            else:
                est[row] = hit
    else:
        centers = centers_from_indices(indices, array.pixel_width, array.n)
        if estimator == "lsq":
            est = _estimate_lsq_block(array, centers)
        elif estimator == "twoview":
            i, j = pair
            from .geometry import dual_pair

            d1, d2 = dual_pair(array.angles[i], array.angles[j])
            est = np.outer(centers[:, i], d1) + np.outer(centers[:, j], d2)
        else:
            raise ValueError(f"unknown estimator {estimator!r}")
    err2 = np.sum((est - pts) ** 2, axis=1)
    return err2, excluded


def mse_monte_carlo(
    array: CameraArray,
    estimator: str = "centroid",
    samples: int = 10_000,
    seed: int = 0,
    workers: int = 1,
    partition: Partition | None = None,
    inner_radius: float = 0.0,
) -> McResult:
    """Mean squared localisation error over uniform points in the disc.

    Points are uniform by area over the disc of radius ``r * (1 - 1e-9)``;
    ``inner_radius`` restricts them to an annulus instead (used by the
    growth preset to stay outside the never-refined central circle). The
    result is bitwise identical for a fixed ``(seed, samples)`` whatever the
    worker count. Samples whose signature has no cell (slivers of the
    disc-polygon boundary) are excluded and counted.
    """
    if samples < 100:
        raise ValueError("need at least 100 samples")
    if estimator not in ESTIMATORS:
        raise ValueError(f"estimator must be one of {ESTIMATORS}")
    if not 0.0 <= inner_radius < array.r:
        raise ValueError("inner_radius must lie in [0, r)")
    centroid_by_sig = None
    if estimator == "centroid":
        if partition is None:
            partition = build_partition(array)
        centroid_by_sig = _centroid_lookup(partition)
    pair = select_two_view_pair(array) if estimator == "twoview" else None
    radius = array.r * RIM_SHRINK

    n_blocks = (samples + SAMPLE_BLOCK - 1) // SAMPLE_BLOCK

    def run_block(block: int) -> tuple[np.ndarray, np.ndarray]:
        count = min(SAMPLE_BLOCK, samples - block * SAMPLE_BLOCK)
        pts = sample_disc_block(seed, block, count, radius, inner_radius)
        return _estimate_block(array, pts, estimator, centroid_by_sig, pair)

    if workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_block, range(n_blocks)))
    else:
        results = [run_block(b) for b in range(n_blocks)]

    err2 = np.concatenate([r[0] for r in results])
    excluded = np.concatenate([r[1] for r in results])
    kept = err2[~excluded]
    n_excluded = int(np.sum(excluded))
    if kept.size < 2:
        raise RankDeficient("not enough usable samples")
    mse = float(np.mean(kept))
    stderr = float(np.std(kept, ddof=1) / math.sqrt(kept.size))
    return McResult(mse=mse, stderr=stderr, excluded=n_excluded)


def sweep_cameras(
    m_values: Sequence[int],
    n: int,
    r: float,
    kinds: Sequence[Projection],
    estimator: str = "centroid",
    samples: int = 10_000,
    seed: int = 0,
    workers: int = 1,
    inner_radius: float = 0.0,
) -> list[MseTable]:
    """One MSE table per projection kind over ascending camera counts.

    All kinds and all camera counts see the identical point stream, so the
    comparison between kinds is paired.
    """
    if not m_values or list(m_values) != sorted(set(m_values)):
        raise ValueError("m_values must be non-empty and strictly ascending")
    tables = []
    for proj in kinds:
        rows = []
        for m in m_values:
            array = CameraArray(m=m, r=r, n=n, projection=proj)
            res = mse_monte_carlo(
                array,
                estimator=estimator,
                samples=samples,
                seed=seed,
                workers=workers,
                inner_radius=inner_radius,
            )
            rows.append(
                MseRow(
                    m=m,
                    mse=res.mse,
                    stderr=res.stderr,
                    samples=samples - res.excluded,
                    excluded=res.excluded,
                )
            )
        tables.append(
            MseTable(
                rows=tuple(rows),
                n=n,
                r=r,
                kind=proj.kind,
                f=proj.focal_length,
                estimator=estimator,
                seed=seed,
            )
        )
    return tables


def fit_reciprocal_quadratic(table: MseTable) -> FitResult:
    """Least-squares fit of 1/MSE against (m^2, m, 1).

    R^2 is computed on the linearised response 1/MSE and clamped to [0, 1].

    Raises:
        SingularFit: fewer than 3 distinct camera counts, non-positive MSE,
            or a rank-deficient design.
    """
    ms = np.array([row.m for row in table.rows], dtype=float)
    mse = np.array([row.mse for row in table.rows], dtype=float)
    if len(set(ms.tolist())) < 3:
        raise SingularFit("need at least three distinct camera counts")
    if np.any(mse <= 0):
        raise SingularFit("MSE values must be positive to fit the reciprocal")
    z = 1.0 / mse
    design = np.stack([ms * ms, ms, np.ones_like(ms)], axis=1)
    coef, _, rank, _ = np.linalg.lstsq(design, z, rcond=None)
    if rank < 3:
        raise SingularFit("design matrix is rank deficient")
    resid = z - design @ coef
    ss_res = float(resid @ resid)
    ss_tot = float(np.sum((z - z.mean()) ** 2))
    if ss_tot == 0.0:
        r_squared = 1.0 if ss_res < 1e-30 else 0.0
    else:
        r_squared = 1.0 - ss_res / ss_tot
    r_squared = min(1.0, max(0.0, r_squared))
    return FitResult(float(coef[0]), float(coef[1]), float(coef[2]), r_squared)


def fit_curve_values(fit: FitResult, ms: np.ndarray) -> np.ndarray:
    """Evaluate the fitted reciprocal-quadratic model."""
    return 1.0 / (fit.a * ms * ms + fit.b * ms + fit.c)


def write_mse_csv(tables: Iterable[MseTable]) -> str:
    """CSV with columns m,kind,mse,stderr,samples; one row block per kind."""
    out = io.StringIO()
    out.write("m,kind,mse,stderr,samples\n")
    for table in tables:
        for row in table.rows:
            out.write(
                f"{row.m},{table.kind},{row.mse!r},{row.stderr!r},{row.samples}\n"
            )
    return out.getvalue()


# Reproduction preset for the camera-count growth experiment: three-pixel
# sensors, 20..50 cameras, both projection kinds with f = r.
#
# Odd camera counts only: for even m, opposite orthogonal cameras produce
# mirror readings, so the effective number of line orientations halves and
# the MSE zigzags between parities instead of decaying smoothly. Sampling
# excludes the central circle of both kinds, where no camera count can
# reduce the error (the localisation exception near the origin).
GROWTH_M_VALUES = tuple(range(21, 50, 2))
GROWTH_N = 3
GROWTH_R = 1.0
GROWTH_SAMPLES = 10_000


def growth_kinds() -> list[Projection]:
    return [Projection.orthogonal(), Projection.perspective(GROWTH_R)]


def growth_inner_radius() -> float:
    """Exclusion radius for the preset: the larger central circle of the
    two projection kinds (camera count does not affect it)."""
    from .partition import central_radius

    return max(
        central_radius(CameraArray(m=4, r=GROWTH_R, n=GROWTH_N, projection=proj))
        for proj in growth_kinds()
    )


def run_growth_preset(
    samples: int = GROWTH_SAMPLES, seed: int = 0, workers: int = 1
) -> tuple[list[MseTable], list[FitResult]]:
    """The growth experiment: MSE tables and their reciprocal-quadratic fits."""
    tables = sweep_cameras(
        GROWTH_M_VALUES,
        GROWTH_N,
        GROWTH_R,
        growth_kinds(),
        estimator="centroid",
        samples=samples,
        seed=seed,
        workers=workers,
        inner_radius=growth_inner_radius(),
    )
    fits = [fit_reciprocal_quadratic(t) for t in tables]
    return tables, fits
