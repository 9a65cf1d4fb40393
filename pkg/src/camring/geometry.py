"""Camera-ring geometry: projections, pixel quantiser, and sweep analysis.

Conventions used throughout the package:

* Cameras sit on a circle of radius ``r`` and look at the origin. Camera ``i``
  of ``m`` is at angle ``alpha_i = 2*pi*i/m``, measured anti-clockwise from
  the X axis.
* The image plane of a camera at angle ``alpha`` is the line tangent to the
  circle at ``[r*cos(alpha), r*sin(alpha)]``. Image-plane coordinates grow
  along ``frame_vector(alpha)`` from that tangency point, for both projection
  kinds, so a single quantiser serves both.
* The sensor spans ``[-sensor_length/2, +sensor_length/2]`` and is split into
  ``n`` pixels of width ``w = sensor_length / n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import BehindCamera, ParallelImagePlanes

# Image planes closer in angle than this (in |sin| terms) are treated as
# parallel: far above double-precision noise, far below any 2*pi/m spacing.
EPS_PARALLEL = 1e-9

ORTHOGONAL = "orth"
PERSPECTIVE = "persp"


@dataclass(frozen=True)
class Point2:
    """A 2-D point in world coordinates."""

    x: float
    y: float

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


def as_point(p) -> Point2:
    """Coerce a Point2, tuple, or length-2 array to Point2."""
    if isinstance(p, Point2):
        return p
    x, y = p
    return Point2(float(x), float(y))


@dataclass(frozen=True)
class Projection:
    """Projection model: orthogonal (parallel-beam) or perspective (pinhole).

    ``focal_length`` is required and positive for the perspective kind and
    must be None for the orthogonal kind.
    """

    kind: str
    focal_length: float | None = None

    def __post_init__(self):
        if self.kind not in (ORTHOGONAL, PERSPECTIVE):
            raise ValueError(f"unknown projection kind: {self.kind!r}")
        if self.kind == PERSPECTIVE:
            if self.focal_length is None or self.focal_length <= 0:
                raise ValueError("perspective projection requires focal_length > 0")
        elif self.focal_length is not None:
            raise ValueError("orthogonal projection takes no focal length")

    @classmethod
    def orthogonal(cls) -> "Projection":
        return cls(ORTHOGONAL)

    @classmethod
    def perspective(cls, focal_length: float) -> "Projection":
        return cls(PERSPECTIVE, float(focal_length))

    @property
    def is_perspective(self) -> bool:
        return self.kind == PERSPECTIVE


@dataclass(frozen=True)
class CameraArray:
    """A ring of ``m`` equal cameras around the disc of interest.

    Derived quantities:

    * ``angles``: anti-clockwise camera angles ``2*pi*i/m``.
    * ``sensor_length``: smallest sensor covering the whole disc;
      ``2*r`` for orthogonal, ``2*f*r/sqrt(f^2 + 2*f*r)`` for perspective.
    * ``pixel_width``: ``sensor_length / n``.
    """

    m: int
    r: float
    n: int
    projection: Projection = field(default_factory=Projection.orthogonal)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one camera")
        if self.r <= 0:
            raise ValueError("ring radius must be positive")
        if self.n < 1:
            raise ValueError("need at least one pixel per sensor")

    @property
    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.m) / self.m

    @property
    def sensor_length(self) -> float:
        if self.projection.is_perspective:
            f = self.projection.focal_length
            return 2.0 * f * self.r / math.sqrt(f * f + 2.0 * f * self.r)
        return 2.0 * self.r

    @property
    def pixel_width(self) -> float:
        return self.sensor_length / self.n

    @property
    def even_pixels(self) -> bool:
        return self.n % 2 == 0


class PixelReading(NamedTuple):
    """One quantised sensor reading."""

    index: int
    center: float
    out_of_sensor: bool


@dataclass(frozen=True)
class Snapshot:
    """Per-camera quantised readings of one point."""

    indices: tuple[int, ...]
    centers: tuple[float, ...]
    out_of_sensor: tuple[bool, ...]

    @property
    def clipped(self) -> bool:
        return any(self.out_of_sensor)


def frame_vector(alpha: float) -> np.ndarray:
    """Unit vector parallel to the image plane at angle ``alpha``.

    Points anti-clockwise around the ring: ``[-sin(alpha), cos(alpha)]``.
    """
    return np.array([-math.sin(alpha), math.cos(alpha)])


def normal_vector(alpha: float) -> np.ndarray:
    """Unit vector orthogonal to the image plane, pointing at its centre:
    ``[cos(alpha), sin(alpha)]``."""
    return np.array([math.cos(alpha), math.sin(alpha)])


def dual_pair(alpha1: float, alpha2: float) -> tuple[np.ndarray, np.ndarray]:
    """Dual vectors inverting the two-plane expansion at ``alpha1, alpha2``.

    For any p, ``<p, frame(a1)>*dual1 + <p, frame(a2)>*dual2 == p``.

    Raises:
        ParallelImagePlanes: if ``|sin(alpha2 - alpha1)| <= EPS_PARALLEL``.
    """
    s = math.sin(alpha2 - alpha1)
    if abs(s) <= EPS_PARALLEL:
        raise ParallelImagePlanes(
            f"image planes at {alpha1} and {alpha2} are parallel"
        )
    dual1 = np.array([math.cos(alpha2), math.sin(alpha2)]) / s
    dual2 = np.array([math.cos(alpha1), math.sin(alpha1)]) / -s
    return dual1, dual2


def project(array: CameraArray, i: int, p) -> float:
    """Image-plane coordinate of point ``p`` seen by camera ``i``.

    Orthogonal: inner product with the frame vector. Perspective: pinhole
    projection ``f*<p,phi> / (r + f - <p,phi_perp>)``.

    Raises:
        BehindCamera: perspective denominator <= 0 (point not strictly in
            front of the pinhole; unreachable for points inside the disc).
    """
    p = as_point(p)
    alpha = 2.0 * math.pi * i / array.m
    u = -p.x * math.sin(alpha) + p.y * math.cos(alpha)
    if not array.projection.is_perspective:
        return u
    f = array.projection.focal_length
    v = p.x * math.cos(alpha) + p.y * math.sin(alpha)
    denom = array.r + f - v
    if denom <= 0:
        raise BehindCamera(f"point {p} behind camera {i}")
    return f * u / denom


def project_points(array: CameraArray, pts: np.ndarray) -> np.ndarray:
    """Vectorised projection: (N, 2) points -> (N, m) image-plane coordinates.

    Assumes every point is strictly in front of each pinhole, which holds
    for all points inside the disc.
    """
    pts = np.asarray(pts, dtype=float)
    ang = array.angles
    frame = np.stack([-np.sin(ang), np.cos(ang)], axis=1)  # (m, 2)
    u = pts @ frame.T
    if not array.projection.is_perspective:
        return u
    f = array.projection.focal_length
    perp = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    v = pts @ perp.T
    return f * u / (array.r + f - v)


def quantise(y: float, w: float, n: int) -> PixelReading:
    """Quantise an image-plane coordinate to a pixel of width ``w``.

    Even ``n``: index ``floor(y/w)``, center ``(index + 1/2)*w``.
    Odd ``n``: index ``sign(y)*floor(|y|/w + 1/2)``, center ``index*w``.

    Readings beyond the sensor clamp to the edge pixel; the flag is set only
    when ``|y|`` exceeds the sensor half-length beyond rounding noise, so the
    quantiser is total and exact-edge readings count as in-sensor.
    """
    if w <= 0:
        raise ValueError("pixel width must be positive")
    if n < 1:
        raise ValueError("need at least one pixel")
    half_span = 0.5 * w * n
    out = abs(y) > half_span * (1.0 + 1e-12)
    if n % 2 == 0:
        k = math.floor(y / w)
        lo, hi = -n // 2, n // 2 - 1
        k = min(max(k, lo), hi)
        return PixelReading(k, (k + 0.5) * w, out)
    k = int(math.copysign(math.floor(abs(y) / w + 0.5), y))
    hi = (n - 1) // 2
    k = min(max(k, -hi), hi)
    return PixelReading(k, k * w, out)


def quantise_values(y: np.ndarray, w: float, n: int) -> np.ndarray:
    """Vectorised pixel indices for image-plane coordinates ``y``.

    Same convention and clamping as :func:`quantise`; no flags.
    """
    y = np.asarray(y)
    if n % 2 == 0:
        k = np.floor(y / w)
        np.clip(k, -(n // 2), n // 2 - 1, out=k)
    else:
        k = np.sign(y) * np.floor(np.abs(y) / w + 0.5)
        hi = (n - 1) // 2
        np.clip(k, -hi, hi, out=k)
    return k.astype(np.int64)


def snapshot(array: CameraArray, p) -> Snapshot:
    """Project ``p`` into every camera and quantise each reading.

    For points inside the disc no reading is ever out of sensor: the sensor
    length is chosen to cover the whole disc.
    """
    p = as_point(p)
    w = array.pixel_width
    readings = [
        quantise(project(array, i, p), w, array.n) for i in range(array.m)
    ]
    return Snapshot(
        indices=tuple(rd.index for rd in readings),
        centers=tuple(rd.center for rd in readings),
        out_of_sensor=tuple(rd.out_of_sensor for rd in readings),
    )


def snapshot_indices(array: CameraArray, pts: np.ndarray) -> np.ndarray:
    """Vectorised signatures: (N, 2) points -> (N, m) pixel indices."""
    q = project_points(array, pts)
    return quantise_values(q, array.pixel_width, array.n)


def centers_from_indices(indices: np.ndarray, w: float, n: int) -> np.ndarray:
    """Pixel-center values for quantised indices."""
    indices = np.asarray(indices)
    if n % 2 == 0:
        return (indices + 0.5) * w
    return indices * w


def sweep(p) -> tuple[float, float]:
    """Amplitude and phase of the orthogonal projection as the camera angle
    varies: ``q(alpha) = amplitude * sin(alpha + phase)``.

    Returns ``(|p|, atan2(y, -x))``; the origin returns phase 0 by convention.
    """
    p = as_point(p)
    amplitude = p.norm()
    if amplitude == 0.0:
        return 0.0, 0.0
    return amplitude, math.atan2(p.y, -p.x)


def discontinuity_angles(
    p, w: float, parity: str = "even"
) -> list[tuple[float, int]]:
    """Angles in [0, 2*pi) where the quantised orthogonal projection jumps.

    The projection sweep ``|p| sin(alpha + phase)`` crosses a quantisation
    threshold ``t = k*w`` (even parity) or ``t = (k + 1/2)*w`` (odd parity)
    at each returned angle. Results are ``(angle, k)`` pairs sorted by angle,
    with duplicates within 1e-12 merged.
    """
    if w <= 0:
        raise ValueError("pixel width must be positive")
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    amplitude, phase = sweep(p)
    if amplitude == 0.0:
        return []
    offset = 0.0 if parity == "even" else 0.5
    hits: list[tuple[float, int]] = []
    k_max = math.floor(amplitude / w - offset)
    k_min = -math.ceil(amplitude / w + offset)
    for k in range(k_min, k_max + 1):
        t = (k + offset) * w
        ratio = t / amplitude
        if abs(ratio) > 1.0:
            continue
        base = math.asin(ratio)
        for root in (base, math.pi - base):
            angle = (root - phase) % (2.0 * math.pi)
            hits.append((angle, k))
    hits.sort()
    merged: list[tuple[float, int]] = []
    for angle, k in hits:
        if merged and abs(angle - merged[-1][0]) <= 1e-12:
            continue
        merged.append((angle, k))
    # First and last may alias modulo 2*pi.
    if len(merged) > 1 and abs(merged[0][0] + 2.0 * math.pi - merged[-1][0]) <= 1e-12:
        merged.pop()
    return merged
