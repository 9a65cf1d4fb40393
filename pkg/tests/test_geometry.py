"""Tests for camera-ring geometry, projections, and the pixel quantiser."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from camring.errors import BehindCamera, ParallelImagePlanes
from camring.geometry import (
    CameraArray,
    Projection,
    discontinuity_angles,
    dual_pair,
    frame_vector,
    normal_vector,
    project,
    project_points,
    quantise,
    quantise_values,
    snapshot,
    snapshot_indices,
    sweep,
)

RNG = np.random.default_rng(20240811)


class TestFrameVectors:
    def test_frame_vector_axis_cases(self):
        assert np.allclose(frame_vector(0.0), [0.0, 1.0])
        assert np.allclose(frame_vector(math.pi / 2), [-1.0, 0.0])

    def test_normal_vector_axis_cases(self):
        assert np.allclose(normal_vector(0.0), [1.0, 0.0])
        assert np.allclose(normal_vector(math.pi), [-1.0, 0.0], atol=1e-15)

    def test_unit_norm_and_orthogonality(self):
        for alpha in RNG.uniform(-10, 10, size=50):
            f = frame_vector(alpha)
            n = normal_vector(alpha)
            assert math.isclose(np.linalg.norm(f), 1.0, abs_tol=1e-15)
            assert math.isclose(np.linalg.norm(n), 1.0, abs_tol=1e-15)
            assert abs(f @ n) < 1e-15


class TestDualPair:
    def test_orthonormal_pair(self):
        d1, d2 = dual_pair(0.0, math.pi / 2)
        assert np.allclose(d1, [0.0, 1.0], atol=1e-15)
        assert np.allclose(d2, [-1.0, 0.0], atol=1e-15)

    def test_parallel_planes_rejected(self):
        with pytest.raises(ParallelImagePlanes):
            dual_pair(0.0, math.pi)
        with pytest.raises(ParallelImagePlanes):
            dual_pair(1.3, 1.3)

    def test_reconstruction_identity_random(self):
        # Resolution of identity: projections onto two non-parallel planes
        # recombine through the duals to the original point.
        for _ in range(200):
            a1, a2 = RNG.uniform(0, 2 * math.pi, size=2)
            if abs(math.sin(a2 - a1)) < 1e-3:
                continue
            p = RNG.uniform(-5, 5, size=2)
            d1, d2 = dual_pair(a1, a2)
            rebuilt = (p @ frame_vector(a1)) * d1 + (p @ frame_vector(a2)) * d2
            assert np.allclose(rebuilt, p, atol=1e-12)


class TestProject:
    def test_origin_projects_to_zero(self):
        orth = CameraArray(m=5, r=1.0, n=3)
        persp = CameraArray(m=5, r=1.0, n=3, projection=Projection.perspective(2.0))
        for arr in (orth, persp):
            for i in range(arr.m):
                assert project(arr, i, (0.0, 0.0)) == 0.0

    def test_orthogonal_inner_product(self):
        arr = CameraArray(m=4, r=3.0, n=2)
        # camera 0 at angle 0: q = y
        assert math.isclose(project(arr, 0, (1.0, 2.0)), 2.0)

    def test_perspective_axis_case(self):
        arr = CameraArray(m=1, r=1.0, n=2, projection=Projection.perspective(1.0))
        # f = r = 1, alpha = 0, p = (0, 0.5): q = f*y/(r+f) = 0.25
        assert math.isclose(project(arr, 0, (0.0, 0.5)), 0.25)

    def test_perspective_tends_to_orthogonal(self):
        big_f = CameraArray(m=7, r=1.0, n=3, projection=Projection.perspective(1e9))
        orth = CameraArray(m=7, r=1.0, n=3)
        p = (0.3, 0.4)
        for i in range(7):
            assert abs(project(big_f, i, p) - project(orth, i, p)) < 1e-8

    def test_projection_limit_at_focal_ratio_1e6(self):
        # f/r = 1e6 keeps the two projections within 1e-5 r over the disc
        big_f = CameraArray(m=9, r=1.0, n=3, projection=Projection.perspective(1e6))
        orth = CameraArray(m=9, r=1.0, n=3)
        rho = np.sqrt(RNG.uniform(0, 1, size=500))
        theta = RNG.uniform(0, 2 * math.pi, size=500)
        pts = np.stack([rho * np.cos(theta), rho * np.sin(theta)], axis=1)
        gap = np.abs(project_points(big_f, pts) - project_points(orth, pts))
        assert np.max(gap) <= 1e-5

    def test_behind_camera_raises(self):
        arr = CameraArray(m=1, r=1.0, n=2, projection=Projection.perspective(0.5))
        with pytest.raises(BehindCamera):
            project(arr, 0, (5.0, 0.0))  # beyond the pinhole at x = r + f

    def test_vectorised_matches_scalar(self):
        for proj in (Projection.orthogonal(), Projection.perspective(1.3)):
            arr = CameraArray(m=6, r=2.0, n=4, projection=proj)
            pts = RNG.uniform(-1.2, 1.2, size=(40, 2))
            q = project_points(arr, pts)
            for j in range(pts.shape[0]):
                for i in range(arr.m):
                    assert math.isclose(
                        q[j, i], project(arr, i, tuple(pts[j])), abs_tol=1e-13
                    )


class TestSensorLength:
    def test_orthogonal_sensor(self):
        arr = CameraArray(m=3, r=2.5, n=5)
        assert math.isclose(arr.sensor_length, 5.0)
        assert math.isclose(arr.pixel_width, 1.0)

    def test_perspective_sensor(self):
        arr = CameraArray(m=3, r=1.0, n=2, projection=Projection.perspective(1.0))
        assert math.isclose(arr.sensor_length, 2.0 / math.sqrt(3.0))

    def test_perspective_sensor_tight(self):
        # The widest projection over the disc boundary attains sensor_length/2.
        f, r = 0.8, 1.3
        arr = CameraArray(m=1, r=r, n=2, projection=Projection.perspective(f))
        thetas = np.linspace(0, 2 * math.pi, 20001)
        pts = np.stack([r * np.cos(thetas), r * np.sin(thetas)], axis=1)
        q = project_points(arr, pts)[:, 0]
        assert math.isclose(np.max(np.abs(q)), arr.sensor_length / 2, rel_tol=1e-6)


class TestQuantise:
    def test_even_examples(self):
        assert quantise(0.3, 1.0, 4) == (0, 0.5, False)
        assert quantise(-0.3, 1.0, 4) == (-1, -0.5, False)
        assert quantise(1.0, 1.0, 4) == (1, 1.5, False)

    def test_odd_examples(self):
        assert quantise(0.3, 1.0, 3) == (0, 0.0, False)
        assert quantise(0.6, 1.0, 3) == (1, 1.0, False)

    def test_clamp_and_flag(self):
        rd = quantise(1.7, 1.0, 2)
        assert rd == (0, 0.5, True)
        rd = quantise(-1.7, 1.0, 2)
        assert rd == (-1, -0.5, True)

    def test_top_edge_clamps_without_flag(self):
        # y exactly on the sensor edge is still an in-sensor reading.
        rd = quantise(1.0, 1.0, 2)
        assert rd == (0, 0.5, False)
        rd = quantise(1.5, 1.0, 3)
        assert rd == (1, 1.0, False)

    @given(
        y=st.floats(-10, 10),
        w=st.floats(0.01, 5.0),
        n=st.integers(1, 12),
    )
    @settings(max_examples=300, deadline=None)
    def test_quantiser_contract(self, y, w, n):
        # In-sensor readings are off by at most half a pixel.
        rd = quantise(y, w, n)
        if abs(y) <= 0.5 * w * n:
            assert abs(rd.center - y) <= w / 2 + 1e-12 * w
            assert not rd.out_of_sensor

    def test_vectorised_matches_scalar(self):
        ys = RNG.uniform(-4, 4, size=300)
        for n in (1, 2, 3, 4, 5, 8):
            idx = quantise_values(ys, 0.7, n)
            for y, k in zip(ys, idx):
                assert k == quantise(y, 0.7, n).index


class TestSnapshot:
    def test_origin_all_zero_odd(self):
        arr = CameraArray(m=4, r=1.0, n=3)
        snap = snapshot(arr, (0.0, 0.0))
        assert snap.indices == (0, 0, 0, 0)
        assert snap.centers == (0.0, 0.0, 0.0, 0.0)

    def test_hand_quantised_triangle(self):
        # m = 3, n = 2, r = 1, p = (0.5, 0.5); q at angles 0, 2pi/3, 4pi/3 is
        # 0.5, -(sqrt(3)+1)/4 = -0.683.., (sqrt(3)-1)/4 = 0.183.. ; floor
        # quantiser with w = 1 gives indices 0, -1, 0.
        arr = CameraArray(m=3, r=1.0, n=2)
        snap = snapshot(arr, (0.5, 0.5))
        assert snap.indices == (0, -1, 0)
        assert snap.centers == (0.5, -0.5, 0.5)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7, 8])
    @pytest.mark.parametrize("kind", ["orth", "persp"])
    def test_sensor_covers_disc(self, n, kind):
        proj = (
            Projection.orthogonal() if kind == "orth" else Projection.perspective(0.9)
        )
        arr = CameraArray(m=5, r=1.0, n=n, projection=proj)
        rho = np.sqrt(RNG.uniform(0, 1, size=400))
        theta = RNG.uniform(0, 2 * math.pi, size=400)
        for x, y in zip(rho * np.cos(theta), rho * np.sin(theta)):
            assert not snapshot(arr, (x, y)).clipped

    def test_vectorised_signatures_match(self):
        arr = CameraArray(m=6, r=1.0, n=5, projection=Projection.perspective(1.0))
        pts = RNG.uniform(-0.7, 0.7, size=(50, 2))
        sigs = snapshot_indices(arr, pts)
        for row, p in zip(sigs, pts):
            assert tuple(row) == snapshot(arr, tuple(p)).indices


class TestSweep:
    def test_axis_cases(self):
        amp, phase = sweep((0.0, 1.0))
        assert math.isclose(amp, 1.0)
        assert math.isclose(phase, math.pi / 2)
        amp, phase = sweep((-1.0, 0.0))
        assert math.isclose(amp, 1.0)
        assert math.isclose(phase, 0.0)

    def test_origin_convention(self):
        assert sweep((0.0, 0.0)) == (0.0, 0.0)

    def test_identity_against_projection(self):
        arr = CameraArray(m=100, r=10.0, n=2)
        for _ in range(25):
            p = RNG.uniform(-3, 3, size=2)
            amp, phase = sweep(tuple(p))
            for i in range(0, 100, 7):
                alpha = 2 * math.pi * i / 100
                assert math.isclose(
                    amp * math.sin(alpha + phase),
                    project(arr, i, tuple(p)),
                    abs_tol=1e-12,
                )


class TestDiscontinuityAngles:
    def test_small_point_even(self):
        # |p| < w: the only threshold is 0, crossed at -phase and pi-phase.
        p = (0.3, 0.4)
        amp, phase = sweep(p)
        hits = discontinuity_angles(p, w=1.0, parity="even")
        assert len(hits) == 2
        angles = [a for a, _ in hits]
        expected = sorted([(-phase) % (2 * math.pi), (math.pi - phase) % (2 * math.pi)])
        assert np.allclose(sorted(angles), expected, atol=1e-12)
        assert all(k == 0 for _, k in hits)

    def test_six_crossings(self):
        p = (1.5, 0.0)
        hits = discontinuity_angles(p, w=1.0, parity="even")
        assert len(hits) == 6
        assert sorted({k for _, k in hits}) == [-1, 0, 1]

    def test_odd_below_first_threshold(self):
        assert discontinuity_angles((0.2, 0.2), w=1.0, parity="odd") == []

    def test_crossings_align_with_quantiser_jumps(self):
        # The quantised sweep changes pixel exactly where a crossing is
        # reported (grid intervals containing exactly one crossing).
        w = 0.25
        for parity, n in (("even", 8), ("odd", 7)):
            p = tuple(RNG.uniform(-0.7, 0.7, size=2))
            hits = [a for a, _ in discontinuity_angles(p, w, parity)]
            grid = np.linspace(0, 2 * math.pi, 10_001)
            amp, phase = sweep(p)
            idx = quantise_values(amp * np.sin(grid + phase), w, n)
            for lo, hi, i0, i1 in zip(grid[:-1], grid[1:], idx[:-1], idx[1:]):
                inside = [a for a in hits if lo < a <= hi]
                if i0 != i1:
                    assert inside, f"index jump without crossing in ({lo}, {hi}]"
                elif len(inside) == 1:
                    raise AssertionError(
                        f"crossing {inside[0]} produced no index jump"
                    )


class TestValidation:
    def test_projection_kind_validation(self):
        with pytest.raises(ValueError):
            Projection("weird")
        with pytest.raises(ValueError):
            Projection.perspective(-1.0)
        with pytest.raises(ValueError):
            Projection("orth", focal_length=2.0)

    def test_camera_array_validation(self):
        with pytest.raises(ValueError):
            CameraArray(m=0, r=1.0, n=1)
        with pytest.raises(ValueError):
            CameraArray(m=2, r=0.0, n=1)
        with pytest.raises(ValueError):
            CameraArray(m=2, r=1.0, n=0)

    def test_angles_distinct_in_range(self):
        arr = CameraArray(m=9, r=1.0, n=1)
        ang = arr.angles
        assert len(np.unique(ang)) == 9
        assert np.all((ang >= 0) & (ang < 2 * math.pi))
