"""Geometry primitives: factories, metrics, embeddedness, resampling, file IO."""

import math

import numpy as np
import pytest

import curveflow.curves as cv
from curveflow.errors import DegenerateGeometryError, InvalidInputError


def rotate(points, angle):
    c, s = math.cos(angle), math.sin(angle)
    return points @ np.array([[c, s], [-s, c]])


class TestFactories:
    def test_circle_vertices_on_circle(self):
        curve = cv.circle_polygon(2.0, 64, center=(1.0, -1.0))
        radii = np.hypot(curve.vertices[:, 0] - 1.0, curve.vertices[:, 1] + 1.0)
        assert np.allclose(radii, 2.0, atol=1e-12)
        assert curve.counterclockwise

    def test_circle_metrics_match_closed_form(self):
        m = cv.metrics(cv.circle_polygon(1.0, 512))
        assert abs(m.length - 2 * math.pi) < 2e-4
        assert abs(m.enclosed_area - math.pi) < 2e-4
        assert abs(m.isoperimetric_ratio - 1.0) < 1e-4
        assert abs(m.total_turning - 2 * math.pi) < 1e-9
        assert m.convex
        assert abs(m.min_curvature - 1.0) < 1e-3
        assert abs(m.max_curvature - 1.0) < 1e-3

    def test_ellipse_area_and_convexity(self):
        m = cv.metrics(cv.ellipse_polygon(2.0, 1.0, 512))
        assert abs(m.enclosed_area - 2 * math.pi) < 1e-3
        assert m.convex
        # curvature extremes of an ellipse: b/a^2 and a/b^2
        assert abs(m.min_curvature - 0.25) < 1e-3
        assert abs(m.max_curvature - 2.0) < 5e-3

    def test_rectangle_exact_perimeter_and_area(self):
        m = cv.metrics(cv.rectangle_polygon(3.0, 2.0, 80))
        assert abs(m.length - 10.0) < 1e-12
        assert abs(m.enclosed_area - 6.0) < 1e-12
        assert m.convex
        assert abs(m.total_turning - 2 * math.pi) < 1e-9

    def test_peanut_is_nonconvex(self):
        m = cv.metrics(cv.peanut_polygon(1.0, 0.3, 256))
        assert not m.convex
        assert m.min_curvature < -0.5
        assert m.max_curvature > 0.0

    def test_spiral_embedded_with_turning_number_one(self):
        curve = cv.spiral_polygon(1.0, 2.0, 1.5, n=640)
        assert cv.is_embedded(curve)
        m = cv.metrics(curve)
        assert abs(m.total_turning - 2 * math.pi) < 1e-6
        assert not m.convex

    def test_factory_rejects_bad_dimensions(self):
        with pytest.raises(InvalidInputError):
            cv.circle_polygon(-1.0)
        with pytest.raises(InvalidInputError):
            cv.ellipse_polygon(2.0, 0.0)
        with pytest.raises(InvalidInputError):
            cv.spiral_polygon(2.0, 1.0, 1.5)


class TestValidation:
    def test_too_few_vertices(self):
        with pytest.raises(DegenerateGeometryError):
            cv.PlaneCurve(np.zeros((4, 2)))

    def test_nonfinite_vertices(self):
        pts = cv.circle_polygon(1.0, 16).vertices.copy()
        pts[3, 1] = np.nan
        with pytest.raises(InvalidInputError):
            cv.PlaneCurve(pts)

    def test_coincident_vertices(self):
        pts = cv.circle_polygon(1.0, 16).vertices.copy()
        pts[5] = pts[4]
        with pytest.raises(DegenerateGeometryError):
            cv.PlaneCurve(pts)


class TestMetricsProperties:
    def test_isoperimetric_ratio_at_least_one(self, rng):
        for _ in range(5):
            amps = 0.08 * rng.standard_normal(4)
            phases = rng.uniform(0, 2 * math.pi, 4)
            theta = np.linspace(0, 2 * math.pi, 200, endpoint=False)
            r = 1.0 + sum(a * np.cos((k + 2) * theta + p)
                          for k, (a, p) in enumerate(zip(amps, phases)))
            pts = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
            m = cv.metrics(cv.PlaneCurve(pts))
            assert m.isoperimetric_ratio >= 1.0 - 1e-9

    def test_rigid_motion_invariance(self, rng):
        base = cv.peanut_polygon(1.0, 0.3, 200)
        moved = cv.PlaneCurve(rotate(base.vertices, 0.7) + np.array([3.0, -2.0]))
        a, b = cv.metrics(base), cv.metrics(moved)
        assert abs(a.length - b.length) < 1e-9
        assert abs(a.enclosed_area - b.enclosed_area) < 1e-9
        assert abs(a.min_curvature - b.min_curvature) < 1e-8
        assert abs(a.max_curvature - b.max_curvature) < 1e-8
        assert a.convex == b.convex

    def test_orientation_flips_signed_area(self):
        curve = cv.circle_polygon(1.0, 64)
        area = cv.polygon_area(curve.vertices)
        assert area > 0
        assert abs(cv.polygon_area(curve.vertices[::-1]) + area) < 1e-14

    def test_centroid_of_symmetric_curve(self):
        cx, cy = cv.curve_centroid(cv.ellipse_polygon(2.0, 1.0, 128, center=(0.5, 0.25)))
        assert abs(cx - 0.5) < 1e-9
        assert abs(cy - 0.25) < 1e-9

    def test_curvature_profile_of_circle(self):
        kappa, normals = cv.curvature_profile(cv.circle_polygon(2.0, 256))
        assert normals.shape == (256, 2)
        assert np.max(np.abs(kappa - 0.5)) < 1e-3
        # inward normals of a circle point at the center
        assert np.allclose(np.linalg.norm(normals, axis=1), 1.0, atol=1e-12)

    def test_turning_angles_sum_to_full_turn(self):
        angles = cv.turning_angles(cv.peanut_polygon(1.0, 0.3, 300))
        assert abs(angles.sum() - 2 * math.pi) < 1e-9


class TestEmbeddingAndDistance:
    def test_figure_eight_is_not_embedded(self):
        t = np.linspace(0, 2 * math.pi, 200, endpoint=False)
        pts = np.column_stack([np.sin(2 * t), np.sin(t)])
        assert not cv.is_embedded(cv.PlaneCurve(pts))

    def test_min_distance_between_separated_circles(self):
        a = cv.circle_polygon(1.0, 256)
        b = cv.circle_polygon(1.0, 256, center=(3.0, 0.0))
        assert abs(cv.min_distance(a, b) - 1.0) < 1e-3

    def test_min_distance_nested(self):
        outer = cv.circle_polygon(2.0, 256)
        inner = cv.circle_polygon(1.0, 256)
        assert abs(cv.min_distance(outer, inner) - 1.0) < 1e-3

    def test_min_distance_crossing_is_zero(self):
        a = cv.circle_polygon(1.0, 128)
        b = cv.circle_polygon(1.0, 128, center=(1.0, 0.0))
        assert cv.min_distance(a, b) < 1e-6


class TestResampling:
    def test_spline_resample_preserves_circle(self):
        fine = cv.resample_spline(cv.circle_polygon(1.0, 64), 256)
        radii = np.hypot(fine.vertices[:, 0], fine.vertices[:, 1])
        assert fine.vertices.shape == (256, 2)
        assert np.max(np.abs(radii - 1.0)) < 1e-4

    def test_uniform_resample_equalizes_spacing(self):
        curve = cv.ellipse_polygon(2.0, 1.0, 100)
        out = cv.resample_uniform(curve, 150)
        seg = np.linalg.norm(np.diff(np.vstack([out.vertices, out.vertices[:1]]), axis=0), axis=1)
        assert out.vertices.shape == (150, 2)
        assert seg.std() / seg.mean() < 1e-3

    def test_resample_preserves_length_and_area(self):
        curve = cv.peanut_polygon(1.0, 0.3, 200)
        out = cv.resample_spline(curve, 400)
        m0, m1 = cv.metrics(curve), cv.metrics(out)
        assert abs(m0.length - m1.length) / m0.length < 1e-3
        assert abs(m0.enclosed_area - m1.enclosed_area) / m0.enclosed_area < 1e-3

    def test_resample_rejects_tiny_counts(self):
        with pytest.raises((InvalidInputError, DegenerateGeometryError)):
            cv.resample_spline(cv.circle_polygon(1.0, 64), 4)


class TestFileRoundTrip:
    def test_write_then_read_is_exact(self, tmp_path):
        curve = cv.peanut_polygon(1.0, 0.3, 96)
        path = tmp_path / "curve.xy"
        cv.write_curve(path, curve)
        back = cv.read_curve(path)
        assert np.array_equal(back.vertices, curve.vertices)

    def test_parse_error_reports_line_number(self):
        with pytest.raises(InvalidInputError, match="line 2"):
            cv.parse_curve("0 0\n1\n")

    def test_parse_error_on_non_numeric(self):
        with pytest.raises(InvalidInputError, match="line 1"):
            cv.parse_curve("a b\n")

    def test_format_parse_round_trip(self):
        curve = cv.circle_polygon(1.0, 32)
        again = cv.parse_curve(cv.format_curve(curve))
        assert np.array_equal(again.vertices, curve.vertices)
