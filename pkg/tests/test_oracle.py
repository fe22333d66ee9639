"""Closed-form solution oracles and their independent consistency checks."""

import math

import numpy as np
import pytest

import curveflow.oracle as oc
from curveflow.errors import ExtinctError, InvalidInputError


class TestShrinkers:
    def test_circle_radius_closed_form(self):
        assert abs(oc.shrinker_radius("circle", 1.0, 0.3) - math.sqrt(0.4)) < 1e-12
        assert abs(oc.shrinker_radius("circle", 1.0, 0.0) - 1.0) < 1e-15

    def test_cylinder_matches_circle_rate(self):
        assert oc.shrinker_radius("cylinder", 0.7, 0.1) == pytest.approx(
            oc.shrinker_radius("circle", 0.7, 0.1), abs=1e-15)

    def test_sphere_shrinks_twice_as_fast(self):
        assert abs(oc.shrinker_radius("sphere", 1.0, 0.2) - math.sqrt(1 - 0.8)) < 1e-12
        assert abs(oc.shrinker_lifetime("sphere", 1.0) - 0.25) < 1e-15
        assert abs(oc.shrinker_lifetime("circle", 1.0) - 0.5) < 1e-15
        assert abs(oc.shrinker_lifetime("cylinder", 2.0) - 2.0) < 1e-15

    def test_lifetime_scales_quadratically(self):
        for kind in oc.SHRINKER_KINDS:
            t1 = oc.shrinker_lifetime(kind, 1.0)
            t3 = oc.shrinker_lifetime(kind, 3.0)
            assert abs(t3 - 9 * t1) < 1e-12

    def test_rejects_bad_inputs(self):
        with pytest.raises(InvalidInputError):
            oc.shrinker_radius("plane", 1.0, 0.1)
        with pytest.raises(InvalidInputError):
            oc.shrinker_radius("circle", -1.0, 0.1)
        with pytest.raises(InvalidInputError):
            oc.shrinker_radius("circle", 1.0, -0.1)
        with pytest.raises(ExtinctError):
            oc.shrinker_radius("circle", 1.0, 0.6)


class TestPowerCircle:
    def test_reduces_to_linear_case(self):
        for t in (0.0, 0.2, 0.45):
            assert abs(oc.power_circle_radius(1.0, 1.0, t)
                       - oc.shrinker_radius("circle", 1.0, t)) < 1e-14

    def test_cube_root_value_frozen(self):
        # independently integrated dr/dt = -r^(-1/3) from r0 = 1 to t = 0.3
        assert abs(oc.power_circle_radius(1.0, 1.0 / 3.0, 0.3) - 0.6817316198849862) < 1e-9

    def test_lifetime_formula(self):
        assert abs(oc.power_circle_lifetime(1.0, 1.0 / 3.0) - 0.75) < 1e-15
        assert abs(oc.power_circle_lifetime(2.0, 0.2) - 2.0 ** 1.2 / 1.2) < 1e-12

    def test_extinct_past_lifetime(self):
        with pytest.raises(ExtinctError):
            oc.power_circle_radius(1.0, 0.2, 0.9)
        with pytest.raises(InvalidInputError):
            oc.power_circle_radius(1.0, 0.0, 0.1)


class TestSelfCheck:
    def test_all_cases_within_tolerance(self):
        report = oc.selfcheck()
        assert len(report) == 6
        worst = max(report.values())
        assert worst < oc.SELFCHECK_TOL
        assert oc.selfcheck_passed()

    def test_case_names_cover_every_kind(self):
        names = " ".join(oc.selfcheck())
        for kind in oc.SHRINKER_KINDS:
            assert kind in names


class TestTranslators:
    def test_grim_reaper_graph(self):
        pts = oc.grim_reaper(161, 1.2)
        assert pts.shape == (161, 2)
        assert abs(pts[0, 0] + 1.2) < 1e-12 and abs(pts[-1, 0] - 1.2) < 1e-12
        assert np.max(np.abs(pts[:, 1] + np.log(np.cos(pts[:, 0])))) < 1e-12

    def test_grim_reaper_rejects_wide_domain(self):
        with pytest.raises(InvalidInputError):
            oc.grim_reaper(101, 2.0)

    def test_front_translates_rigidly(self):
        pts = oc.grim_reaper(81, 1.0)
        moved = oc.evolve_translating_front(pts, 0.1)
        target = pts + np.array([0.0, 0.1])
        trim = len(moved) // 10
        dev = oc.polyline_distance(moved[trim:-trim], target)
        assert np.max(dev) < 2e-3

    def test_bowl_profile_is_convex_paraboloid_at_axis(self):
        prof = oc.bowl_soliton(2.0, 129)
        height, rho = prof[:, 0], prof[:, 1]
        assert abs(height[0]) < 1e-12
        assert np.all(np.diff(height) >= 0)
        # near the axis the height looks like rho^2 / 4
        near = rho < 0.15
        assert np.max(np.abs(height[near] - rho[near] ** 2 / 4)) < 2e-4

    def test_bowl_slope_increases_outward(self):
        rho = np.linspace(0.1, 1.9, 40)
        height, slope, bend = oc.bowl_height_slope(rho, 2.0)
        assert np.all(np.diff(height) > 0)
        assert np.all(np.diff(slope) > 0)
        assert np.all(bend > 0)
        assert abs(bend[0] - 0.5) < 0.01


class TestPolylineDistance:
    def test_distance_to_square(self):
        target = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
        pts = np.array([[0.5, -0.25], [0.5, 0.5]])
        dev = oc.polyline_distance(pts, target)
        assert dev[0] == pytest.approx(0.25, abs=1e-12)
        assert dev[1] == pytest.approx(0.5, abs=1e-12)
