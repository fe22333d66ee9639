"""Scenario lab: config parsing, artifacts, runner reports, CLI exit codes."""

import json
import time

import numpy as np
import pytest

import curveflow.axisym as ax
import curveflow.curves as cv
import curveflow.flow1d as f1
from curveflow.errors import ConfigError
from curveflow.lab import artifacts, cli, runner, scenarios

TINY_CIRCLE = """[tiny_circle]
kind = curve-flow
shape = circle
shape.radius = 0.5
n = 96
law.p = 1.0
cfl_factor = 0.5
resample_every = 10
stop_area_fraction = 0.3
analyses = radius-law, area-law
save_snapshots = true
check.radius_rel_tol = 1e-2
check.slope_rel_tol = 0.01
check.extinction_rel_tol = 0.05
"""

TINY_ORACLE = """[oracle_gate]
kind = oracle-check
shape = selfcheck
analyses = selfcheck
check.selfcheck_tol = 1e-6
"""


def tiny_circle_scenario():
    return scenarios.parse_config(TINY_CIRCLE)[0]


def oracle_scenario(text=TINY_ORACLE):
    return scenarios.parse_config(text)[0]


class TestParseConfig:
    def test_empty_document_yields_no_scenarios(self):
        assert scenarios.parse_config("") == []
        assert scenarios.parse_config("# just a comment\n") == []

    def test_round_trip_of_fields(self):
        s = tiny_circle_scenario()
        assert s.name == "tiny_circle"
        assert s.kind == scenarios.KIND_CURVE
        assert s.shape == "circle"
        assert s.shape_params == {"radius": 0.5}
        assert s.n == 96
        assert s.law.p == 1.0
        assert s.config.cfl_factor == 0.5
        assert s.config.stop_area_fraction == 0.3
        assert list(s.analyses) == ["radius-law", "area-law"]
        assert s.checks["radius_rel_tol"] == 1e-2

    def test_unknown_kind_rejected(self):
        with pytest.raises(ConfigError, match="kind"):
            scenarios.parse_config(TINY_CIRCLE.replace("curve-flow", "banana"))

    def test_semantic_error_names_field(self):
        bad = TINY_CIRCLE.replace("law.p = 1.0", "law.p = -1")
        with pytest.raises(ConfigError, match=r"law\.p"):
            scenarios.parse_config(bad)

    def test_unknown_key_named(self):
        with pytest.raises(ConfigError, match="wobble"):
            scenarios.parse_config(TINY_CIRCLE + "wobble = 3\n")

    def test_missing_shape_parameter_named(self):
        bad = TINY_CIRCLE.replace("shape.radius = 0.5\n", "")
        with pytest.raises(ConfigError, match=r"shape\.radius"):
            scenarios.parse_config(bad)

    def test_analysis_must_match_kind(self):
        with pytest.raises(ConfigError, match="not available"):
            scenarios.parse_config(TINY_CIRCLE.replace("radius-law, area-law",
                                                       "neck"))

    def test_analysis_may_require_shape(self):
        with pytest.raises(ConfigError, match="grim_reaper"):
            scenarios.parse_config(TINY_CIRCLE.replace("radius-law, area-law",
                                                       "translate"))

    def test_duplicate_scenario_name(self):
        with pytest.raises(ConfigError, match="duplicate"):
            scenarios.parse_config(TINY_CIRCLE + TINY_CIRCLE)

    def test_syntax_error_reports_line(self):
        with pytest.raises(ConfigError, match="line"):
            scenarios.parse_config("stray value\n[t]\nkind = curve-flow\n")

    def test_non_numeric_value_rejected(self):
        with pytest.raises(ConfigError, match="n must be a number"):
            scenarios.parse_config(TINY_CIRCLE.replace("n = 96", "n = many"))

    def test_rescale_kind_needs_axisymmetric_shape(self):
        bad = TINY_CIRCLE.replace("curve-flow", "rescale-analysis")
        with pytest.raises(ConfigError, match="rescale-analysis"):
            scenarios.parse_config(bad)


class TestBuiltinCatalog:
    def test_thirteen_scenarios(self):
        catalog = scenarios.builtin_catalog()
        assert len(catalog) == 13
        names = [s.name for s in catalog]
        assert len(set(names)) == 13
        for expected in ("circle_law", "ellipse_area_law", "ellipse_roundness",
                         "spiral_grayson", "affine_ellipse", "sphere_law",
                         "dumbbell_pinch", "torus_collapse", "disjoint_nested",
                         "grim_reaper", "blowup_dial", "oracle_selfcheck"):
            assert expected in names

    def test_every_analysis_has_an_artifact(self):
        for s in scenarios.builtin_catalog():
            for analysis in s.analyses:
                assert analysis in runner.ARTIFACT_BY_ANALYSIS

    def test_oracle_subset_is_nonempty(self):
        kinds = {s.kind for s in scenarios.builtin_catalog()}
        assert scenarios.KIND_ORACLE in kinds
        assert scenarios.KIND_RESCALE in kinds


class TestArtifacts:
    def test_unit_circle_viewbox(self, tmp_path):
        path = tmp_path / "circle.svg"
        artifacts.emit_svg(cv.circle_polygon(1.0, 128), path)
        text = path.read_text()
        assert "<polygon" in text
        view = text.split('viewBox="')[1].split('"')[0]
        x0, y0, w, h = (float(v) for v in view.split())
        assert x0 == pytest.approx(-1.05, abs=1e-9)
        assert y0 == pytest.approx(-1.05, abs=1e-9)
        assert w == pytest.approx(2.1, abs=1e-9)
        assert h == pytest.approx(2.1, abs=1e-9)

    def test_open_polyline_stays_open(self, tmp_path):
        pts = np.column_stack([np.linspace(0, 1, 20), np.linspace(0, 1, 20) ** 2])
        path = tmp_path / "arc.svg"
        artifacts.emit_svg(pts, path)
        text = path.read_text()
        assert "<polyline" in text and "<polygon" not in text

    def test_profile_rendered_as_mirrored_cross_section(self, tmp_path):
        path = tmp_path / "dumbbell.svg"
        artifacts.emit_svg(ax.dumbbell_profile(1.0, 0.2, 1.0, 200), path)
        text = path.read_text()
        assert "<polygon" in text
        view = text.split('viewBox="')[1].split('"')[0]
        x0, y0, w, h = (float(v) for v in view.split())
        # the mirror doubles the vertical extent around the axis
        assert y0 < -0.9 and y0 + h > 0.9

    def test_trajectory_csv_header_and_determinism(self):
        traj = f1.run(cv.circle_polygon(0.4, 64), f1.SpeedLaw(1.0),
                      f1.FlowConfig(cfl_factor=0.5, stop_area_fraction=0.5))
        a = artifacts.trajectory_csv(traj)
        b = artifacts.trajectory_csv(traj)
        assert a == b
        assert a.splitlines()[0] == artifacts.CURVE_CSV_HEADER

    def test_save_then_load_trajectory_is_exact(self, tmp_path):
        traj = f1.run(cv.circle_polygon(0.4, 64), f1.SpeedLaw(1.0),
                      f1.FlowConfig(cfl_factor=0.5, stop_area_fraction=0.5))
        artifacts.save_trajectory(tmp_path / "snaps", traj)
        assert (tmp_path / "snaps" / "index.json").exists()
        back = artifacts.load_trajectory(tmp_path / "snaps")
        assert np.array_equal(back.times(), traj.times())
        for s0, s1 in zip(traj.snapshots, back.snapshots):
            assert np.array_equal(s0.curve.vertices, s1.curve.vertices)

    def test_axi_save_load_round_trip(self, tmp_path):
        traj = ax.run_axi(ax.sphere_profile(0.3, 96),
                          f1.FlowConfig(cfl_factor=0.5, stop_area_fraction=0.5))
        artifacts.save_trajectory(tmp_path / "snaps", traj)
        back = artifacts.load_trajectory(tmp_path / "snaps")
        assert np.array_equal(back.times(), traj.times())
        for s0, s1 in zip(traj.snapshots, back.snapshots):
            assert np.array_equal(s0.profile.samples, s1.profile.samples)
            assert s0.profile.topology == s1.profile.topology


class TestRunner:
    def test_tiny_circle_scenario_passes(self, tmp_path):
        report = runner.run_scenario(tiny_circle_scenario(), tmp_path)
        assert report.error is None
        assert report.passed
        assert report.wall_time > 0
        out = tmp_path / "tiny_circle"
        for name in report.artifacts:
            assert (out / name).exists(), name
        assert set(report.artifacts) >= {"trajectory.csv", "radius_law.csv",
                                         "area_law.json", "snapshots/index.json"}

    def test_each_analysis_contributes_exactly_once(self, tmp_path):
        report = runner.run_scenario(tiny_circle_scenario(), tmp_path)
        assert report.artifacts.count("radius_law.csv") == 1
        assert report.artifacts.count("area_law.json") == 1
        prefixes = {c.name.split("/")[0] for c in report.checks}
        assert prefixes == {"radius-law", "area-law"}

    def test_runs_are_bit_identical(self, tmp_path):
        s = tiny_circle_scenario()
        runner.run_scenario(s, tmp_path / "a")
        runner.run_scenario(s, tmp_path / "b")
        for name in ("trajectory.csv", "radius_law.csv", "area_law.json"):
            left = (tmp_path / "a" / "tiny_circle" / name).read_bytes()
            right = (tmp_path / "b" / "tiny_circle" / name).read_bytes()
            assert left == right, name

    def test_runtime_error_is_captured_not_raised(self, tmp_path):
        text = """[bad_dumbbell]
kind = axi-flow
shape = dumbbell
shape.lobe_r = 0.1
shape.tube_r = 0.3
shape.tube_len = 1.0
n = 200
cfl_factor = 0.4
resample_every = 10
stop_area_fraction = 0.02
analyses = neck
"""
        report = runner.run_scenario(scenarios.parse_config(text)[0], tmp_path)
        assert not report.passed
        assert report.error is not None
        assert "InvalidInputError" in report.error

    def test_oracle_scenario_is_fast(self, tmp_path):
        started = time.perf_counter()
        report = runner.run_scenario(oracle_scenario(), tmp_path)
        elapsed = time.perf_counter() - started
        assert report.passed
        assert elapsed < 5.0
        payload = json.loads((tmp_path / "oracle_gate"
                              / "oracle_selfcheck.json").read_text())
        assert payload["worst"] < 1e-6

    def test_accept_writes_summary_and_status(self, tmp_path):
        batch = [tiny_circle_scenario(), oracle_scenario()]
        reports, summary, status = runner.accept(batch, tmp_path, workers=2)
        assert status == 0
        assert summary["total"] == 2 and summary["failed"] == 0
        on_disk = json.loads((tmp_path / "summary.json").read_text())
        assert [s["name"] for s in on_disk["scenarios"]] == ["tiny_circle",
                                                             "oracle_gate"]

    def test_accept_fails_on_corrupted_tolerance(self, tmp_path):
        corrupted = oracle_scenario(TINY_ORACLE.replace(
            "check.selfcheck_tol = 1e-6", "check.selfcheck_tol = 0"))
        reports, summary, status = runner.accept([corrupted], tmp_path, workers=1)
        assert status == 1
        assert summary["failed"] == 1
        assert not reports[0].passed

    def test_format_table_mentions_failures(self, tmp_path):
        corrupted = oracle_scenario(TINY_ORACLE.replace(
            "check.selfcheck_tol = 1e-6", "check.selfcheck_tol = 0"))
        reports, _, _ = runner.accept([corrupted], tmp_path, workers=1)
        table = runner.format_table(reports)
        assert "oracle_gate" in table
        assert "FAIL" in table
        assert "selfcheck" in table


class TestCli:
    def test_run_command(self, tmp_path, capsys):
        cfg = tmp_path / "tiny.cfg"
        cfg.write_text(TINY_CIRCLE)
        assert cli.main(["run", str(cfg), "--out", str(tmp_path / "out"),
                         "--workers", "1"]) == 0
        assert (tmp_path / "out" / "summary.json").exists()
        assert "tiny_circle" in capsys.readouterr().out

    def test_run_rejects_bad_config(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text(TINY_CIRCLE.replace("law.p = 1.0", "law.p = -1"))
        assert cli.main(["run", str(cfg), "--out", str(tmp_path / "out")]) == 2
        assert "law.p" in capsys.readouterr().err

    def test_run_rejects_empty_config(self, tmp_path, capsys):
        cfg = tmp_path / "empty.cfg"
        cfg.write_text("# no scenarios\n")
        assert cli.main(["run", str(cfg), "--out", str(tmp_path / "out")]) == 2
        assert "no scenarios" in capsys.readouterr().err

    def test_env_var_sets_output_root(self, tmp_path, monkeypatch, capsys):
        cfg = tmp_path / "tiny.cfg"
        cfg.write_text(TINY_ORACLE)
        monkeypatch.setenv("CURVEFLOW_OUT", str(tmp_path / "from_env"))
        assert cli.main(["run", str(cfg), "--workers", "1"]) == 0
        assert (tmp_path / "from_env" / "summary.json").exists()
        capsys.readouterr()

    def test_explicit_out_beats_env_var(self, tmp_path, monkeypatch, capsys):
        cfg = tmp_path / "tiny.cfg"
        cfg.write_text(TINY_ORACLE)
        monkeypatch.setenv("CURVEFLOW_OUT", str(tmp_path / "from_env"))
        assert cli.main(["run", str(cfg), "--out", str(tmp_path / "explicit"),
                         "--workers", "1"]) == 0
        assert (tmp_path / "explicit" / "summary.json").exists()
        assert not (tmp_path / "from_env").exists()
        capsys.readouterr()

    def test_accept_kind_filter(self, tmp_path, capsys):
        assert cli.main(["accept", "--kind", "oracle-check",
                         "--out", str(tmp_path / "out"), "--workers", "1"]) == 0
        assert "oracle_selfcheck" in capsys.readouterr().out

    def test_accept_unknown_kind(self, tmp_path, capsys):
        assert cli.main(["accept", "--kind", "nope",
                         "--out", str(tmp_path / "out")]) == 2
        capsys.readouterr()

    def test_accept_corrupted_catalog_fails(self, tmp_path, capsys):
        catalog = tmp_path / "corrupted.cfg"
        catalog.write_text(TINY_ORACLE.replace("check.selfcheck_tol = 1e-6",
                                               "check.selfcheck_tol = 0"))
        assert cli.main(["accept", "--catalog", str(catalog),
                         "--out", str(tmp_path / "out"), "--workers", "1"]) == 1
        capsys.readouterr()

    def test_oracle_selfcheck_command(self, capsys):
        assert cli.main(["oracle", "selfcheck"]) == 0
        out = capsys.readouterr().out
        assert "pass" in out and "worst" in out

    def test_oracle_closed_form_values(self, capsys):
        assert cli.main(["oracle", "circle", "1.0", "0.3"]) == 0
        assert abs(float(capsys.readouterr().out) - 0.6324555320336759) < 1e-12
        assert cli.main(["oracle", "power", "1.0", "0.3333333333333333", "0.3"]) == 0
        assert abs(float(capsys.readouterr().out) - 0.6817316198849862) < 1e-9

    def test_oracle_error_paths(self, capsys):
        assert cli.main(["oracle", "circle", "1.0", "0.6"]) == 2
        assert cli.main(["oracle", "circle", "1.0"]) == 2
        assert cli.main(["oracle", "pretzel", "1.0", "0.1"]) == 2
        assert cli.main(["oracle", "circle", "one", "0.1"]) == 2
        capsys.readouterr()

    def test_missing_subcommand_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as err:
            cli.main([])
        assert err.value.code == 2
        capsys.readouterr()

    def test_rescale_command_on_saved_run(self, tmp_path, capsys):
        cfg = tmp_path / "tiny.cfg"
        cfg.write_text(TINY_CIRCLE)
        assert cli.main(["run", str(cfg), "--out", str(tmp_path / "out"),
                         "--workers", "1"]) == 0
        snaps = tmp_path / "out" / "tiny_circle" / "snapshots"
        index = json.loads((snaps / "index.json").read_text())
        # choose scales whose look-back times 1/scale^2 stay inside the run
        T = index["times"][-1]
        assert cli.main(["rescale", str(snaps), "0,0", str(T),
                         "--scales", "4,6",
                         "--out", str(tmp_path / "frames")]) == 0
        meta = json.loads((tmp_path / "frames" / "frames.json").read_text())
        assert len(meta["frames"]) == 2
        for entry in meta["frames"]:
            assert (tmp_path / "frames" / entry["file"]).exists()
        capsys.readouterr()

    def test_rescale_rejects_plain_directory(self, tmp_path, capsys):
        assert cli.main(["rescale", str(tmp_path), "0,0", "1.0"]) == 2
        assert "index.json" in capsys.readouterr().err
