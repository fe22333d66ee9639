"""Scenario execution: flows, analyses, artifact emission, pass/fail checks.

Each scenario owns one output directory; every requested analysis writes
exactly one named artifact and contributes named checks evaluated against a
default tolerance table that scenario files may override key by key.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import axisym as ax
from .. import curves as cv
from .. import flow1d as f1
from .. import oracle as oc
from .. import rescale as rs
from .artifacts import (
    axi_trajectory_csv,
    emit_svg,
    save_trajectory,
    series_csv,
    trajectory_csv,
    write_json,
    write_text,
)
from .scenarios import KIND_AXI, KIND_CURVE, KIND_ORACLE, KIND_RESCALE, Scenario

# Default tolerance per check; scenario files override with check.<name> keys.
TOLERANCES: dict[str, float | str | None] = {
    "radius_rel_tol": 1e-3,
    "radius_time_max": None,           # None: check every snapshot
    "slope_rel_tol": 0.005,
    "extinction_target": None,         # None: initial area / (2 pi)
    "extinction_rel_tol": 0.02,
    "extinction_abs_tol": None,        # set to switch to absolute comparison
    "lifetime_max": None,
    "roundness_final": 0.02,
    "roundness_max": None,
    "roundness_monotone": 0.0,
    "iso_final_tol": 0.01,
    "ecc_drift_tol": 0.01,
    "ellipse_fit_tol": 1e-3,
    "event": None,
    "neck_ratio_band": 0.05,
    "pinch_x_tol": None,
    "mean_convex": 0.0,
    "circle_fit_spacing_factor": None,
    "min_separation": 0.0,
    "translate_dev_tol": 5e-3,
    "dial_classes": "plane-like;convex-or-cylinder;cylinder-like",
    "selfcheck_tol": 1e-6,
}

ARTIFACT_BY_ANALYSIS = {
    "radius-law": "radius_law.csv",
    "area-law": "area_law.json",
    "roundness": "roundness.csv",
    "convexification": "convexification.json",
    "eccentricity": "eccentricity.csv",
    "norm-length": "norm_length.csv",
    "pair-distance": "pair_distance.csv",
    "neck": "neck.json",
    "translate": "translate.json",
    "blowup": "blowup.json",
    "selfcheck": "oracle_selfcheck.json",
}

DIAL_ACCEPTS = {
    "plane-like": (rs.CLASS_PLANE,),
    "circle-like": (rs.CLASS_CIRCLE,),
    "cylinder-like": (rs.CLASS_CYLINDER,),
    "convex-like": (rs.CLASS_CONVEX,),
    "convex-or-cylinder": (rs.CLASS_CONVEX, rs.CLASS_CYLINDER),
    "any": (rs.CLASS_PLANE, rs.CLASS_CIRCLE, rs.CLASS_CYLINDER,
            rs.CLASS_CONVEX, rs.CLASS_NONE),
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float | str
    detail: str

    def __post_init__(self):
        self.passed = bool(self.passed)
        if isinstance(self.measured, (np.floating, np.integer)):
            self.measured = float(self.measured)


@dataclass
class RunReport:
    scenario: str
    checks: list[CheckResult] = field(default_factory=list)
    wall_time: float = 0.0
    artifacts: list[str] = field(default_factory=list)
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)


def _tol(s: Scenario, key: str):
    return s.checks.get(key, TOLERANCES[key])


def _mean_radius(curve: cv.PlaneCurve) -> float:
    v = curve.vertices
    c = cv.curve_centroid(curve)
    return float(np.hypot(v[:, 0] - c[0], v[:, 1] - c[1]).mean())


def _sphere_radius(profile: ax.AxiProfile) -> float:
    pts = profile.samples
    cx = 0.5 * (pts[:, 0].min() + pts[:, 0].max())
    return float(np.hypot(pts[:, 0] - cx, pts[:, 1]).mean())


# ---------------------------------------------------------------------------
# Per-analysis evaluators.  Each returns (artifact text writer ran, checks).
# ---------------------------------------------------------------------------

def _check_radius_law(s: Scenario, out: Path, times, measured, reference):
    rows = []
    rel = []
    for t, m, r in zip(times, measured, reference):
        e = abs(m - r) / r
        rows.append((t, m, r, e))
        rel.append(e)
    write_text(out / "radius_law.csv",
               series_csv("t,measured,reference,rel_err", rows))
    rel = np.array(rel)
    t_max = _tol(s, "radius_time_max")
    window = np.array(times) <= (float(t_max) if t_max is not None else np.inf)
    worst = float(rel[window].max())
    tol = float(_tol(s, "radius_rel_tol"))
    return [CheckResult(
        "radius-law/max_rel_err", worst < tol, worst,
        f"max relative radius error {worst:.3e} vs oracle, tolerance {tol:g}"
        + (f" for t <= {float(t_max):g}" if t_max is not None else ""),
    )]


def _check_area_law(s: Scenario, out: Path, traj: f1.Trajectory):
    law = f1.analyze_area_law(traj)
    a0 = float(traj.areas()[0])
    payload = {
        "slope": law.slope,
        "extinction_estimate": law.extinction_estimate,
        "initial_area": a0,
    }
    checks = []
    if s.law.p == 1.0:
        target_slope = -2.0 * math.pi
        rel = abs(law.slope - target_slope) / abs(target_slope)
        tol = float(_tol(s, "slope_rel_tol"))
        payload["slope_target"] = target_slope
        checks.append(CheckResult(
            "area-law/slope", rel < tol, law.slope,
            f"dA/dt = {law.slope:.6f} vs -2*pi, rel err {rel:.3e} tol {tol:g}"))
        target = _tol(s, "extinction_target")
        target = a0 / (2.0 * math.pi) if target is None else float(target)
        abs_tol = _tol(s, "extinction_abs_tol")
        err = abs(law.extinction_estimate - target)
        if abs_tol is not None:
            ok = err < float(abs_tol)
            desc = f"extinction {law.extinction_estimate:.6f} vs {target:g}, " \
                   f"abs err {err:.3e} tol {float(abs_tol):g}"
        else:
            tol_r = float(_tol(s, "extinction_rel_tol"))
            ok = err / target < tol_r
            desc = f"extinction {law.extinction_estimate:.6f} vs {target:g}, " \
                   f"rel err {err / target:.3e} tol {tol_r:g}"
        payload["extinction_target"] = target
        checks.append(CheckResult(
            "area-law/extinction", ok, law.extinction_estimate, desc))
    life_max = _tol(s, "lifetime_max")
    if life_max is not None:
        ok = law.extinction_estimate < float(life_max)
        checks.append(CheckResult(
            "area-law/lifetime", ok, law.extinction_estimate,
            f"extinction estimate {law.extinction_estimate:.4f} "
            f"< bound {float(life_max):g}"))
    write_json(out / "area_law.json", payload)
    return checks


def _check_roundness(s: Scenario, out: Path, traj: f1.Trajectory):
    series = rs.roundness_series(traj)
    write_text(out / "roundness.csv",
               series_csv("t,circle_residual,iso_ratio", series))
    times = np.array([r[0] for r in series])
    resid = np.array([r[1] for r in series])
    iso = np.array([r[2] for r in series])
    checks = []
    tol_f = float(_tol(s, "roundness_final"))
    checks.append(CheckResult(
        "roundness/final", resid[-1] < tol_f, float(resid[-1]),
        f"final circle residual {resid[-1]:.4f} < {tol_f:g}"))
    tol_i = float(_tol(s, "iso_final_tol"))
    iso_err = abs(iso[-1] - 1.0)
    checks.append(CheckResult(
        "roundness/iso", iso_err < tol_i, float(iso[-1]),
        f"final isoperimetric ratio {iso[-1]:.6f}, |ratio-1| {iso_err:.3e} < {tol_i:g}"))
    if float(_tol(s, "roundness_monotone")):
        half = times >= times[-1] / 2.0
        diffs = np.diff(resid[half])
        bad = int(np.sum(diffs >= 0))
        checks.append(CheckResult(
            "roundness/monotone", bad == 0, bad,
            f"{bad} non-decreasing residual steps over the final half-lifetime"))
    r_max = _tol(s, "roundness_max")
    if r_max is not None:
        worst = float(resid.max())
        checks.append(CheckResult(
            "roundness/max", worst < float(r_max), worst,
            f"max circle residual {worst:.3e} < {float(r_max):g}"))
    return checks


def _check_convexification(s: Scenario, out: Path, traj: f1.Trajectory):
    conv_t = f1.convexification_time(traj)
    end_t = float(traj.times()[-1])
    embedded = [bool(cv.is_embedded(snap.curve)) for snap in traj.snapshots]
    write_json(out / "convexification.json", {
        "convexification_time": conv_t,
        "final_time": end_t,
        "embedded_all": all(embedded),
    })
    checks = [
        CheckResult(
            "convexification/event_order",
            conv_t is not None and conv_t < end_t,
            conv_t if conv_t is not None else "none",
            f"convexification at {conv_t} strictly before final time {end_t:.4f}"
            if conv_t is not None else "no convexification event recorded"),
        CheckResult(
            "convexification/embedded", all(embedded), int(sum(embedded)),
            f"{sum(embedded)}/{len(embedded)} snapshots embedded"),
    ]
    return checks


def _check_eccentricity(s: Scenario, out: Path, traj: f1.Trajectory):
    rows = []
    for snap in traj.snapshots:
        fit = f1.fit_ellipse(snap.curve)
        rows.append((snap.time, fit.eccentricity, fit.residual))
    write_text(out / "eccentricity.csv",
               series_csv("t,eccentricity,fit_residual", rows))
    ecc = np.array([r[1] for r in rows])
    res = np.array([r[2] for r in rows])
    drift = float(np.abs(ecc - ecc[0]).max())
    tol_d = float(_tol(s, "ecc_drift_tol"))
    tol_r = float(_tol(s, "ellipse_fit_tol"))
    return [
        CheckResult("eccentricity/drift", drift < tol_d, drift,
                    f"max eccentricity drift {drift:.3e} < {tol_d:g}"),
        CheckResult("eccentricity/fit", float(res.max()) < tol_r, float(res.max()),
                    f"max ellipse-fit residual {res.max():.3e} < {tol_r:g}"),
    ]


def _check_norm_length(s: Scenario, out: Path, traj: f1.Trajectory):
    series = f1.rescaled_length_series(traj)
    write_text(out / "norm_length.csv",
               series_csv("t,normalized_length", series))
    vals = np.array([v for _, v in series])
    diffs = np.diff(vals)
    bad = int(np.sum(diffs <= 0))
    return [CheckResult(
        "norm-length/increasing", bad == 0, bad,
        f"{bad} non-increasing steps; normalized length "
        f"{vals[0]:.4f} -> {vals[-1]:.4f}")]


def _check_pair_distance(s: Scenario, out: Path, trajs: list[f1.Trajectory]):
    t_a, t_b = trajs
    rows = []
    embedded = True
    for sa, sb in zip(t_a.snapshots, t_b.snapshots):
        rows.append((sa.time, cv.min_distance(sa.curve, sb.curve)))
        embedded = embedded and cv.is_embedded(sa.curve) and cv.is_embedded(sb.curve)
    write_text(out / "pair_distance.csv", series_csv("t,min_distance", rows))
    dmin = float(min(r[1] for r in rows))
    floor = float(_tol(s, "min_separation"))
    return [
        CheckResult("pair-distance/separation", dmin > floor, dmin,
                    f"min inter-curve distance {dmin:.4f} > {floor:g}"),
        CheckResult("pair-distance/embedded", embedded, int(embedded),
                    "both curves embedded at every shared snapshot"
                    if embedded else "embeddedness lost"),
    ]


def _check_neck(s: Scenario, out: Path, traj: ax.AxiTrajectory):
    report = ax.neck_report(traj)
    event = traj.events[-1] if traj.events else None
    times = traj.times()
    radii = traj.min_radii()
    mask = radii <= 10.0 * radii.min()
    ratios = radii[mask] / np.sqrt(2.0 * (report.pinch_time - times[mask]))
    payload = {
        "pinch_time_fit": report.pinch_time,
        "event": None if event is None else
        {"kind": event.kind, "time": event.time,
         "location": list(event.location) if event.location else None},
        "ratio_min": float(ratios.min()),
        "ratio_max": float(ratios.max()),
        "series": [[float(a), float(b)] for a, b in report.series],
    }
    write_json(out / "neck.json", payload)
    checks = []
    want = _tol(s, "event")
    if want is not None:
        got = event.kind if event is not None else "none"
        checks.append(CheckResult(
            "neck/event", got == want, got,
            f"terminating event {got!r}, expected {want!r}"))
    band = _tol(s, "neck_ratio_band")
    if "neck_ratio_band" in s.checks:
        band = float(band)
        ok = ratios.min() >= 1.0 - band and ratios.max() <= 1.0 + band
        checks.append(CheckResult(
            "neck/ratio_band", ok,
            f"[{ratios.min():.4f}, {ratios.max():.4f}]",
            f"waist / sqrt(2(T-t)) within 1 +- {band:g} over the final decade"))
    x_tol = _tol(s, "pinch_x_tol")
    if x_tol is not None and event is not None and event.location is not None:
        x = abs(event.location[0])
        checks.append(CheckResult(
            "neck/location", x <= float(x_tol), event.location[0],
            f"pinch at x = {event.location[0]:.4f}, |x| <= {float(x_tol):g}"))
    if float(_tol(s, "mean_convex")):
        flags = [bool(snap.metrics.mean_convex) for snap in traj.snapshots]
        checks.append(CheckResult(
            "neck/mean_convex", all(flags), int(sum(flags)),
            f"{sum(flags)}/{len(flags)} snapshots mean convex"))
    fac = _tol(s, "circle_fit_spacing_factor")
    if fac is not None:
        pts = traj.final().profile.samples
        (cx, cy), radius, _ = rs.fit_circle(pts)
        dev = float(np.abs(np.hypot(pts[:, 0] - cx, pts[:, 1] - cy) - radius).max())
        seg = np.hypot(*np.diff(pts, axis=0).T)
        allowance = float(fac) * float(seg.mean())
        checks.append(CheckResult(
            "neck/collapse_circle", dev <= allowance, dev,
            f"final samples within {dev:.2e} of a single circle "
            f"(allowance {allowance:.2e})"))
    return checks


def _waist_probes(traj: ax.AxiTrajectory, count: int):
    probes = []
    for snap in traj.snapshots[-count:]:
        pts = snap.profile.samples
        spacing = float(np.hypot(*np.diff(pts, axis=0).T).mean())
        probes.append((snap.metrics.min_radius_location - 3.0 * spacing, 0.0))
    return probes


def _check_blowup(s: Scenario, out: Path, traj: ax.AxiTrajectory):
    powers = [float(x) for x in
              s.options.get("dial_powers", "2.0, 1.0, 0.5").split(",")]
    count = int(float(s.options.get("probe_count", "6")))
    probes = _waist_probes(traj, count)
    wanted = [w.strip() for w in str(_tol(s, "dial_classes")).split(";")]
    if len(wanted) != len(powers):
        raise ax.InvalidInputError(
            f"dial_classes lists {len(wanted)} outcomes for {len(powers)} dials")
    dials = []
    checks = []
    for power, want in zip(powers, wanted):
        if want not in DIAL_ACCEPTS:
            raise ax.InvalidInputError(
                f"unknown dial outcome {want!r} "
                f"(choose from {', '.join(sorted(DIAL_ACCEPTS))})")
        report = rs.curvature_normalized_frames(traj, probes, scale_power=power)
        entry = report.to_json_dict()
        entry["scale_power"] = power
        dials.append(entry)
        got = report.limit_classification
        checks.append(CheckResult(
            f"blowup/dial_h^{power:g}", got in DIAL_ACCEPTS[want], got,
            f"scale h^{power:g} classified {got!r}, accepted {want!r}"))
    write_json(out / "blowup.json", {"probes": [list(p) for p in probes],
                                     "dials": dials})
    return checks


def _check_translate(s: Scenario, out: Path, start, final, duration: float):
    n = len(start)
    trim = max(1, n // 10)
    target = start + np.array([0.0, duration])
    dev = oc.polyline_distance(final[trim:-trim], target)
    worst = float(dev.max())
    tol = float(_tol(s, "translate_dev_tol"))
    write_json(out / "translate.json", {
        "duration": duration,
        "interior_max_deviation": worst,
        "interior_samples": int(n - 2 * trim),
    })
    return [CheckResult(
        "translate/deviation", worst < tol, worst,
        f"interior deviation {worst:.2e} from the rigid translate, tol {tol:g}")]


def _check_selfcheck(s: Scenario, out: Path):
    cases = oc.selfcheck()
    worst = float(max(cases.values()))
    write_json(out / "oracle_selfcheck.json",
               {"cases": cases, "worst": worst})
    tol = float(_tol(s, "selfcheck_tol"))
    return [CheckResult(
        "selfcheck/max_error", worst < tol, worst,
        f"worst closed-form vs RK4 mismatch {worst:.2e} < {tol:g}")]


# ---------------------------------------------------------------------------
# Scenario dispatch
# ---------------------------------------------------------------------------

def _build_curve(shape: str, params: dict[str, float], n: int) -> cv.PlaneCurve:
    if shape == "circle":
        return cv.circle_polygon(params["radius"], n=n)
    if shape == "ellipse":
        return cv.ellipse_polygon(params["a"], params["b"], n=n)
    if shape == "rectangle":
        return cv.rectangle_polygon(params["width"], params["height"], n=n)
    if shape == "peanut":
        return cv.peanut_polygon(params["base_radius"], params["amplitude"], n=n)
    if shape == "spiral":
        return cv.spiral_polygon(params["inner_radius"], params["outer_radius"],
                                 params["winding"], n=n)
    raise ax.InvalidInputError(f"no curve builder for shape {shape!r}")


def _run_curve(s: Scenario, out: Path):
    artifacts = []
    if s.shape == "grim_reaper":
        start = oc.grim_reaper(n=s.n, half_width=s.shape_params["half_width"])
        duration = float(s.options["duration"])
        final = oc.evolve_translating_front(
            start, duration, cfl_factor=s.config.cfl_factor,
            resample_every=s.config.resample_every)
        emit_svg(start, out / "initial.svg")
        emit_svg(final, out / "final.svg")
        artifacts += ["initial.svg", "final.svg"]
        checks = _check_translate(s, out, start, final, duration)
        artifacts.append(ARTIFACT_BY_ANALYSIS["translate"])
        return artifacts, checks

    if s.shape == "nested_pair":
        outer = cv.circle_polygon(s.shape_params["outer_radius"], n=s.n)
        inner = cv.ellipse_polygon(s.shape_params["a"], s.shape_params["b"], n=s.n)
        trajs = f1.co_evolve([outer, inner], s.law, s.config)
        for i, traj in enumerate(trajs):
            write_text(out / f"trajectory_{i}.csv", trajectory_csv(traj))
            emit_svg(traj.snapshots[0].curve, out / f"initial_{i}.svg")
            emit_svg(traj.final().curve, out / f"final_{i}.svg")
            artifacts += [f"trajectory_{i}.csv", f"initial_{i}.svg", f"final_{i}.svg"]
        checks = _check_pair_distance(s, out, trajs)
        artifacts.append(ARTIFACT_BY_ANALYSIS["pair-distance"])
        return artifacts, checks

    curve = _build_curve(s.shape, s.shape_params, s.n)
    traj = f1.run(curve, s.law, s.config)
    write_text(out / "trajectory.csv", trajectory_csv(traj))
    emit_svg(traj.snapshots[0].curve, out / "initial.svg")
    emit_svg(traj.final().curve, out / "final.svg")
    artifacts += ["trajectory.csv", "initial.svg", "final.svg"]
    if s.options.get("save_snapshots", "").lower() in ("1", "true", "yes"):
        save_trajectory(out / "snapshots", traj)
        artifacts.append("snapshots/index.json")

    checks = []
    for analysis in s.analyses:
        if analysis == "radius-law":
            times = traj.times()
            measured = [_mean_radius(snap.curve) for snap in traj.snapshots]
            r0 = s.shape_params["radius"]
            reference = [oc.power_circle_radius(r0, s.law.p, t) for t in times]
            checks += _check_radius_law(s, out, times, measured, reference)
        elif analysis == "area-law":
            checks += _check_area_law(s, out, traj)
        elif analysis == "roundness":
            checks += _check_roundness(s, out, traj)
        elif analysis == "convexification":
            checks += _check_convexification(s, out, traj)
        elif analysis == "eccentricity":
            checks += _check_eccentricity(s, out, traj)
        elif analysis == "norm-length":
            checks += _check_norm_length(s, out, traj)
        artifacts.append(ARTIFACT_BY_ANALYSIS[analysis])
    return artifacts, checks


def _build_profile(s: Scenario) -> ax.AxiProfile:
    return ax.build_profile(s.shape, s.n, **s.shape_params)


def _run_axi(s: Scenario, out: Path):
    traj = ax.run_axi(_build_profile(s), s.config)
    artifacts = ["trajectory.csv", "initial.svg", "final.svg"]
    write_text(out / "trajectory.csv", axi_trajectory_csv(traj))
    emit_svg(traj.snapshots[0].profile, out / "initial.svg")
    emit_svg(traj.final().profile, out / "final.svg")
    if s.options.get("save_snapshots", "").lower() in ("1", "true", "yes"):
        save_trajectory(out / "snapshots", traj)
        artifacts.append("snapshots/index.json")
    checks = []
    for analysis in s.analyses:
        if analysis == "radius-law":
            times = traj.times()
            measured = [_sphere_radius(snap.profile) for snap in traj.snapshots]
            r0 = s.shape_params["r0"]
            reference = [oc.shrinker_radius("sphere", r0, t) for t in times]
            checks += _check_radius_law(s, out, times, measured, reference)
        elif analysis == "neck":
            checks += _check_neck(s, out, traj)
        artifacts.append(ARTIFACT_BY_ANALYSIS[analysis])
    return artifacts, checks


def _run_rescale(s: Scenario, out: Path):
    traj = ax.run_axi(_build_profile(s), s.config)
    write_text(out / "trajectory.csv", axi_trajectory_csv(traj))
    artifacts = ["trajectory.csv"]
    checks = []
    for analysis in s.analyses:
        checks += _check_blowup(s, out, traj)
        artifacts.append(ARTIFACT_BY_ANALYSIS[analysis])
    return artifacts, checks


def _run_oracle(s: Scenario, out: Path):
    artifacts = []
    checks = []
    for analysis in s.analyses:
        checks += _check_selfcheck(s, out)
        artifacts.append(ARTIFACT_BY_ANALYSIS[analysis])
    return artifacts, checks


_DISPATCH = {
    KIND_CURVE: _run_curve,
    KIND_AXI: _run_axi,
    KIND_RESCALE: _run_rescale,
    KIND_ORACLE: _run_oracle,
}


def run_scenario(s: Scenario, out_root) -> RunReport:
    """Execute one scenario into its own subdirectory of out_root."""
    started = time.perf_counter()
    out = Path(out_root) / s.name
    out.mkdir(parents=True, exist_ok=True)
    try:
        artifacts, checks = _DISPATCH[s.kind](s, out)
    except Exception as exc:
        return RunReport(
            scenario=s.name,
            wall_time=time.perf_counter() - started,
            error=f"{type(exc).__name__}: {exc}",
        )
    return RunReport(
        scenario=s.name,
        checks=checks,
        wall_time=time.perf_counter() - started,
        artifacts=artifacts,
    )


def accept(scenarios: list[Scenario], out_root, workers: int = 4):
    """Run every scenario; return (reports, summary dict, exit status)."""
    out_root = Path(out_root)
    out_root.mkdir(parents=True, exist_ok=True)
    reports: list[RunReport]
    if workers > 1 and len(scenarios) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda s: run_scenario(s, out_root), scenarios))
    else:
        reports = [run_scenario(s, out_root) for s in scenarios]
    summary = {
        "total": len(reports),
        "passed": sum(r.passed for r in reports),
        "failed": sum(not r.passed for r in reports),
        "scenarios": [
            {
                "name": r.scenario,
                "passed": r.passed,
                "wall_time": round(r.wall_time, 3),
                "error": r.error,
                "artifacts": r.artifacts,
                "checks": [
                    {"name": c.name, "passed": c.passed,
                     "measured": c.measured, "detail": c.detail}
                    for c in r.checks
                ],
            }
            for r in reports
        ],
    }
    write_json(out_root / "summary.json", summary)
    status = 0 if all(r.passed for r in reports) else 1
    return reports, summary, status


def format_table(reports: list[RunReport]) -> str:
    """Human-readable pass/fail table, one scenario per row."""
    name_w = max([len(r.scenario) for r in reports] + [8])
    lines = [f"{'scenario':<{name_w}}  {'status':<6}  {'time':>7}  checks"]
    lines.append("-" * len(lines[0]))
    for r in reports:
        status = "pass" if r.passed else "FAIL"
        if r.error is not None:
            body = f"error: {r.error}"
        else:
            good = sum(c.passed for c in r.checks)
            body = f"{good}/{len(r.checks)} ok"
            failed = [c.name for c in r.checks if not c.passed]
            if failed:
                body += "  failing: " + ", ".join(failed)
        lines.append(f"{r.scenario:<{name_w}}  {status:<6}  {r.wall_time:7.1f}s  {body}")
    total = sum(not r.passed for r in reports)
    lines.append("-" * len(lines[0]))
    lines.append(f"{len(reports)} scenario(s), {total} failing")
    return "\n".join(lines)
