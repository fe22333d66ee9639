"""Explicit evolution of closed plane curves with normal speed sign(k) |k|^p.

The driver is deliberately plain: forward Euler under a parabolic CFL bound,
periodic tangential redistribution through a periodic spline (linear chord
resampling would bleed area every pass), and snapshots recorded on a geometric
schedule in remaining area so the approach to extinction is well sampled.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from . import curves as cv
from .errors import (
    ExtinctError,
    FitFailureError,
    InvalidInputError,
    NumericalBreakdownError,
    TimestepTooLargeError,
)

# Curvatures below this are treated as exactly flat, so degenerate-power laws
# (p < 1) send them nowhere instead of amplifying noise.
CURVATURE_CLAMP = 1e-12
# Auto stop threshold: halt when max |k| exceeds this multiple of the initial.
BLOWUP_FACTOR = 1e4
# Number of geometric area levels aimed for between start and stop.
SNAPSHOT_LEVELS = 140
# Largest fraction of the local spacing a vertex may move per step.
DISPLACEMENT_FRACTION = 0.25

EVENT_EXTINCTION = "extinction-approach"
EVENT_BLOWUP = "curvature-blowup"
EVENT_EMBEDDEDNESS_LOSS = "embeddedness-loss"
EVENT_CONVEXIFICATION = "convexification"


@dataclass(frozen=True)
class SpeedLaw:
    """Normal speed F(k) = sign(k) |k|^p toward the inward normal."""

    p: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.p <= 8.0:
            raise InvalidInputError(f"law.p must be in (0, 8], got {self.p}")

    def speed(self, k: NDArray[np.float64]) -> NDArray[np.float64]:
        mag = np.abs(k)
        out = np.where(mag < CURVATURE_CLAMP, 0.0, np.sign(k) * mag ** self.p)
        return out


@dataclass(frozen=True)
class FlowConfig:
    cfl_factor: float = 0.4
    resample_every: int = 10
    target_vertex_spacing: float | None = None   # None: keep the initial spacing
    stop_area_fraction: float = 0.02
    max_curvature_stop: float | None = None      # None: BLOWUP_FACTOR * initial max
    max_steps: int = 2_000_000

    def __post_init__(self) -> None:
        if self.cfl_factor <= 0 or self.cfl_factor > 1:
            raise InvalidInputError("cfl_factor must be in (0, 1]")
        if self.resample_every <= 0:
            raise InvalidInputError("resample_every must be positive")
        if self.target_vertex_spacing is not None and self.target_vertex_spacing <= 0:
            raise InvalidInputError("target_vertex_spacing must be positive")
        if not 0.0 < self.stop_area_fraction < 1.0:
            raise InvalidInputError("stop_area_fraction must be in (0, 1)")
        if self.max_curvature_stop is not None and self.max_curvature_stop <= 0:
            raise InvalidInputError("max_curvature_stop must be positive")
        if self.max_steps <= 0:
            raise InvalidInputError("max_steps must be positive")


@dataclass(frozen=True)
class Event:
    kind: str
    time: float
    location: tuple[float, float] | None = None


@dataclass(frozen=True)
class Snapshot:
    time: float
    curve: cv.PlaneCurve
    metrics: cv.CurveMetrics


@dataclass
class Trajectory:
    snapshots: list[Snapshot]
    events: list[Event] = field(default_factory=list)
    law: SpeedLaw = field(default_factory=SpeedLaw)
    config: FlowConfig = field(default_factory=FlowConfig)

    def times(self) -> NDArray[np.float64]:
        return np.array([s.time for s in self.snapshots])

    def areas(self) -> NDArray[np.float64]:
        return np.array([abs(s.metrics.enclosed_area) for s in self.snapshots])

    def lengths(self) -> NDArray[np.float64]:
        return np.array([s.metrics.length for s in self.snapshots])

    def final(self) -> Snapshot:
        return self.snapshots[-1]


def normal_velocity(curve: cv.PlaneCurve, law: SpeedLaw) -> NDArray[np.float64]:
    """Per-vertex velocity F(k) * inward_normal."""
    k, inward = cv.curvature_profile(curve)
    return law.speed(k)[:, None] * inward


def _min_spacing(curve: cv.PlaneCurve) -> float:
    v = curve.vertices
    return float(np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1).min())


def cfl_timestep(curve: cv.PlaneCurve, law: SpeedLaw, cfl_factor: float = 1.0) -> float:
    """Parabolic stability bound: cfl * h_min^2 / (2 max|k|^(p-1)).

    For p = 1 the effective diffusivity is one; otherwise the largest local
    diffusivity |k|^(p-1) over non-flat vertices sets the bound.
    """
    h = _min_spacing(curve)
    if law.p == 1.0:
        diffusivity = 1.0
    else:
        k, _ = cv.curvature_profile(curve)
        mag = np.abs(k)
        mag = mag[mag >= CURVATURE_CLAMP]
        diffusivity = float(np.max(mag ** (law.p - 1.0))) if len(mag) else 1.0
    return cfl_factor * h * h / (2.0 * diffusivity)


def step(curve: cv.PlaneCurve, law: SpeedLaw, dt: float) -> cv.PlaneCurve:
    """One forward-Euler step; refuses timesteps above the stability bound."""
    if dt <= 0:
        raise InvalidInputError("dt must be positive")
    bound = cfl_timestep(curve, law, 1.0)
    if dt > bound * (1.0 + 1e-12):
        raise TimestepTooLargeError(
            f"dt={dt:.3e} exceeds the stability bound {bound:.3e}"
        )
    return cv.PlaneCurve(curve.vertices + dt * normal_velocity(curve, law))


class _CurveState:
    """Book-keeping for one curve inside the shared-clock driver.

    Between snapshots the curve lives as a raw vertex array; the validated
    curve object is only rebuilt when a snapshot is recorded.
    """

    def __init__(self, curve: cv.PlaneCurve, law: SpeedLaw, config: FlowConfig):
        self.verts = curve.vertices
        self.orient = 1.0 if curve.counterclockwise else -1.0
        m = cv.metrics(curve)
        self.area0 = abs(m.enclosed_area)
        k0 = max(abs(m.min_curvature), abs(m.max_curvature))
        self.cap = config.max_curvature_stop
        if self.cap is None:
            self.cap = BLOWUP_FACTOR * max(k0, 1.0)
        self.spacing = config.target_vertex_spacing
        if self.spacing is None:
            self.spacing = m.length / len(curve)
        self.ratio = config.stop_area_fraction ** (1.0 / SNAPSHOT_LEVELS)
        self.next_area = self.area0 * self.ratio
        self.was_convex = m.convex
        self.traj = Trajectory([Snapshot(0.0, curve, m)], [], law, config)
        self.done = False


def _step_geometry(
    v: NDArray[np.float64], orient: float
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64], float, float]:
    """Signed curvature, inward normal components, min spacing and area.

    Fused so the driver touches each vertex array a single time per step.
    """
    nxt = np.roll(v, -1, axis=0)
    prv = np.roll(v, 1, axis=0)
    e_next = nxt - v
    e_prev = v - prv
    chord = nxt - prv
    b = np.hypot(e_next[:, 0], e_next[:, 1])
    a = np.roll(b, 1)
    c = np.hypot(chord[:, 0], chord[:, 1])
    cross = e_prev[:, 0] * e_next[:, 1] - e_prev[:, 1] * e_next[:, 0]
    denom = a * b * c
    k = np.where(denom > 0, orient * 2.0 * cross / np.where(denom > 0, denom, 1.0), 0.0)
    inv_c = orient / np.where(c > 0, c, 1.0)
    nx = -chord[:, 1] * inv_c
    ny = chord[:, 0] * inv_c
    area = 0.5 * float(np.sum(v[:, 0] * nxt[:, 1] - nxt[:, 0] * v[:, 1]))
    return k, nx, ny, float(b.min()), area


def _evolve(states: list[_CurveState], law: SpeedLaw, config: FlowConfig) -> None:
    t = 0.0
    steps = 0
    while steps < config.max_steps and not any(s.done for s in states):
        dt = np.inf
        plans = []
        for s in states:
            k, nx, ny, h, area = _step_geometry(s.verts, s.orient)
            kmax = float(np.abs(k).max())
            if kmax >= s.cap:
                i = int(np.argmax(np.abs(k)))
                loc = (float(s.verts[i, 0]), float(s.verts[i, 1]))
                curve = _settle(s, t)
                if curve is not None:
                    _record(s, t, curve, [Event(EVENT_BLOWUP, t, loc)])
                s.done = True
                break
            speed = k if law.p == 1.0 else law.speed(k)
            plans.append((s, speed, nx, ny, area))
            if law.p == 1.0:
                diffusivity = 1.0
            else:
                mag = np.abs(k)
                mag = mag[mag >= CURVATURE_CLAMP]
                diffusivity = float(np.max(mag ** (law.p - 1.0))) if len(mag) else 1.0
            dt = min(dt, config.cfl_factor * h * h / (2.0 * diffusivity))
            vmax = float(np.abs(speed).max())
            if vmax > 0:
                dt = min(dt, DISPLACEMENT_FRACTION * h / vmax)
        if any(s.done for s in states):
            break

        t += dt
        steps += 1
        resample = steps % config.resample_every == 0
        snapshot_due = False
        for s, speed, nx, ny, area in plans:
            disp = dt * speed
            new = np.empty_like(s.verts)
            new[:, 0] = s.verts[:, 0] + disp * nx
            new[:, 1] = s.verts[:, 1] + disp * ny
            if resample:
                d = np.roll(new, -1, axis=0) - new
                total = float(np.hypot(d[:, 0], d[:, 1]).sum())
                n = max(cv.MIN_VERTICES, int(round(total / s.spacing)))
                new = cv.spline_resample_array(new, n)
            s.verts = new
            if area <= s.next_area:
                snapshot_due = True

        if snapshot_due:
            for s in states:
                if s.done:
                    continue
                curve = _settle(s, t)
                if curve is None:
                    continue
                _record(s, t, curve)
                area = abs(s.traj.final().metrics.enclosed_area)
                s.next_area = area * s.ratio
                if area <= config.stop_area_fraction * s.area0:
                    c = cv.curve_centroid(curve)
                    s.traj.events.append(Event(EVENT_EXTINCTION, t, c))
                    s.done = True


def _settle(state: _CurveState, t: float) -> cv.PlaneCurve | None:
    """Validate the working array back into a curve object.

    Collapse below the extinction diameter closes the trajectory with an
    extinction event; any other geometric degeneracy is a genuine failure.
    """
    try:
        return cv.PlaneCurve(state.verts)
    except ExtinctError:
        _record_extinction(state, t)
        return None
    except InvalidInputError as exc:
        raise NumericalBreakdownError(
            f"curve geometry degenerated at t={t:.6g}: {exc}"
        ) from exc


def _record(
    state: _CurveState,
    t: float,
    curve: cv.PlaneCurve,
    events: list[Event] | None = None,
) -> None:
    m = cv.metrics(curve)
    state.traj.snapshots.append(Snapshot(t, curve, m))
    if events:
        state.traj.events.extend(events)
    if not cv.is_embedded(curve):
        state.traj.events.append(Event(EVENT_EMBEDDEDNESS_LOSS, t))
        state.done = True
    if m.convex and not state.was_convex:
        state.traj.events.append(Event(EVENT_CONVEXIFICATION, t))
    state.was_convex = m.convex


def _record_extinction(state: _CurveState, t: float) -> None:
    c = state.verts.mean(axis=0)
    state.traj.events.append(Event(EVENT_EXTINCTION, t, (float(c[0]), float(c[1]))))
    state.done = True


def run(curve: cv.PlaneCurve, law: SpeedLaw, config: FlowConfig | None = None) -> Trajectory:
    """Evolve one curve until an area stop, curvature stop or step budget."""
    config = config or FlowConfig()
    state = _CurveState(curve, law, config)
    _evolve([state], law, config)
    return state.traj


def co_evolve(
    curve_list: list[cv.PlaneCurve], law: SpeedLaw, config: FlowConfig | None = None
) -> list[Trajectory]:
    """Evolve several curves on a shared clock with shared snapshot times.

    The run ends when the first curve reaches a stop condition, so every
    trajectory covers the same time interval with identical snapshot times.
    """
    if not curve_list:
        raise InvalidInputError("need at least one curve")
    config = config or FlowConfig()
    states = [_CurveState(c, law, config) for c in curve_list]
    _evolve(states, law, config)
    return [s.traj for s in states]


# ---------------------------------------------------------------------------
# Trajectory analyses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AreaLaw:
    slope: float                 # least-squares d(area)/dt
    extinction_estimate: float   # zero crossing of the fitted line


def analyze_area_law(traj: Trajectory) -> AreaLaw:
    """Fit area(t) by a line; under unit-power flow the slope is -2 pi and the
    zero crossing predicts the extinction time (initial area / 2 pi)."""
    if traj.law.p != 1.0:
        raise InvalidInputError("area law analysis applies to p = 1 trajectories")
    if len(traj.snapshots) < 10:
        raise InvalidInputError("need at least 10 snapshots to fit the area law")
    times = traj.times()
    areas = traj.areas()
    slope, intercept = np.polyfit(times, areas, 1)
    if slope >= 0:
        raise InvalidInputError("area is not decreasing; no extinction estimate")
    return AreaLaw(slope=float(slope), extinction_estimate=float(-intercept / slope))


def convexification_time(traj: Trajectory) -> float | None:
    """Time of the first snapshot with nonnegative curvature everywhere."""
    for snap in traj.snapshots:
        if snap.metrics.convex:
            return snap.time
    return None


def rescaled_length_series(traj: Trajectory) -> list[tuple[float, float]]:
    """Length normalized to fixed enclosed area, L(t) sqrt(A0 / A(t)).

    Constant (2 sqrt(pi A0)) on shrinking circles; growth signals that the
    flow is driving the shape away from roundness.
    """
    a0 = abs(traj.snapshots[0].metrics.enclosed_area)
    out = []
    for snap in traj.snapshots:
        a = abs(snap.metrics.enclosed_area)
        out.append((snap.time, snap.metrics.length * float(np.sqrt(a0 / a))))
    return out


@dataclass(frozen=True)
class EllipseFit:
    center: tuple[float, float]
    semi_major: float
    semi_minor: float
    eccentricity: float
    angle: float        # radians, major axis vs x-axis
    residual: float     # RMS point-to-conic distance / bounding-box diameter


def fit_ellipse(curve: cv.PlaneCurve) -> EllipseFit:
    """Direct least-squares conic fit constrained to ellipses.

    Uses the stabilized scatter-matrix formulation; the returned residual is
    the RMS first-order (Sampson) distance of the vertices to the fitted conic
    divided by the bounding-box diameter, so it is dilation invariant.
    """
    pts = curve.vertices
    mean = pts.mean(axis=0)
    scale = float(np.abs(pts - mean).max())
    if scale <= 0:
        raise FitFailureError("degenerate point set")
    q = (pts - mean) / scale
    x, y = q[:, 0], q[:, 1]

    d1 = np.stack([x * x, x * y, y * y], axis=1)
    d2 = np.stack([x, y, np.ones_like(x)], axis=1)
    s1 = d1.T @ d1
    s2 = d1.T @ d2
    s3 = d2.T @ d2
    try:
        t_mat = -np.linalg.solve(s3, s2.T)
    except np.linalg.LinAlgError as exc:
        raise FitFailureError("degenerate design matrix") from exc
    m = s1 + s2 @ t_mat
    m_red = np.array([m[2] / 2.0, -m[1], m[0] / 2.0])
    try:
        eigval, eigvec = np.linalg.eig(m_red)
    except np.linalg.LinAlgError as exc:
        raise FitFailureError("conic eigenproblem failed") from exc
    evec = np.real(eigvec)
    cond = 4.0 * evec[0] * evec[2] - evec[1] ** 2
    real_enough = np.abs(np.imag(eigval)) < 1e-9 * (1.0 + np.abs(eigval))
    candidates = np.where(real_enough & (cond > 0))[0]
    if len(candidates) == 0:
        raise FitFailureError("no elliptical solution")
    a1 = evec[:, candidates[0]]
    a2 = t_mat @ a1
    A, B, C = a1
    D, E, F = a2

    det = 4.0 * A * C - B * B
    if det <= 0:
        raise FitFailureError("fitted conic is not an ellipse")
    x0 = (B * E - 2.0 * C * D) / det
    y0 = (B * D - 2.0 * A * E) / det
    f0 = F + (D * x0 + E * y0) / 2.0
    m33 = np.array([[A, B / 2.0], [B / 2.0, C]])
    lam, vecs = np.linalg.eigh(m33)
    axes2 = -f0 / lam
    if np.any(axes2 <= 0):
        raise FitFailureError("fitted conic is not an ellipse")
    axes = np.sqrt(axes2)
    order = np.argsort(axes)[::-1]
    semi_major = float(axes[order[0]] * scale)
    semi_minor = float(axes[order[1]] * scale)
    major_vec = vecs[:, order[0]]
    angle = float(np.arctan2(major_vec[1], major_vec[0]))

    # First-order distance in normalized coordinates, mapped back by the scale.
    qval = A * x * x + B * x * y + C * y * y + D * x + E * y + F
    gx = 2.0 * A * x + B * y + D
    gy = B * x + 2.0 * C * y + E
    grad = np.hypot(gx, gy)
    if np.any(grad <= 0):
        raise FitFailureError("vanishing conic gradient")
    dist = np.abs(qval) / grad * scale
    residual = float(np.sqrt(np.mean(dist * dist)) / cv.bbox_diameter(pts))

    center = (float(mean[0] + x0 * scale), float(mean[1] + y0 * scale))
    ecc = float(np.sqrt(max(0.0, 1.0 - (semi_minor / semi_major) ** 2)))
    return EllipseFit(center, semi_major, semi_minor, ecc, angle, residual)
