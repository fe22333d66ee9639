"""Mean curvature flow of surfaces of revolution via their meridian profile.

A surface of revolution is represented by its meridian in the (x, r) half
plane, r >= 0 being distance from the rotation axis.  The scalar mean
curvature splits into the meridian's own signed curvature plus the rotational
term nu_r / r, so spheres, cylinders, dumbbell necks and thin tori are all
driven by the same sampled formula h = kappa_meridian - nu_r / r with nu the
inward unit normal of the meridian.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray
from scipy.interpolate import CubicSpline

from . import curves as cv
from .errors import (
    DegenerateGeometryError,
    ExtinctError,
    InvalidInputError,
    NoNeckError,
    NumericalBreakdownError,
)
from .flow1d import (
    BLOWUP_FACTOR,
    DISPLACEMENT_FRACTION,
    SNAPSHOT_LEVELS,
    EVENT_BLOWUP,
    Event,
    FlowConfig,
)

TOPOLOGY_TWO_POLES = "twopoles"
TOPOLOGY_PERIODIC = "periodic"
TOPOLOGY_CYLINDER = "cylinder"
TOPOLOGY_OPEN = "open"
TOPOLOGIES = (TOPOLOGY_TWO_POLES, TOPOLOGY_PERIODIC, TOPOLOGY_CYLINDER, TOPOLOGY_OPEN)

EVENT_NECK_PINCH = "neck-pinch"
EVENT_TORUS_COLLAPSE = "torus-collapse"
EVENT_POLE_EXTINCTION = "pole-extinction"

MIN_SAMPLES = 16
# Neck events fire when the waist drops below
# max(NECK_RADIUS_FRACTION * initial waist, NECK_SPACING_FACTOR * local spacing).
NECK_RADIUS_FRACTION = 1e-3
NECK_SPACING_FACTOR = 5.0
MEAN_CONVEX_REL_TOL = 1e-6


@dataclass(frozen=True)
class AxiProfile:
    """Sampled meridian of a surface of revolution.

    samples  : (n, 2) array of (x, r) pairs, r >= 0
    topology : "twopoles"  endpoints on the axis (sphere, dumbbell)
               "periodic"  closed loop off the axis (torus meridian)
               "cylinder"  graph r(x), periodic in x with the given period
               "open"      open arc off the axis, ends held fixed
    period   : x-period, required for the cylinder topology
    """

    samples: NDArray[np.float64]
    topology: str
    period: float | None = None

    def __init__(
        self,
        samples: NDArray[np.float64],
        topology: str = TOPOLOGY_TWO_POLES,
        period: float | None = None,
    ) -> None:
        pts = np.asarray(samples, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise InvalidInputError(
                f"samples must be an (n, 2) array, got shape {pts.shape}"
            )
        if not np.all(np.isfinite(pts)):
            raise InvalidInputError("samples contain non-finite values")
        if len(pts) < MIN_SAMPLES:
            raise DegenerateGeometryError(
                f"need at least {MIN_SAMPLES} samples, got {len(pts)}"
            )
        if topology not in TOPOLOGIES:
            raise InvalidInputError(
                f"topology must be one of {TOPOLOGIES}, got {topology!r}"
            )
        diam = cv.bbox_diameter(pts)
        if diam < cv.EXTINCT_DIAMETER:
            raise ExtinctError(f"profile extent {diam:.3e} below extinction threshold")
        closed = topology == TOPOLOGY_PERIODIC
        gaps = np.diff(pts, axis=0)
        if closed:
            gaps = np.vstack([gaps, pts[:1] - pts[-1:]])
        if np.min(np.hypot(gaps[:, 0], gaps[:, 1])) <= cv.DISTINCT_REL_TOL * diam:
            raise DegenerateGeometryError("coincident consecutive samples")

        pts = pts.copy()
        r = pts[:, 1]
        tiny = 1e-9 * diam
        if topology == TOPOLOGY_TWO_POLES:
            if abs(r[0]) > tiny or abs(r[-1]) > tiny:
                raise InvalidInputError("twopoles profile must start and end at r = 0")
            r[0] = 0.0
            r[-1] = 0.0
            if np.any(r[1:-1] <= 0):
                raise DegenerateGeometryError("interior sample on or below the axis")
        elif topology == TOPOLOGY_OPEN:
            if np.any(r <= 0):
                raise DegenerateGeometryError("open profile sample on or below the axis")
        else:
            if np.any(r <= 0):
                raise DegenerateGeometryError("sample on or below the axis")
        if topology == TOPOLOGY_CYLINDER:
            if period is None or period <= 0:
                raise InvalidInputError("cylinder topology requires a positive period")
            if np.any(np.diff(pts[:, 0]) <= 0):
                raise InvalidInputError("cylinder samples must have increasing x")
            if pts[-1, 0] - pts[0, 0] >= period:
                raise InvalidInputError("cylinder samples must span less than one period")
        else:
            period = None
        if topology in (TOPOLOGY_TWO_POLES, TOPOLOGY_PERIODIC):
            # Simplicity: the meridian plus its axis closure bounds the solid,
            # so it must not cross itself.  For twopoles the closing chord lies
            # on the axis and cannot meet the strictly positive interior.
            if not cv.is_embedded(cv.PlaneCurve(pts)):
                raise InvalidInputError("meridian profile is self-intersecting")

        pts.setflags(write=False)
        object.__setattr__(self, "samples", pts)
        object.__setattr__(self, "topology", topology)
        object.__setattr__(self, "period", period)

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class AxiMetrics:
    surface_area: float
    enclosed_volume: float
    min_radius: float
    min_radius_location: float   # x position of the waist sample
    min_mean_curvature: float
    max_mean_curvature: float
    mean_convex: bool


@dataclass(frozen=True)
class AxiSnapshot:
    time: float
    profile: AxiProfile
    metrics: AxiMetrics


@dataclass
class AxiTrajectory:
    snapshots: list[AxiSnapshot]
    events: list[Event] = field(default_factory=list)
    config: FlowConfig = field(default_factory=FlowConfig)

    def times(self) -> NDArray[np.float64]:
        return np.array([s.time for s in self.snapshots])

    def areas(self) -> NDArray[np.float64]:
        return np.array([s.metrics.surface_area for s in self.snapshots])

    def min_radii(self) -> NDArray[np.float64]:
        return np.array([s.metrics.min_radius for s in self.snapshots])

    def final(self) -> AxiSnapshot:
        return self.snapshots[-1]


# ---------------------------------------------------------------------------
# Mean curvature of a sampled meridian
# ---------------------------------------------------------------------------

def _chain_fields(
    pts: NDArray[np.float64], sigma: float
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
    """Curvature, normal and h for an extended open chain.

    pts has one ghost sample prepended and appended; results cover the real
    samples in between.  sigma orients the normal to the inward side.
    """
    e_prev = pts[1:-1] - pts[:-2]
    e_next = pts[2:] - pts[1:-1]
    chord = pts[2:] - pts[:-2]
    a = np.hypot(e_prev[:, 0], e_prev[:, 1])
    b = np.hypot(e_next[:, 0], e_next[:, 1])
    c = np.hypot(chord[:, 0], chord[:, 1])
    cross = e_prev[:, 0] * e_next[:, 1] - e_prev[:, 1] * e_next[:, 0]
    denom = a * b * c
    mu = np.where(denom > 0, 2.0 * cross / np.where(denom > 0, denom, 1.0), 0.0)
    safe_c = np.where(c > 0, c, 1.0)
    nu = np.empty_like(e_prev)
    nu[:, 0] = sigma * chord[:, 1] / safe_c
    nu[:, 1] = -sigma * chord[:, 0] / safe_c
    kappa = -sigma * mu
    r = pts[1:-1, 1]
    axis_term = np.where(r > 0, nu[:, 1] / np.where(r > 0, r, 1.0), 0.0)
    h = kappa - axis_term
    return kappa, nu, h


def _fields(profile: AxiProfile) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Full-length h and inward normal arrays, poles filled by symmetry.

    At an axis pole both principal curvatures agree, so h there is twice the
    meridian curvature obtained from the ghost reflection (x1, -r1).
    """
    pts = profile.samples
    topo = profile.topology
    if topo == TOPOLOGY_PERIODIC:
        orient = 1.0 if cv.polygon_area(pts) > 0 else -1.0
        ext = np.vstack([pts[-1:], pts, pts[:1]])
        kappa, nu, h = _chain_fields(ext, -orient)
        return h, nu
    if topo == TOPOLOGY_CYLINDER:
        left = pts[-1:] - np.array([[profile.period, 0.0]])
        right = pts[:1] + np.array([[profile.period, 0.0]])
        ext = np.vstack([left, pts, right])
        kappa, nu, h = _chain_fields(ext, 1.0)
        return h, nu
    sigma = 1.0 if pts[-1, 0] >= pts[0, 0] else -1.0
    if topo == TOPOLOGY_TWO_POLES:
        ghost_l = np.array([[pts[1, 0], -pts[1, 1]]])
        ghost_r = np.array([[pts[-2, 0], -pts[-2, 1]]])
        ext = np.vstack([ghost_l, pts, ghost_r])
        kappa, nu, h = _chain_fields(ext, sigma)
        h[0] = 2.0 * kappa[0]
        h[-1] = 2.0 * kappa[-1]
        return h, nu
    # open arc: duplicate the end segments so ends get zero curvature
    ext = np.vstack([2 * pts[:1] - pts[1:2], pts, 2 * pts[-1:] - pts[-2:-1]])
    kappa, nu, h = _chain_fields(ext, sigma)
    return h, nu


def mean_curvature_profile(
    profile: AxiProfile,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Scalar mean curvature and inward meridian normal per sample.

    The mean curvature vector is h * nu.  Entries are reported for every
    sample on periodic and cylinder topologies; axis poles and free arc ends
    carry no curvature estimate and are excluded.
    """
    h, nu = _fields(profile)
    if profile.topology in (TOPOLOGY_TWO_POLES, TOPOLOGY_OPEN):
        return h[1:-1], nu[1:-1]
    return h, nu


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

def _segment_arrays(profile: AxiProfile) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Segment endpoint pairs (p, q) including any wrap-around segment."""
    pts = profile.samples
    if profile.topology == TOPOLOGY_PERIODIC:
        return pts, np.roll(pts, -1, axis=0)
    if profile.topology == TOPOLOGY_CYLINDER:
        q = np.vstack([pts[1:], pts[:1] + np.array([profile.period, 0.0])])
        return pts, q
    return pts[:-1], pts[1:]


def surface_area(profile: AxiProfile) -> float:
    """Lateral area of the revolved polyline, exact per conical frustum."""
    p, q = _segment_arrays(profile)
    slant = np.hypot(q[:, 0] - p[:, 0], q[:, 1] - p[:, 1])
    return float(np.sum(np.pi * (p[:, 1] + q[:, 1]) * slant))


def enclosed_volume(profile: AxiProfile) -> float:
    """Volume of the revolved region, exact per conical frustum slice."""
    p, q = _segment_arrays(profile)
    r0, r1 = p[:, 1], q[:, 1]
    dx = q[:, 0] - p[:, 0]
    return float(abs(np.sum(np.pi / 3.0 * (r0 * r0 + r0 * r1 + r1 * r1) * dx)))


def _plateau_waist(r: NDArray[np.float64]) -> int | None:
    """Index of the deepest interior local minimum of an open chain.

    Runs of equal values count as one sample (a flat tube is a single waist
    candidate, reported at its center); runs touching the chain ends are not
    interior and never qualify.  Returns None when r is free of interior dips.
    """
    keep = np.ones(len(r), dtype=bool)
    keep[1:] = r[1:] != r[:-1]
    starts = np.flatnonzero(keep)
    vals = r[starts]
    if len(vals) < 3:
        return None
    ends = np.append(starts[1:], len(r))
    is_min = (vals[1:-1] < vals[:-2]) & (vals[1:-1] < vals[2:])
    idx = np.flatnonzero(is_min) + 1
    if len(idx) == 0:
        return None
    j = idx[np.argmin(vals[idx])]
    return int((starts[j] + ends[j] - 1) // 2)


def _waist(profile: AxiProfile) -> tuple[float, float, bool]:
    """(min_radius, x location, is_true_waist) by topology."""
    return _waist_of(profile.samples, profile.topology)


def _waist_of(pts: NDArray[np.float64], topo: str) -> tuple[float, float, bool]:
    r = pts[:, 1]
    if topo == TOPOLOGY_PERIODIC:
        center = pts.mean(axis=0)
        d = np.hypot(pts[:, 0] - center[0], pts[:, 1] - center[1])
        i = int(np.argmin(d))
        return float(d[i]), float(pts[i, 0]), True
    if topo == TOPOLOGY_CYLINDER:
        i = int(np.argmin(r))
        return float(r[i]), float(pts[i, 0]), True
    interior = r[1:-1]
    w = _plateau_waist(interior)
    if w is not None:
        i = w + 1
        return float(r[i]), float(pts[i, 0]), True
    i = 1 + int(np.argmin(interior))
    return float(r[i]), float(pts[i, 0]), False


def axi_metrics(profile: AxiProfile) -> AxiMetrics:
    h, _ = _fields(profile)
    if profile.topology == TOPOLOGY_OPEN:
        h = h[1:-1]
    hmin = float(h.min())
    hmax = float(h.max())
    rmin, rmin_x, _ = _waist(profile)
    tol = MEAN_CONVEX_REL_TOL * max(1.0, abs(hmin), abs(hmax))
    return AxiMetrics(
        surface_area=surface_area(profile),
        enclosed_volume=enclosed_volume(profile),
        min_radius=rmin,
        min_radius_location=rmin_x,
        min_mean_curvature=hmin,
        max_mean_curvature=hmax,
        mean_convex=hmin >= -tol,
    )


# ---------------------------------------------------------------------------
# Profile construction
# ---------------------------------------------------------------------------

def sphere_profile(r0: float, n: int = 400) -> AxiProfile:
    """Semicircular meridian of a sphere of radius r0, poles included."""
    if r0 <= 0:
        raise InvalidInputError("sphere radius must be positive")
    if n < MIN_SAMPLES:
        raise InvalidInputError(f"need at least {MIN_SAMPLES} samples")
    theta = np.linspace(0.0, np.pi, n)
    pts = np.column_stack([-r0 * np.cos(theta), r0 * np.sin(theta)])
    pts[0, 1] = 0.0
    pts[-1, 1] = 0.0
    return AxiProfile(pts, TOPOLOGY_TWO_POLES)


def torus_profile(ring_r: float, tube_r: float, n: int = 400) -> AxiProfile:
    """Circular meridian of radius tube_r centered at distance ring_r."""
    if ring_r <= 0 or tube_r <= 0:
        raise InvalidInputError("torus radii must be positive")
    if tube_r >= ring_r:
        raise InvalidInputError("tube radius must be smaller than the ring radius")
    if n < MIN_SAMPLES:
        raise InvalidInputError(f"need at least {MIN_SAMPLES} samples")
    theta = np.arange(n) * (2.0 * np.pi / n)
    pts = np.column_stack([tube_r * np.sin(theta), ring_r + tube_r * np.cos(theta)])
    return AxiProfile(pts, TOPOLOGY_PERIODIC)


def cylinder_profile(radius: float, period: float = 1.0, n: int = 128) -> AxiProfile:
    """Straight meridian r = radius, periodic in x with the given period."""
    if radius <= 0 or period <= 0:
        raise InvalidInputError("cylinder radius and period must be positive")
    if n < MIN_SAMPLES:
        raise InvalidInputError(f"need at least {MIN_SAMPLES} samples")
    x = np.arange(n) * (period / n)
    pts = np.column_stack([x, np.full(n, float(radius))])
    return AxiProfile(pts, TOPOLOGY_CYLINDER, period=period)


# Fillet radius as a multiple of the lobe radius.  Along the fillet the mean
# curvature is smallest at the lobe junction, where it equals
# 1/lobe_r - 1/fillet_r, so any factor above one keeps the dumbbell mean
# convex; 1.5 leaves a (1/3)/lobe_r margin.
FILLET_RADIUS_FACTOR = 1.5


def dumbbell_profile(
    lobe_r: float, tube_r: float, tube_len: float, n: int = 800
) -> AxiProfile:
    """Two spherical lobes joined by a straight tube with tangent fillet arcs.

    The tube spans [-tube_len/2, tube_len/2] at radius tube_r; fillet arcs of
    radius FILLET_RADIUS_FACTOR * lobe_r meet both the tube line and the lobe
    circles tangentially, so the meridian is C1 and everywhere mean convex.
    """
    if lobe_r <= 0 or tube_r <= 0 or tube_len <= 0:
        raise InvalidInputError("dumbbell dimensions must be positive")
    if tube_r >= lobe_r:
        raise InvalidInputError("tube radius must be smaller than the lobe radius")
    if n < 8 * MIN_SAMPLES:
        raise InvalidInputError(f"need at least {8 * MIN_SAMPLES} samples")

    rho = FILLET_RADIUS_FACTOR * lobe_r
    d = tube_len / 2.0
    # Lobe center distance set so the fillet is tangent to the tube line at
    # x = -d and externally tangent to the lobe circle.
    shift = np.sqrt((lobe_r + rho) ** 2 - (tube_r + rho) ** 2)
    c = d + shift
    fillet_center = np.array([-d, tube_r + rho])
    lobe_center = np.array([-c, 0.0])
    to_lobe = lobe_center - fillet_center
    phi1 = np.arctan2(to_lobe[1], to_lobe[0])        # in (-pi, -pi/2)
    phi2 = -np.pi / 2.0
    theta_t = np.arctan2(tube_r + rho, shift)        # lobe tangency angle

    lobe_arc = lobe_r * (np.pi - theta_t)
    fillet_arc = rho * (phi2 - phi1)
    half_len = lobe_arc + fillet_arc + d
    n_half = max(4 * MIN_SAMPLES, n // 2)
    n_lobe = max(8, int(round(n_half * lobe_arc / half_len)))
    n_fillet = max(8, int(round(n_half * fillet_arc / half_len)))
    n_tube = max(8, n_half - n_lobe - n_fillet)

    theta = np.linspace(np.pi, theta_t, n_lobe + 1)
    lobe = np.column_stack(
        [lobe_center[0] + lobe_r * np.cos(theta), lobe_r * np.sin(theta)]
    )
    lobe[0, 1] = 0.0
    phi = np.linspace(phi1, phi2, n_fillet + 1)[1:]
    fillet = np.column_stack(
        [fillet_center[0] + rho * np.cos(phi), fillet_center[1] + rho * np.sin(phi)]
    )
    fillet[-1] = (-d, tube_r)   # tangency with the tube line, exact
    xs = np.linspace(-d, 0.0, n_tube + 1)[1:]
    tube = np.column_stack([xs, np.full(n_tube, float(tube_r))])
    left = np.vstack([lobe, fillet, tube])
    right = left[:-1][::-1].copy()
    right[:, 0] = -right[:, 0]
    pts = np.vstack([left, right])
    return AxiProfile(pts, TOPOLOGY_TWO_POLES)


def build_profile(shape: str, n: int, **dims: float) -> AxiProfile:
    """Construct a named meridian profile.

    shape one of "sphere" (r0), "dumbbell" (lobe_r, tube_r, tube_len),
    "torus" (ring_r, tube_r), "cylinder" (radius, period).
    """
    builders = {
        "sphere": (sphere_profile, ("r0",)),
        "dumbbell": (dumbbell_profile, ("lobe_r", "tube_r", "tube_len")),
        "torus": (torus_profile, ("ring_r", "tube_r")),
        "cylinder": (cylinder_profile, ("radius", "period")),
    }
    if shape not in builders:
        raise InvalidInputError(f"unknown profile shape {shape!r}")
    fn, names = builders[shape]
    missing = [k for k in names if k not in dims]
    if missing:
        raise InvalidInputError(f"{shape} profile needs parameters {missing}")
    extra = [k for k in dims if k not in names]
    if extra:
        raise InvalidInputError(f"unknown {shape} parameters {extra}")
    args = [dims[k] for k in names]
    return fn(*args, n=n)


# ---------------------------------------------------------------------------
# Evolution
# ---------------------------------------------------------------------------

class _AxiState:
    def __init__(self, profile: AxiProfile, config: FlowConfig):
        self.pts = profile.samples
        self.topology = profile.topology
        self.period = profile.period
        m = axi_metrics(profile)
        self.area0 = m.surface_area
        h0 = max(abs(m.min_mean_curvature), abs(m.max_mean_curvature))
        self.cap = config.max_curvature_stop
        if self.cap is None:
            self.cap = BLOWUP_FACTOR * max(h0, 1.0)
        self.spacing = config.target_vertex_spacing
        if self.spacing is None:
            self.spacing = _chain_length(profile) / len(profile)
        rmin0, _, true_waist = _waist(profile)
        self.waist0 = rmin0 if true_waist else None
        self.ratio = config.stop_area_fraction ** (1.0 / SNAPSHOT_LEVELS)
        self.next_area = self.area0 * self.ratio
        self.next_waist = rmin0 * self.ratio if true_waist else 0.0
        self.traj = AxiTrajectory([AxiSnapshot(0.0, profile, m)], [], config)


def _chain_length(profile: AxiProfile) -> float:
    p, q = _segment_arrays(profile)
    return float(np.hypot(q[:, 0] - p[:, 0], q[:, 1] - p[:, 1]).sum())


def _pinch_event_kind(topology: str) -> str:
    return EVENT_TORUS_COLLAPSE if topology == TOPOLOGY_PERIODIC else EVENT_NECK_PINCH


def _axi_resample(
    pts: NDArray[np.float64], topology: str, period: float | None, spacing: float
) -> NDArray[np.float64]:
    """Arclength redistribution preserving topology constraints."""
    if topology == TOPOLOGY_PERIODIC:
        d = np.roll(pts, -1, axis=0) - pts
        total = float(np.hypot(d[:, 0], d[:, 1]).sum())
        n = max(MIN_SAMPLES, int(round(total / spacing)))
        return cv.spline_resample_array(pts, n)
    if topology == TOPOLOGY_CYLINDER:
        # keep the uniform x grid; refresh r through a periodic spline in x
        x = pts[:, 0]
        x0 = x[0]
        ext_x = np.append(x, x0 + period)
        ext_r = np.append(pts[:, 1], pts[0, 1])
        spline = CubicSpline(ext_x, ext_r, bc_type="periodic")
        n = len(pts)
        grid = x0 + np.arange(n) * (period / n)
        out = np.column_stack([grid, spline(grid)])
        return out
    d = np.diff(pts, axis=0)
    seg = np.hypot(d[:, 0], d[:, 1])
    s = np.concatenate([[0.0], np.cumsum(seg)])
    total = float(s[-1])
    n = max(MIN_SAMPLES, int(round(total / spacing))) + 1
    spline = CubicSpline(s, pts, axis=0)
    targets = np.linspace(0.0, total, n)
    out = spline(targets)
    out[0] = pts[0]
    out[-1] = pts[-1]
    if topology == TOPOLOGY_TWO_POLES:
        out[0, 1] = 0.0
        out[-1, 1] = 0.0
    return out


def _axi_velocity(
    state: _AxiState,
) -> tuple[NDArray[np.float64], NDArray[np.float64], float, float, float]:
    """Velocity h*nu with pole guard; plus |h|max, min spacing, interior rmin."""
    pts = state.pts
    topo = state.topology
    if topo == TOPOLOGY_PERIODIC:
        orient = 1.0 if cv.polygon_area(pts) > 0 else -1.0
        ext = np.vstack([pts[-1:], pts, pts[:1]])
        kappa, nu, h = _chain_fields(ext, -orient)
        d = np.roll(pts, -1, axis=0) - pts
        seg = np.hypot(d[:, 0], d[:, 1])
        r_int = float(pts[:, 1].min())
    elif topo == TOPOLOGY_CYLINDER:
        left = pts[-1:] - np.array([[state.period, 0.0]])
        right = pts[:1] + np.array([[state.period, 0.0]])
        ext = np.vstack([left, pts, right])
        kappa, nu, h = _chain_fields(ext, 1.0)
        d = np.diff(ext[1:], axis=0)
        seg = np.hypot(d[:, 0], d[:, 1])
        r_int = float(pts[:, 1].min())
    else:
        sigma = 1.0 if pts[-1, 0] >= pts[0, 0] else -1.0
        ghost_l = np.array([[pts[1, 0], -pts[1, 1]]])
        ghost_r = np.array([[pts[-2, 0], -pts[-2, 1]]])
        ext = np.vstack([ghost_l, pts, ghost_r])
        kappa, nu, h = _chain_fields(ext, sigma)
        # Poles move along the axis at twice the meridian curvature, capped by
        # the neighboring samples so a noisy pole cannot outrun its cap.
        for i, j in ((0, 1), (-1, -2)):
            pole_h = 2.0 * kappa[i]
            lim = 2.0 * abs(h[j])
            h[i] = np.clip(pole_h, -lim, lim)
        d = np.diff(pts, axis=0)
        seg = np.hypot(d[:, 0], d[:, 1])
        r_int = float(pts[1:-1, 1].min())
    vel = h[:, None] * nu
    return vel, h, float(np.abs(h).max()), float(seg.min()), r_int


def run_axi(profile: AxiProfile, config: FlowConfig | None = None) -> AxiTrajectory:
    """Evolve a meridian by mean curvature until a pinch, collapse or stop.

    Neck events (neck-pinch for axis-bounded and cylinder topologies,
    torus-collapse for periodic ones) fire when the waist drops below
    max(1e-3 x initial waist, 5 x local spacing); the run halts at the event
    instead of continuing through the singularity.
    """
    if profile.topology == TOPOLOGY_OPEN:
        raise InvalidInputError("open arcs are static; evolution needs a closed solid")
    config = config or FlowConfig()
    state = _AxiState(profile, config)
    t = 0.0
    steps = 0
    while steps < config.max_steps:
        vel, h, hmax, h_space, r_int = _axi_velocity(state)
        if hmax >= state.cap:
            i = int(np.argmax(np.abs(h)))
            loc = (float(state.pts[i, 0]), float(state.pts[i, 1]))
            _axi_record(state, t, [Event(EVENT_BLOWUP, t, loc)])
            break
        dt = config.cfl_factor * min(h_space * h_space, h_space * r_int) / 4.0
        if hmax > 0:
            dt = min(dt, DISPLACEMENT_FRACTION * h_space / hmax)
        t += dt
        steps += 1
        new = state.pts + dt * vel
        if state.topology == TOPOLOGY_TWO_POLES:
            new[0, 1] = 0.0
            new[-1, 1] = 0.0
            interior = new[1:-1, 1]
        else:
            interior = new[:, 1]
        if steps % config.resample_every == 0:
            new = _axi_resample(new, state.topology, state.period, state.spacing)
            if state.topology == TOPOLOGY_TWO_POLES:
                interior = new[1:-1, 1]
            else:
                interior = new[:, 1]
        state.pts = new

        rmin, rmin_x, true_waist = _waist_of(state.pts, state.topology)
        if state.topology != TOPOLOGY_TWO_POLES or true_waist:
            thr = NECK_SPACING_FACTOR * _local_spacing(state.pts, rmin_x)
            if state.waist0 is not None:
                thr = max(thr, NECK_RADIUS_FRACTION * state.waist0)
            if rmin < thr:
                kind = _pinch_event_kind(state.topology)
                _axi_record(state, t, [Event(kind, t, (rmin_x, rmin))])
                break
        if np.any(interior <= 0):
            raise NumericalBreakdownError(
                f"interior sample reached the axis at t={t:.6g} before a neck event"
            )

        area = _frustum_area(state)
        due = area <= state.next_area or (
            state.waist0 is not None and rmin <= state.next_waist
        )
        if due:
            if not _axi_record(state, t):
                break
            m = state.traj.final().metrics
            state.next_area = m.surface_area * state.ratio
            if state.waist0 is not None:
                state.next_waist = m.min_radius * state.ratio
            if m.surface_area <= config.stop_area_fraction * state.area0:
                kind = (
                    EVENT_POLE_EXTINCTION
                    if state.topology == TOPOLOGY_TWO_POLES
                    else _pinch_event_kind(state.topology)
                )
                x_mid = float(state.pts[:, 0].mean())
                state.traj.events.append(Event(kind, t, (x_mid, 0.0)))
                break
    return state.traj


def _frustum_area(state: _AxiState) -> float:
    pts = state.pts
    if state.topology == TOPOLOGY_PERIODIC:
        q = np.roll(pts, -1, axis=0)
    elif state.topology == TOPOLOGY_CYLINDER:
        q = np.vstack([pts[1:], pts[:1] + np.array([state.period, 0.0])])
    else:
        pts, q = pts[:-1], pts[1:]
    slant = np.hypot(q[:, 0] - pts[:, 0], q[:, 1] - pts[:, 1])
    return float(np.sum(np.pi * (pts[:, 1] + q[:, 1]) * slant))


def _local_spacing(pts: NDArray[np.float64], x_at: float) -> float:
    i = int(np.argmin(np.abs(pts[:, 0] - x_at)))
    lo = max(0, i - 1)
    hi = min(len(pts) - 1, i + 1)
    d = pts[hi] - pts[lo]
    return float(np.hypot(d[0], d[1]) / max(1, hi - lo))


def _axi_record(state: _AxiState, t: float, events: list[Event] | None = None) -> bool:
    try:
        profile = AxiProfile(state.pts, state.topology, state.period)
    except ExtinctError:
        x_mid = float(state.pts[:, 0].mean())
        state.traj.events.append(Event(EVENT_POLE_EXTINCTION, t, (x_mid, 0.0)))
        return False
    except InvalidInputError as exc:
        raise NumericalBreakdownError(
            f"meridian degenerated at t={t:.6g}: {exc}"
        ) from exc
    state.traj.snapshots.append(AxiSnapshot(t, profile, axi_metrics(profile)))
    if events:
        state.traj.events.extend(events)
    return True


# ---------------------------------------------------------------------------
# Neck analysis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NeckReport:
    pinch_time: float                       # fitted T with r(t)^2 = 2 (T - t)
    series: NDArray[np.float64]             # (m, 2) columns (time, min_radius)


def neck_report(traj: AxiTrajectory) -> NeckReport:
    """One-parameter fit of the shrinking-cylinder law to the waist series.

    Fits min_radius(t)^2 = 2 (T - t) by least squares over the last decade of
    waist decay (radii within 10x of the smallest recorded value).
    """
    kinds = {e.kind for e in traj.events}
    if not kinds & {EVENT_NECK_PINCH, EVENT_TORUS_COLLAPSE}:
        raise NoNeckError("trajectory has no neck-pinch or torus-collapse event")
    times = traj.times()
    radii = traj.min_radii()
    r_last = radii.min()
    mask = radii <= 10.0 * r_last
    if mask.sum() < 3:
        raise NoNeckError("too few snapshots in the final decade of waist decay")
    t_sel = times[mask]
    r_sel = radii[mask]
    pinch = float(np.mean(t_sel + 0.5 * r_sel * r_sel))
    return NeckReport(pinch_time=pinch, series=np.column_stack([times, radii]))


# ---------------------------------------------------------------------------
# Profile text format
# ---------------------------------------------------------------------------

def format_profile(profile: AxiProfile) -> str:
    header = f"# topology={profile.topology}"
    if profile.period is not None:
        header += f" period={profile.period:.17g}"
    lines = [header]
    lines.extend(f"{x:.17g} {r:.17g}" for x, r in profile.samples)
    return "\n".join(lines) + "\n"


def parse_profile(text: str) -> AxiProfile:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# topology="):
        raise InvalidInputError("profile text must start with '# topology=...'")
    head = lines[0][2:].split()
    topology = head[0].split("=", 1)[1]
    period = None
    for tok in head[1:]:
        key, _, val = tok.partition("=")
        if key == "period":
            try:
                period = float(val)
            except ValueError as exc:
                raise InvalidInputError(f"bad period value {val!r}") from exc
        else:
            raise InvalidInputError(f"unknown profile header field {key!r}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise InvalidInputError(f"line {lineno}: expected 'x r', got {line!r}")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise InvalidInputError(f"line {lineno}: non-numeric value") from exc
    return AxiProfile(np.array(rows, dtype=np.float64), topology, period)


def write_profile(profile: AxiProfile, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_profile(profile))


def read_profile(path) -> AxiProfile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_profile(fh.read())
