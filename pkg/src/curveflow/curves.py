"""Closed plane curves as cyclic vertex polylines, with discrete geometry ops.

Curvature is estimated per vertex from the circle through the vertex and its
two neighbors, signed positive where the curve bends toward the enclosed
region.  Inward normals follow the same convention, so the curvature vector
``k * n`` is independent of traversal direction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.interpolate import CubicSpline

from .errors import DegenerateGeometryError, ExtinctError, InvalidInputError

MIN_VERTICES = 8
# Consecutive vertices closer than this fraction of the bounding-box diameter
# count as coincident.
DISTINCT_REL_TOL = 1e-12
# Curves smaller than this are treated as already gone, not as bad input.
EXTINCT_DIAMETER = 1e-9
# Signed curvatures above -CONVEX_REL_TOL * max|k| still count as convex.
CONVEX_REL_TOL = 1e-6

Float2 = tuple[float, float]


def _as_vertex_array(vertices) -> NDArray[np.float64]:
    arr = np.asarray(vertices, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidInputError(f"vertices must have shape (n, 2), got {arr.shape}")
    return arr


def polygon_area(vertices: NDArray[np.float64]) -> float:
    """Shoelace area, positive for counterclockwise traversal."""
    x = vertices[:, 0]
    y = vertices[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def bbox_diameter(vertices: NDArray[np.float64]) -> float:
    span = vertices.max(axis=0) - vertices.min(axis=0)
    return float(np.hypot(span[0], span[1]))


@dataclass(frozen=True)
class PlaneCurve:
    """Closed polyline stored cyclically (no repeated closing vertex)."""

    vertices: NDArray[np.float64]
    counterclockwise: bool = False

    def __init__(self, vertices) -> None:
        arr = _as_vertex_array(vertices)
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("vertices must be finite")
        if len(arr) < MIN_VERTICES:
            raise DegenerateGeometryError(
                f"need at least {MIN_VERTICES} vertices, got {len(arr)}"
            )
        diam = bbox_diameter(arr)
        if diam < EXTINCT_DIAMETER:
            raise ExtinctError(f"bounding-box diameter {diam:.3e} below extinction threshold")
        gaps = np.linalg.norm(np.roll(arr, -1, axis=0) - arr, axis=1)
        if gaps.min() <= DISTINCT_REL_TOL * diam:
            raise DegenerateGeometryError("consecutive vertices coincide")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "vertices", arr)
        object.__setattr__(self, "counterclockwise", polygon_area(arr) > 0.0)

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class CurveMetrics:
    length: float
    enclosed_area: float          # signed, positive for counterclockwise
    isoperimetric_ratio: float    # L^2 / (4 pi |A|), >= 1 up to discretization
    min_curvature: float
    max_curvature: float
    total_turning: float          # integral of signed curvature, 2 pi for embedded ccw
    convex: bool


def _edge_frames(vertices: NDArray[np.float64]):
    """Per-vertex previous edge, next edge and neighbor chord."""
    prev_pts = np.roll(vertices, 1, axis=0)
    next_pts = np.roll(vertices, -1, axis=0)
    e_prev = vertices - prev_pts
    e_next = next_pts - vertices
    chord = next_pts - prev_pts
    return e_prev, e_next, chord


def curvature_profile(curve: PlaneCurve) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Signed curvature and inward unit normal at every vertex.

    The magnitude is the inverse circumradius of each vertex-neighbor triple;
    the sign is positive where the curve bends toward the enclosed region.
    """
    v = curve.vertices
    e_prev, e_next, chord = _edge_frames(v)
    a = np.linalg.norm(e_prev, axis=1)
    b = np.linalg.norm(e_next, axis=1)
    c = np.linalg.norm(chord, axis=1)
    cross = e_prev[:, 0] * e_next[:, 1] - e_prev[:, 1] * e_next[:, 0]
    orient = 1.0 if curve.counterclockwise else -1.0

    # A fold-back vertex (prev == next) has no defined circumcircle; treat it
    # as flat rather than dividing by zero.
    safe_c = np.where(c > 0.0, c, 1.0)
    k = orient * 2.0 * cross / (a * b * safe_c)
    k = np.where(c > 0.0, k, 0.0)

    tangent = chord / safe_c[:, None]
    left_normal = np.stack([-tangent[:, 1], tangent[:, 0]], axis=1)
    inward = orient * left_normal
    return k, inward


def curvature_vectors(curve: PlaneCurve) -> NDArray[np.float64]:
    """Curvature vector ``k * inward_normal`` per vertex (orientation-free)."""
    k, inward = curvature_profile(curve)
    return k[:, None] * inward


def turning_angles(curve: PlaneCurve) -> NDArray[np.float64]:
    """Exterior angle at each vertex, positive toward the enclosed region."""
    e_prev, e_next, _ = _edge_frames(curve.vertices)
    cross = e_prev[:, 0] * e_next[:, 1] - e_prev[:, 1] * e_next[:, 0]
    dot = np.sum(e_prev * e_next, axis=1)
    orient = 1.0 if curve.counterclockwise else -1.0
    return orient * np.arctan2(cross, dot)


def metrics(curve: PlaneCurve) -> CurveMetrics:
    """Scalar summary of a curve; curvature stats use the vertex estimator."""
    v = curve.vertices
    edges = np.roll(v, -1, axis=0) - v
    length = float(np.sum(np.linalg.norm(edges, axis=1)))
    area = polygon_area(v)
    k, _ = curvature_profile(curve)
    kmin = float(k.min())
    kmax = float(k.max())
    tol = CONVEX_REL_TOL * max(1.0, float(np.abs(k).max()))
    return CurveMetrics(
        length=length,
        enclosed_area=area,
        isoperimetric_ratio=length * length / (4.0 * np.pi * abs(area)),
        min_curvature=kmin,
        max_curvature=kmax,
        total_turning=float(np.sum(turning_angles(curve))),
        convex=bool(kmin >= -tol),
    )


def _cumulative_arclength(vertices: NDArray[np.float64], closed: bool) -> NDArray[np.float64]:
    pts = np.vstack([vertices, vertices[:1]]) if closed else vertices
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    return np.concatenate([[0.0], np.cumsum(seg)])


def resample_uniform(curve: PlaneCurve, n: int) -> PlaneCurve:
    """Redistribute to ``n`` vertices at equal arclength spacing along the polygon.

    Linear interpolation along the existing edges: the output lies exactly on
    the input polygon, so total length can only shrink, and by less than 0.1%
    once ``n`` is at least the input vertex count.
    """
    if n < MIN_VERTICES:
        raise InvalidInputError(f"n must be at least {MIN_VERTICES}, got {n}")
    v = curve.vertices
    s = _cumulative_arclength(v, closed=True)
    total = s[-1]
    targets = np.arange(n) * (total / n)
    ext = np.vstack([v, v[:1]])
    out = np.stack(
        [np.interp(targets, s, ext[:, 0]), np.interp(targets, s, ext[:, 1])], axis=1
    )
    return PlaneCurve(out)


def spline_resample_array(vertices: NDArray[np.float64], n: int) -> NDArray[np.float64]:
    """Periodic-spline redistribution on a raw closed vertex array."""
    s = _cumulative_arclength(vertices, closed=True)
    ext = np.vstack([vertices, vertices[:1]])
    spline = CubicSpline(s, ext, axis=0, bc_type="periodic")
    targets = np.arange(n) * (s[-1] / n)
    return spline(targets)


def resample_spline(curve: PlaneCurve, n: int) -> PlaneCurve:
    """Redistribute through a periodic cubic spline fitted to the vertices.

    Unlike :func:`resample_uniform` this does not systematically pull vertices
    inside the curve, so repeated use during a flow does not bleed area.
    """
    if n < MIN_VERTICES:
        raise InvalidInputError(f"n must be at least {MIN_VERTICES}, got {n}")
    return PlaneCurve(spline_resample_array(curve.vertices, n))


def _chunked_pairs(n: int, block: int = 256):
    for start in range(0, n, block):
        yield start, min(start + block, n)


def _interval_pairs(
    lo: NDArray[np.float64], hi: NDArray[np.float64]
) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
    """All index pairs whose [lo, hi] intervals overlap, each pair once.

    Sweep over intervals sorted by lower end; for near-uniform segments of a
    curve the output is close to linear in the input size.
    """
    order = np.argsort(lo, kind="stable")
    xs = lo[order]
    xe = hi[order]
    k = np.arange(len(xs))
    upper = np.searchsorted(xs, xe, side="right")
    counts = np.maximum(upper - k - 1, 0)
    total = int(counts.sum())
    if total == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    ii = np.repeat(k, counts)
    starts = np.cumsum(counts) - counts
    jj = np.arange(total) - np.repeat(starts, counts) + ii + 1
    return order[ii], order[jj]


def _segments_touch(
    a1: NDArray[np.float64],
    a2: NDArray[np.float64],
    b1: NDArray[np.float64],
    b2: NDArray[np.float64],
    tol: float,
) -> NDArray[np.bool_]:
    """Per-pair test whether segments a and b cross or touch within tol."""
    da = a2 - a1
    db = b2 - b1
    diff = b1 - a1
    d1 = db[:, 0] * (-diff[:, 1]) - db[:, 1] * (-diff[:, 0])
    d2 = db[:, 0] * (da - diff)[:, 1] - db[:, 1] * (da - diff)[:, 0]
    d3 = da[:, 0] * diff[:, 1] - da[:, 1] * diff[:, 0]
    d4 = da[:, 0] * (diff + db)[:, 1] - da[:, 1] * (diff + db)[:, 0]

    eps_a = tol * np.hypot(da[:, 0], da[:, 1])
    eps_b = tol * np.hypot(db[:, 0], db[:, 1])
    s1 = np.where(np.abs(d1) <= eps_b, 0, np.sign(d1))
    s2 = np.where(np.abs(d2) <= eps_b, 0, np.sign(d2))
    s3 = np.where(np.abs(d3) <= eps_a, 0, np.sign(d3))
    s4 = np.where(np.abs(d4) <= eps_a, 0, np.sign(d4))

    touch = (s1 * s2 < 0) & (s3 * s4 < 0)
    degenerate = (s1 == 0) | (s2 == 0) | (s3 == 0) | (s4 == 0)
    if degenerate.any():
        # Collinear or endpoint-touching pairs intersect iff their boxes meet.
        amin = np.minimum(a1, a2)
        amax = np.maximum(a1, a2)
        bmin = np.minimum(b1, b2)
        bmax = np.maximum(b1, b2)
        boxes = np.all((amin <= bmax + tol) & (bmin <= amax + tol), axis=-1)
        touch = touch | (degenerate & boxes)
    return touch


def is_embedded(curve: PlaneCurve) -> bool:
    """Exact segment-pair test: no two non-adjacent edges may touch or cross."""
    v = curve.vertices
    n = len(v)
    p1 = v
    p2 = np.roll(v, -1, axis=0)
    tol = DISTINCT_REL_TOL * bbox_diameter(v)
    mins = np.minimum(p1, p2)
    maxs = np.maximum(p1, p2)
    ii, jj = _interval_pairs(mins[:, 0], maxs[:, 0] + tol)
    if len(ii) == 0:
        return True
    gap = (jj - ii) % n
    keep = (
        (gap != 1)
        & (gap != n - 1)
        & (mins[ii, 1] <= maxs[jj, 1] + tol)
        & (mins[jj, 1] <= maxs[ii, 1] + tol)
    )
    ii, jj = ii[keep], jj[keep]
    if len(ii) == 0:
        return True
    return not _segments_touch(p1[ii], p2[ii], p1[jj], p2[jj], tol).any()


def _points_to_segments(points: NDArray[np.float64], seg_a: NDArray[np.float64],
                        seg_b: NDArray[np.float64]) -> float:
    """Min distance from any point to any segment, chunked over points."""
    d = seg_b - seg_a
    seg_len2 = np.maximum(np.sum(d * d, axis=1), 1e-300)
    best = np.inf
    for lo, hi in _chunked_pairs(len(points), block=512):
        p = points[lo:hi, None, :]
        t = np.sum((p - seg_a[None, :, :]) * d[None, :, :], axis=-1) / seg_len2[None, :]
        t = np.clip(t, 0.0, 1.0)
        closest = seg_a[None, :, :] + t[..., None] * d[None, :, :]
        dist = np.linalg.norm(p - closest, axis=-1)
        best = min(best, float(dist.min()))
    return best


def _curves_cross(c1: PlaneCurve, c2: PlaneCurve) -> bool:
    """Whether the two boundaries properly cross (touching is not crossing)."""
    v1, v2 = c1.vertices, c2.vertices
    n1 = len(v1)
    p1 = np.vstack([v1, v2])
    p2 = np.vstack([np.roll(v1, -1, axis=0), np.roll(v2, -1, axis=0)])
    mins = np.minimum(p1, p2)
    maxs = np.maximum(p1, p2)
    ii, jj = _interval_pairs(mins[:, 0], maxs[:, 0])
    keep = (
        ((ii < n1) != (jj < n1))
        & (mins[ii, 1] <= maxs[jj, 1])
        & (mins[jj, 1] <= maxs[ii, 1])
    )
    ii, jj = ii[keep], jj[keep]
    if len(ii) == 0:
        return False
    a1, a2 = p1[ii], p2[ii]
    b1, b2 = p1[jj], p2[jj]
    da = a2 - a1
    db = b2 - b1
    diff = b1 - a1
    t1 = db[:, 0] * (-diff[:, 1]) - db[:, 1] * (-diff[:, 0])
    t2 = db[:, 0] * (da - diff)[:, 1] - db[:, 1] * (da - diff)[:, 0]
    t3 = da[:, 0] * diff[:, 1] - da[:, 1] * diff[:, 0]
    t4 = da[:, 0] * (diff + db)[:, 1] - da[:, 1] * (diff + db)[:, 0]
    return bool(((t1 * t2 < 0) & (t3 * t4 < 0)).any())


def min_distance(c1: PlaneCurve, c2: PlaneCurve) -> float:
    """Minimum distance between two curves as unions of segments (0 if they cross)."""
    if _curves_cross(c1, c2):
        return 0.0
    v1, v2 = c1.vertices, c2.vertices
    d12 = _points_to_segments(v1, v2, np.roll(v2, -1, axis=0))
    d21 = _points_to_segments(v2, v1, np.roll(v1, -1, axis=0))
    return min(d12, d21)


def curve_centroid(curve: PlaneCurve) -> Float2:
    c = curve.vertices.mean(axis=0)
    return float(c[0]), float(c[1])


# ---------------------------------------------------------------------------
# Shape factories
# ---------------------------------------------------------------------------

def circle_polygon(radius: float, n: int = 512, center: Float2 = (0.0, 0.0)) -> PlaneCurve:
    if radius <= 0:
        raise InvalidInputError("radius must be positive")
    t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    pts = np.stack([center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)], axis=1)
    return PlaneCurve(pts)


def ellipse_polygon(a: float, b: float, n: int = 512, center: Float2 = (0.0, 0.0)) -> PlaneCurve:
    """Angle-uniform sampling, so vertices land exactly on the axis endpoints
    when ``n`` is a multiple of 4."""
    if a <= 0 or b <= 0:
        raise InvalidInputError("semi-axes must be positive")
    t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    pts = np.stack([center[0] + a * np.cos(t), center[1] + b * np.sin(t)], axis=1)
    return PlaneCurve(pts)


def rectangle_polygon(width: float, height: float, n: int = 64) -> PlaneCurve:
    """Axis-aligned rectangle sampled uniformly by perimeter, corners included
    only when the spacing divides the side lengths."""
    if width <= 0 or height <= 0:
        raise InvalidInputError("width and height must be positive")
    w2, h2 = width / 2.0, height / 2.0
    corners = np.array([[w2, -h2], [w2, h2], [-w2, h2], [-w2, -h2], [w2, -h2]])
    seg = np.linalg.norm(np.diff(corners, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    targets = np.arange(n) * (s[-1] / n)
    pts = np.stack(
        [np.interp(targets, s, corners[:, 0]), np.interp(targets, s, corners[:, 1])], axis=1
    )
    return PlaneCurve(pts)


def peanut_polygon(base_radius: float = 1.0, amplitude: float = 0.3, n: int = 512) -> PlaneCurve:
    """Two-lobed outline r(t) = R (1 + amplitude cos 2t); concave at the waist
    for amplitude > 0.2, which is what the convexification tests want."""
    if not 0.0 <= amplitude < 1.0:
        raise InvalidInputError("amplitude must be in [0, 1)")
    t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    r = base_radius * (1.0 + amplitude * np.cos(2.0 * t))
    return PlaneCurve(np.stack([r * np.cos(t), r * np.sin(t)], axis=1))


def spiral_polygon(
    inner_radius: float = 1.0,
    outer_radius: float = 2.0,
    winding: float = 1.5,
    width: float = 0.3,
    n: int = 640,
) -> PlaneCurve:
    """Embedded closed strip spiraling between two radii.

    The strip is the constant-width offset band of an arithmetic spiral core,
    closed by semicircular caps at both ends.  Successive windings stay
    separated as long as ``width`` is below the radial pitch.
    """
    if inner_radius <= 0 or outer_radius <= inner_radius:
        raise InvalidInputError("need 0 < inner_radius < outer_radius")
    if winding <= 0:
        raise InvalidInputError("winding must be positive")
    span = outer_radius - inner_radius - width
    if span <= 0:
        raise InvalidInputError("width leaves no room between the radii")
    pitch = span / winding
    if width >= pitch:
        raise InvalidInputError("width >= radial pitch, the strip would self-touch")

    theta_max = 2.0 * np.pi * winding
    half = width / 2.0
    m = max(64, int(200 * winding * 8))
    theta = np.linspace(0.0, theta_max, m)
    rho = (inner_radius + half) + (span / theta_max) * theta
    drho = span / theta_max
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    core = np.stack([rho * cos_t, rho * sin_t], axis=1)
    vel = np.stack([drho * cos_t - rho * sin_t, drho * sin_t + rho * cos_t], axis=1)
    speed = np.linalg.norm(vel, axis=1)
    tangent = vel / speed[:, None]
    normal = np.stack([-tangent[:, 1], tangent[:, 0]], axis=1)

    side_out = core + half * normal
    side_back = (core - half * normal)[::-1]

    def cap(center, n_hat):
        # Half circle sweeping from +n_hat around to -n_hat through the open end.
        phi0 = np.arctan2(n_hat[1], n_hat[0])
        ang = phi0 - np.linspace(0.0, np.pi, 60)[1:-1]
        return np.stack([center[0] + half * np.cos(ang), center[1] + half * np.sin(ang)], axis=1)

    outer_cap = cap(core[-1], normal[-1])
    inner_cap = cap(core[0], -normal[0])

    pts = np.vstack([side_out, outer_cap, side_back, inner_cap])
    curve = resample_uniform(PlaneCurve(pts), n)
    if not curve.counterclockwise:
        curve = PlaneCurve(curve.vertices[::-1])
    return curve


# ---------------------------------------------------------------------------
# Serialization: one "x y" pair per line, no repeated closing vertex
# ---------------------------------------------------------------------------

def format_curve(curve: PlaneCurve) -> str:
    lines = [f"{x:.17g} {y:.17g}" for x, y in curve.vertices]
    return "\n".join(lines) + "\n"


def write_curve(path, curve: PlaneCurve) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_curve(curve))


def parse_curve(text: str) -> PlaneCurve:
    """Accepts unix or windows line endings and blank trailing lines."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InvalidInputError(f"line {lineno}: expected 'x y', got {raw!r}")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise InvalidInputError(f"line {lineno}: {exc}") from exc
    return PlaneCurve(np.array(rows, dtype=np.float64))


def read_curve(path) -> PlaneCurve:
    with open(path, "r", encoding="ascii") as fh:
        return parse_curve(fh.read())
