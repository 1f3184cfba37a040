"""Arc-length parametrized paths, driving corridors and a-priori collision zones.

Paths are polylines with linear interpolation of position and heading. A
collision zone between two paths is the pair of arc-length intervals outside
of which the two vehicles' rectangular footprints cannot overlap, whatever
the two vehicles do along their paths. Zones are computed once, up front, by
a coarse grid sweep followed by bisection refinement of the boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateGeometryError

KAPPA_SPACING = 0.5   # resample pitch for curvature estimation (m)
KAPPA_STRIDE = 5      # stencil halfwidth in grid steps (2.5 m)
ZONE_COARSE = 0.1     # coarse (s_a, s_b) grid pitch for the zone sweep (m)
ZONE_FINE = 0.01      # partner-grid pitch used while refining one boundary (m)
ZONE_TOL = 0.001      # bisection tolerance on zone interval boundaries (m)


@dataclass(frozen=True, eq=False)
class Path:
    """Polyline corridor a vehicle is bound to, with its footprint dimensions."""

    waypoints: np.ndarray            # (n, 2), m
    cumulative_arclength: np.ndarray  # (n,), m, strictly increasing, starts at 0
    corridor_halfwidth: float        # m
    vehicle_length: float            # m
    vehicle_width: float             # m
    # interpolation tables, filled by build_path
    _vertex_heading: np.ndarray = field(repr=False, default=None)  # (n,), rad, unwrapped
    _kappa_s: np.ndarray = field(repr=False, default=None)         # (k,), m
    _kappa: np.ndarray = field(repr=False, default=None)           # (k,), 1/m

    def __eq__(self, other) -> bool:
        if not isinstance(other, Path):
            return NotImplemented
        return (np.array_equal(self.waypoints, other.waypoints)
                and self.corridor_halfwidth == other.corridor_halfwidth
                and self.vehicle_length == other.vehicle_length
                and self.vehicle_width == other.vehicle_width)

    @property
    def length(self) -> float:
        return float(self.cumulative_arclength[-1])

    @property
    def footprint_halfdiag(self) -> float:
        """Radius of the smallest circle containing the vehicle footprint."""
        return float(np.hypot(self.vehicle_length, self.vehicle_width) / 2.0)


@dataclass(frozen=True)
class CollisionZone:
    """Arc-length intervals on two paths where footprint overlap is possible."""

    interval_a: tuple[float, float] | None  # [s_in, s_out] on path A, m
    interval_b: tuple[float, float] | None  # [s_in, s_out] on path B, m
    empty: bool

    def __post_init__(self):
        if self.empty:
            if self.interval_a is not None or self.interval_b is not None:
                raise ValueError("empty zone must not carry intervals")
        else:
            for iv in (self.interval_a, self.interval_b):
                if iv is None or iv[0] > iv[1]:
                    raise ValueError(f"invalid zone interval {iv}")

    def swapped(self) -> "CollisionZone":
        """The same zone viewed from the other path's perspective."""
        return CollisionZone(self.interval_b, self.interval_a, self.empty)


def build_path(waypoints, corridor_halfwidth: float,
               vehicle_length: float, vehicle_width: float) -> Path:
    """Build an arc-length parametrized path from a planar polyline.

    Raises ValueError for fewer than 2 waypoints and DegenerateGeometryError
    for duplicate consecutive waypoints.
    """
    pts = np.asarray(waypoints, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise ValueError("need at least 2 planar waypoints")
    if not np.all(np.isfinite(pts)):
        raise ValueError("waypoints must be finite")
    deltas = np.diff(pts, axis=0)
    seglen = np.hypot(deltas[:, 0], deltas[:, 1])
    if np.any(seglen <= 0.0):
        raise DegenerateGeometryError("duplicate consecutive waypoints")
    if vehicle_length <= 0.0 or vehicle_width <= 0.0:
        raise ValueError("vehicle dimensions must be positive")
    if corridor_halfwidth < vehicle_width / 2.0:
        raise ValueError("corridor halfwidth must cover half the vehicle width")

    s = np.concatenate([[0.0], np.cumsum(seglen)])

    seg_heading = np.unwrap(np.arctan2(deltas[:, 1], deltas[:, 0]))
    vertex_heading = np.empty(len(pts))
    vertex_heading[0] = seg_heading[0]
    vertex_heading[-1] = seg_heading[-1]
    vertex_heading[1:-1] = 0.5 * (seg_heading[:-1] + seg_heading[1:])

    kappa_s, kappa = _curvature_table(pts, s)

    for arr in (pts, s, vertex_heading, kappa_s, kappa):
        arr.flags.writeable = False
    return Path(pts, s, float(corridor_halfwidth),
                float(vehicle_length), float(vehicle_width),
                vertex_heading, kappa_s, kappa)


def _curvature_table(pts: np.ndarray, s: np.ndarray):
    """Three-point circumscribed-circle curvature on a KAPPA_SPACING resample.

    The stencil spans KAPPA_STRIDE grid steps to each side so that the three
    points straddle several polyline vertices; with a one-step stencil the
    points often fall onto a single segment and the estimate collapses.
    """
    total = s[-1]
    grid = np.arange(0.0, total, KAPPA_SPACING)
    if grid[-1] < total:
        grid = np.concatenate([grid, [total]])
    n = len(grid)
    if n < 3:
        return np.array([0.0, total]), np.zeros(2)
    x = np.interp(grid, s, pts[:, 0])
    y = np.interp(grid, s, pts[:, 1])
    idx = np.arange(n)
    lo = np.maximum(idx - KAPPA_STRIDE, 0)
    hi = np.minimum(idx + KAPPA_STRIDE, n - 1)
    mid = np.clip(idx, lo + 1, hi - 1)
    ax, ay = x[mid] - x[lo], y[mid] - y[lo]
    bx, by = x[hi] - x[mid], y[hi] - y[mid]
    cx, cy = x[hi] - x[lo], y[hi] - y[lo]
    cross = ax * by - ay * bx
    denom = np.hypot(ax, ay) * np.hypot(bx, by) * np.hypot(cx, cy)
    kappa = np.where(denom > 0.0,
                     2.0 * cross / np.where(denom > 0.0, denom, 1.0), 0.0)
    return grid, kappa


def eval_path(path: Path, s):
    """Position, heading and curvature at arc length s (scalar or array).

    Position is linear interpolation along the polyline, heading the linear
    interpolant of the per-vertex headings, curvature the interpolated
    three-point estimate. Raises ValueError if s is outside [0, length].
    """
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0.0) or np.any(s_arr > path.length):
        raise ValueError(f"arc length out of range [0, {path.length}]")
    x = np.interp(s_arr, path.cumulative_arclength, path.waypoints[:, 0])
    y = np.interp(s_arr, path.cumulative_arclength, path.waypoints[:, 1])
    psi_unwrapped = np.interp(s_arr, path.cumulative_arclength, path._vertex_heading)
    psi = np.arctan2(np.sin(psi_unwrapped), np.cos(psi_unwrapped))
    kappa = np.interp(s_arr, path._kappa_s, path._kappa)
    if s_arr.ndim == 0:
        return np.array([float(x), float(y)]), float(psi), float(kappa)
    return np.stack([x, y], axis=-1), psi, kappa


def _rect_axes_separate(cax, cay, psia, la, wa, cbx, cby, psib):
    """True where an axis of rectangle A separates the two rectangles.

    Projections of B's half-extents onto A's axes are added by the caller;
    here only the A-frame offset of B's center is produced.
    """
    dx, dy = cbx - cax, cby - cay
    ca, sa = np.cos(psia), np.sin(psia)
    # offset of B's center in A's frame
    lon = ca * dx + sa * dy
    lat = -sa * dx + ca * dy
    return lon, lat


def _rects_overlap(cax, cay, psia, la, wa, cbx, cby, psib, lb, wb):
    """Vectorized separating-axis test for heading-aligned rectangles.

    Boundary contact counts as overlap (closed footprints).
    """
    ca, sa = np.cos(psia), np.sin(psia)
    cb, sb = np.cos(psib), np.sin(psib)
    # |cos|, |sin| of the relative heading
    rc = np.abs(ca * cb + sa * sb)
    rs = np.abs(ca * sb - sa * cb)

    lon_a, lat_a = _rect_axes_separate(cax, cay, psia, la, wa, cbx, cby, psib)
    lon_b, lat_b = _rect_axes_separate(cbx, cby, psib, lb, wb, cax, cay, psia)

    ha, hw = la / 2.0, wa / 2.0
    hb, hv = lb / 2.0, wb / 2.0
    ok = np.abs(lon_a) <= ha + rc * hb + rs * hv
    ok &= np.abs(lat_a) <= hw + rs * hb + rc * hv
    ok &= np.abs(lon_b) <= hb + rc * ha + rs * hw
    ok &= np.abs(lat_b) <= hv + rs * ha + rc * hw
    return ok


def footprints_overlap(path_a: Path, s_a, path_b: Path, s_b):
    """Whether the two vehicles' footprints overlap at the given arc lengths."""
    pa, psia, _ = eval_path(path_a, s_a)
    pb, psib, _ = eval_path(path_b, s_b)
    pa = np.atleast_2d(pa)
    pb = np.atleast_2d(pb)
    out = _rects_overlap(pa[..., 0], pa[..., 1], psia, path_a.vehicle_length, path_a.vehicle_width,
                         pb[..., 0], pb[..., 1], psib, path_b.vehicle_length, path_b.vehicle_width)
    return bool(out) if np.ndim(s_a) == 0 and np.ndim(s_b) == 0 else out


def _grid(path: Path, pitch: float) -> np.ndarray:
    g = np.arange(0.0, path.length, pitch)
    if g[-1] < path.length:
        g = np.concatenate([g, [path.length]])
    return g


def _any_overlap_against(path_a: Path, s_a: float, path_b: Path, sb_grid: np.ndarray,
                         pb: np.ndarray, psib: np.ndarray) -> bool:
    """Whether the footprint at s_a overlaps the footprint anywhere on sb_grid."""
    pa, psia, _ = eval_path(path_a, s_a)
    reach = path_a.footprint_halfdiag + path_b.footprint_halfdiag
    near = np.hypot(pb[:, 0] - pa[0], pb[:, 1] - pa[1]) <= reach
    if not np.any(near):
        return False
    hit = _rects_overlap(pa[0], pa[1], psia, path_a.vehicle_length, path_a.vehicle_width,
                         pb[near, 0], pb[near, 1], psib[near],
                         path_b.vehicle_length, path_b.vehicle_width)
    return bool(np.any(hit))


def _refine_boundary(path_a: Path, s_inside: float, s_outside: float,
                     path_b: Path, sb_lo: float, sb_hi: float) -> float:
    """Bisect between an overlapping and a non-overlapping s_a on path A."""
    sb_lo = max(0.0, sb_lo)
    sb_hi = min(path_b.length, sb_hi)
    sb_grid = np.arange(sb_lo, sb_hi, ZONE_FINE)
    sb_grid = np.concatenate([sb_grid, [sb_hi]])
    pb, psib, _ = eval_path(path_b, sb_grid)

    # the coarse "outside" point may still overlap against the finer partner
    # grid; walk outward until it is genuinely clear
    step = s_outside - s_inside
    while 0.0 < s_outside < path_a.length and _any_overlap_against(
            path_a, s_outside, path_b, sb_grid, pb, psib):
        s_inside, s_outside = s_outside, s_outside + step
    s_outside = min(max(s_outside, 0.0), path_a.length)
    if _any_overlap_against(path_a, s_outside, path_b, sb_grid, pb, psib):
        return s_outside  # overlap persists up to the path end

    lo, hi = s_inside, s_outside
    while abs(hi - lo) > ZONE_TOL:
        mid = 0.5 * (lo + hi)
        if _any_overlap_against(path_a, mid, path_b, sb_grid, pb, psib):
            lo = mid
        else:
            hi = mid
    # return the clear side: the interval may be up to ZONE_TOL too wide but
    # never excludes an overlapping position
    return hi


def collision_zone(path_a: Path, path_b: Path) -> CollisionZone:
    """A-priori arc-length intervals on each path where footprints can overlap.

    Outside the returned intervals no footprint overlap is possible for any
    pair of positions. Disjoint overlap pockets are merged into one
    conservative hull interval per path; an empty flag is returned when the
    footprints can never meet.
    """
    ga = _grid(path_a, ZONE_COARSE)
    gb = _grid(path_b, ZONE_COARSE)
    pa, psia, _ = eval_path(path_a, ga)
    pb, psib, _ = eval_path(path_b, gb)

    reach = path_a.footprint_halfdiag + path_b.footprint_halfdiag
    dx = pa[:, 0][:, None] - pb[:, 0][None, :]
    dy = pa[:, 1][:, None] - pb[:, 1][None, :]
    near_i, near_j = np.nonzero(dx * dx + dy * dy <= reach * reach)
    if near_i.size == 0:
        return CollisionZone(None, None, True)

    hit = _rects_overlap(pa[near_i, 0], pa[near_i, 1], psia[near_i],
                         path_a.vehicle_length, path_a.vehicle_width,
                         pb[near_j, 0], pb[near_j, 1], psib[near_j],
                         path_b.vehicle_length, path_b.vehicle_width)
    if not np.any(hit):
        return CollisionZone(None, None, True)

    sa_hit = ga[near_i[hit]]
    sb_hit = gb[near_j[hit]]
    lo_a, hi_a = float(sa_hit.min()), float(sa_hit.max())
    lo_b, hi_b = float(sb_hit.min()), float(sb_hit.max())
    pad = ZONE_COARSE + 2.0 * ZONE_FINE

    lo_a = _refine_boundary(path_a, lo_a, lo_a - ZONE_COARSE, path_b, lo_b - pad, hi_b + pad)
    hi_a = _refine_boundary(path_a, hi_a, hi_a + ZONE_COARSE, path_b, lo_b - pad, hi_b + pad)
    lo_b = _refine_boundary(path_b, lo_b, lo_b - ZONE_COARSE, path_a, lo_a - pad, hi_a + pad)
    hi_b = _refine_boundary(path_b, hi_b, hi_b + ZONE_COARSE, path_a, lo_a - pad, hi_a + pad)

    return CollisionZone((lo_a, hi_a), (lo_b, hi_b), False)
