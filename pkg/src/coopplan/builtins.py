"""Built-in scenarios: a left turn at a T-junction and a road narrowing,
each with and without signposted right of way, sharing the same paths.

Initial states are chosen so that the two vehicles' solo optima overlap
inside the collision zone, forcing a cooperative decision.
"""

from __future__ import annotations

import math

import numpy as np

from .costs import default_vehicle_params
from .geometry import build_path
from .kinematics import Limits, LongState
from .planner import SamplingConfig
from .scenario import (DEFAULT_A_MAX, DEFAULT_A_MIN, DEFAULT_J_MAX,
                       DEFAULT_J_MIN, Scenario, VehicleSpec)

SPEED_LIMIT = 10.0
LANE_OFFSET = 1.75
VEHICLE_LENGTH = 4.5
VEHICLE_WIDTH = 2.0
CORRIDOR_HALFWIDTH = 2.0
TURN_RADIUS = 11.0

POINT_SPACING = 0.4  # waypoint pitch of generated curves (m)


def _default_limits() -> Limits:
    # top speed at the onset of the speed-infeasibility ramp: overshooting
    # the limit is possible but costly, never free
    return Limits(1.15 * SPEED_LIMIT, DEFAULT_A_MIN, DEFAULT_A_MAX,
                  DEFAULT_J_MIN, DEFAULT_J_MAX)


def _segment(p0, p1, include_end=False):
    p0 = np.asarray(p0, float)
    p1 = np.asarray(p1, float)
    length = float(np.hypot(*(p1 - p0)))
    n = max(1, int(math.ceil(length / POINT_SPACING)))
    ts = np.arange(n + 1 if include_end else n) / n
    return p0 + ts[:, None] * (p1 - p0)


def _arc(center, radius, angle_from, angle_to, include_end=False):
    sweep = abs(angle_to - angle_from)
    n = max(2, int(math.ceil(sweep * radius / POINT_SPACING)))
    ts = np.linspace(angle_from, angle_to, n + 1)
    if not include_end:
        ts = ts[:-1]
    return np.stack([center[0] + radius * np.cos(ts),
                     center[1] + radius * np.sin(ts)], axis=1)


def _cosine_blend(x0, x1, y0, y1, include_end=False):
    """Lateral cosine transition: zero end slopes, gentle curvature."""
    length = abs(x1 - x0)
    n = max(2, int(math.ceil(length / POINT_SPACING)))
    ts = np.arange(n + 1 if include_end else n) / n
    x = x0 + ts * (x1 - x0)
    y = y0 + (y1 - y0) * 0.5 * (1.0 - np.cos(np.pi * ts))
    return np.stack([x, y], axis=1)


def _build(points_list):
    pts = np.concatenate(points_list)
    return build_path(pts, CORRIDOR_HALFWIDTH, VEHICLE_LENGTH, VEHICLE_WIDTH)


def _t_junction_paths():
    """Main-road through path and a left turn from the minor road onto it.

    The main road runs along the x axis (eastbound lane at y = -1.75), the
    minor road along the y axis (northbound lane at x = +1.75). The turner
    arcs left onto the westbound lane, crossing the eastbound lane.
    """
    through = _build([
        _segment((-58.0, -LANE_OFFSET), (120.0, -LANE_OFFSET), include_end=True),
    ])
    # left turn: north along x = +1.75, quarter arc of radius 11 to the
    # westbound lane y = +1.75, then west
    arc_start_y = LANE_OFFSET - TURN_RADIUS          # arc ends on y = +1.75
    turner = _build([
        _segment((LANE_OFFSET, -36.0), (LANE_OFFSET, arc_start_y)),
        _arc((LANE_OFFSET - TURN_RADIUS, arc_start_y), TURN_RADIUS, 0.0,
             math.pi / 2.0),
        _segment((LANE_OFFSET - TURN_RADIUS, LANE_OFFSET),
                 (-95.0, LANE_OFFSET), include_end=True),
    ])
    return through, turner


def _narrowing_paths():
    """Two opposed lanes merging into a short single-lane stretch and back.

    The narrow section runs along y = 0 for x in [0, 4]; both approaches
    blend over 16 m with a cosine taper.
    """
    taper = 14.0
    narrow = (0.0, 2.0)
    west = _build([
        _segment((-48.0, -LANE_OFFSET), (narrow[0] - taper, -LANE_OFFSET)),
        _cosine_blend(narrow[0] - taper, narrow[0], -LANE_OFFSET, 0.0),
        _segment((narrow[0], 0.0), (narrow[1], 0.0)),
        _cosine_blend(narrow[1], narrow[1] + taper, 0.0, -LANE_OFFSET),
        _segment((narrow[1] + taper, -LANE_OFFSET), (135.0, -LANE_OFFSET),
                 include_end=True),
    ])
    east = _build([
        _segment((narrow[1] + taper + 44.0, LANE_OFFSET),
                 (narrow[1] + taper, LANE_OFFSET)),
        _cosine_blend(narrow[1] + taper, narrow[1], LANE_OFFSET, 0.0),
        _segment((narrow[1], 0.0), (narrow[0], 0.0)),
        _cosine_blend(narrow[0], narrow[0] - taper, 0.0, LANE_OFFSET),
        _segment((narrow[0] - taper, LANE_OFFSET), (-125.0, LANE_OFFSET),
                 include_end=True),
    ])
    return west, east


def _vehicle(vid: str, path, s0: float, v0: float) -> VehicleSpec:
    return VehicleSpec(vid, path, LongState(s0, v0, 0.0), _default_limits(),
                       default_vehicle_params(SPEED_LIMIT))


def _t_junction(name: str, right_of_way) -> Scenario:
    through, turner = _t_junction_paths()
    return Scenario(
        name=name,
        speed_limit=SPEED_LIMIT,
        ego_id="turner",
        vehicles=(_vehicle("through", through, 0.0, SPEED_LIMIT),
                  _vehicle("turner", turner, 0.0, 8.0)),
        right_of_way=right_of_way,
        sampling=SamplingConfig(seed=7, profiles_per_vehicle=1000,
                                jerk_levels=(-4.0, -2.0, -1.0, 0.0, 1.0, 2.0),
                                horizon=12.0, jerk_hold_steps=8),
    )


def _narrowing(name: str, right_of_way) -> Scenario:
    west, east = _narrowing_paths()
    return Scenario(
        name=name,
        speed_limit=SPEED_LIMIT,
        ego_id="west",
        vehicles=(_vehicle("west", west, 0.0, SPEED_LIMIT),
                  _vehicle("east", east, 0.0, SPEED_LIMIT)),
        right_of_way=right_of_way,
        sampling=SamplingConfig(seed=11, profiles_per_vehicle=1000,
                                jerk_levels=(-4.0, -2.0, -1.0, 0.0, 1.0, 2.0),
                                horizon=12.0, jerk_hold_steps=8),
    )


def builtin_scenarios() -> dict[str, Scenario]:
    """The four reference scenarios, keyed by name.

    In the signed T-junction the turner holds the right of way over the
    main-road vehicle, flipping the passing order of the unsigned solution;
    in the signed narrowing the farther (east) vehicle holds it.
    """
    return {
        "t_junction_unsigned": _t_junction("t_junction_unsigned", ()),
        "t_junction_row": _t_junction("t_junction_row",
                                      (("turner", "through"),)),
        "narrowing_unsigned": _narrowing("narrowing_unsigned", ()),
        "narrowing_row": _narrowing("narrowing_row", (("east", "west"),)),
    }
