"""Collision detection and worst-case contingency ("plan B") checking.

The contingency question is asked at every sample of the planned
trajectories: what could the other vehicle still do, within its physical
limits, that leads to a collision, and is there an ego response that avoids
it? No contingency trajectory is planned; the worst-case futures of the
other vehicle and the ego responses are closed-form constant-acceleration
envelopes, which bound every jerk-limited behavior. The ego never leaves
its path and reacts with zero delay at the sample under consideration.

Two cases cover a shared collision zone:

* other drives first: the other vehicle can only cause a collision by
  decelerating and ending up blocking the zone, or by clearing it later
  than the ego's planned entry. Whenever that worst case threatens, the
  ego must be able to stop before its own zone entry.
* ego drives first: the other vehicle can only cause a collision by
  accelerating into the zone early. The ego must either out-accelerate it
  (clear its zone exit before the other's earliest possible entry) or, as
  long as it has not entered, stop before its entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import CollisionZone
from .kinematics import (Limits, Trajectory, effective_interval,
                         zone_crossing_times)
from .costs import occupancy_window, zone_between

OTHER_FIRST = "other-first"
EGO_FIRST = "ego-first"


@dataclass(frozen=True)
class PlanBVerdict:
    valid: bool
    failing_time: float | None = None
    failing_case: str | None = None

    def __post_init__(self):
        if self.valid != (self.failing_time is None):
            raise ValueError("valid verdicts carry no failing time")


def collides(traj_a: Trajectory, traj_b: Trajectory, zone: CollisionZone) -> bool:
    """Whether both vehicles touch the collision zone at a common time."""
    if zone.empty:
        return False
    win_a = occupancy_window(traj_a, zone.interval_a)
    win_b = occupancy_window(traj_b, zone.interval_b)
    if win_a is None or win_b is None:
        return False
    return max(win_a[0], win_b[0]) <= min(win_a[1], win_b[1])


def brake_stop_position(s: float, v: float, limits: Limits) -> float:
    """Where the vehicle comes to rest under maximal deceleration."""
    return s + v * v / (2.0 * -limits.a_min)


def brake_time_to_reach(v: float, distance: float, limits: Limits) -> float:
    """Time to cover a distance while braking maximally (must stay reachable)."""
    if distance <= 0.0:
        return 0.0
    b = -limits.a_min
    return (v - math.sqrt(v * v - 2.0 * b * distance)) / b


def accel_time_to_reach(v: float, distance: float, limits: Limits) -> float:
    """Earliest time to cover a distance: full acceleration, then v_max."""
    if distance <= 0.0:
        return 0.0
    if v >= limits.v_max:
        return distance / limits.v_max
    a = limits.a_max
    t_acc = (limits.v_max - v) / a
    d_acc = v * t_acc + 0.5 * a * t_acc * t_acc
    if distance <= d_acc:
        return (-v + math.sqrt(v * v + 2.0 * a * distance)) / a
    return t_acc + (distance - d_acc) / limits.v_max


def _other_first_threat(t: float, s_o: float, v_o: float, exit_other: float,
                        other_limits: Limits, ego_entry_time: float) -> bool:
    """Whether the other vehicle can still end up obstructing the ego.

    It can obstruct if some admissible future leaves it inside the zone
    indefinitely (its earliest possible stop is not past the zone exit), or
    if even its maximally braked traversal clears the zone only after the
    ego's planned entry.
    """
    if s_o > exit_other:
        return False  # already cleared; reversing is impossible
    if brake_stop_position(s_o, v_o, other_limits) <= exit_other:
        return True
    t_exit_worst = t + brake_time_to_reach(v_o, exit_other - s_o, other_limits)
    return t_exit_worst >= ego_entry_time


def plan_b_other_first(ego: Trajectory, other: Trajectory, zone: CollisionZone,
                       ego_limits: Limits, other_limits: Limits) -> PlanBVerdict:
    """Contingency check when the other vehicle is planned to pass first.

    zone.interval_a refers to the ego's path, zone.interval_b to the
    other's. At every sample before the ego's zone entry: if the other's
    worst case blocks the zone, the ego must be able to stop before its
    entry point by braking maximally.
    """
    if zone.empty:
        return PlanBVerdict(True)
    entry_ego = effective_interval(zone.interval_a, ego.path.vehicle_length)[0]
    exit_other = effective_interval(zone.interval_b, other.path.vehicle_length)[1]
    t_in_ego = zone_crossing_times(ego, zone.interval_a)[0]
    if t_in_ego is None:
        return PlanBVerdict(True)  # the ego never reaches the zone

    times = ego.times
    for k in range(len(times)):
        t = float(times[k])
        if t >= t_in_ego:
            break
        if not _other_first_threat(t, float(other.profile.s[k]),
                                   float(other.profile.v[k]), exit_other,
                                   other_limits, t_in_ego):
            continue
        stop = brake_stop_position(float(ego.profile.s[k]),
                                   float(ego.profile.v[k]), ego_limits)
        if stop > entry_ego:
            return PlanBVerdict(False, t, OTHER_FIRST)
    return PlanBVerdict(True)


def plan_b_ego_first(ego: Trajectory, other: Trajectory, zone: CollisionZone,
                     ego_limits: Limits, other_limits: Limits) -> PlanBVerdict:
    """Contingency check when the ego is planned to pass first.

    At every sample before the ego clears the zone, the other vehicle is
    assumed to accelerate maximally from there on. The check passes if the
    ego can clear its zone exit before the other's earliest entry by
    accelerating maximally, or can still stop before its own entry.
    """
    if zone.empty:
        return PlanBVerdict(True)
    entry_ego, exit_ego = effective_interval(zone.interval_a,
                                             ego.path.vehicle_length)
    entry_other = effective_interval(zone.interval_b,
                                     other.path.vehicle_length)[0]
    t_in_ego, t_out_ego = zone_crossing_times(ego, zone.interval_a)
    if t_in_ego is None:
        return PlanBVerdict(True)
    horizon_end = float(ego.times[-1])
    t_exit = t_out_ego if t_out_ego is not None else horizon_end

    times = ego.times
    for k in range(len(times)):
        t = float(times[k])
        if t >= t_exit:
            break
        t_entry_worst = t + accel_time_to_reach(
            float(other.profile.v[k]), entry_other - float(other.profile.s[k]),
            other_limits)
        s_e = float(ego.profile.s[k])
        v_e = float(ego.profile.v[k])
        t_escape = t + accel_time_to_reach(v_e, exit_ego - s_e, ego_limits)
        if t_escape < t_entry_worst:
            continue
        can_stop = (t < t_in_ego
                    and brake_stop_position(s_e, v_e, ego_limits) <= entry_ego)
        if not can_stop:
            return PlanBVerdict(False, t, EGO_FIRST)
    return PlanBVerdict(True)


def plan_b_verdict(ego: Trajectory, other: Trajectory, zone: CollisionZone,
                   ego_limits: Limits, other_limits: Limits) -> PlanBVerdict:
    """Order-appropriate contingency check for one zone-sharing pair."""
    if zone.empty:
        return PlanBVerdict(True)
    t_out_ego = zone_crossing_times(ego, zone.interval_a)[1]
    t_out_other = zone_crossing_times(other, zone.interval_b)[1]
    if t_out_ego is not None and (t_out_other is None or t_out_ego <= t_out_other):
        return plan_b_ego_first(ego, other, zone, ego_limits, other_limits)
    if t_out_other is not None:
        return plan_b_other_first(ego, other, zone, ego_limits, other_limits)
    # neither vehicle clears within the horizon
    if zone_crossing_times(ego, zone.interval_a)[0] is None:
        return PlanBVerdict(True)
    return PlanBVerdict(False, float(ego.times[0]), OTHER_FIRST)


def has_valid_plan_b(trajectories, zones, limits, ego_index: int) -> bool:
    """Whether every zone-sharing pair containing the ego has a valid plan B.

    trajectories and limits are parallel sequences; zones maps sorted index
    pairs to CollisionZones. Pairs are checked independently.
    """
    ego = trajectories[ego_index]
    for j in range(len(trajectories)):
        if j == ego_index:
            continue
        zone = zone_between(zones, ego_index, j)
        verdict = plan_b_verdict(ego, trajectories[j], zone,
                                 limits[ego_index], limits[j])
        if not verdict.valid:
            return False
    return True


def ego_plan_b_verdicts(trajectories, zones, limits, ego_index: int) -> dict:
    """Per-pair verdicts from the ego's viewpoint, keyed by the other index."""
    out = {}
    for j in range(len(trajectories)):
        if j == ego_index:
            continue
        zone = zone_between(zones, ego_index, j)
        out[j] = plan_b_verdict(trajectories[ego_index], trajectories[j], zone,
                                limits[ego_index], limits[j])
    return out
