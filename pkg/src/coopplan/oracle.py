"""Brute-force references used as ground truth by the test suite.

exhaustive_best enumerates every jerk sequence per vehicle with plain
nested loops and applies the same filters, costs and gates as the planner
through the production functions, so any disagreement points at a search or
filtering bug rather than a formula bug. dense_occupancy_check validates
collision flags and the sign of the zone-clearance measure on an
oversampled time grid. simulate_adversaries plays bounded adversary
behaviors against the contingency response that the plan-B verdicts
promise.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .costs import ensemble_cost, pairwise_cost, singleton_cost, zone_between
from .errors import IntractableConfigError
from .geometry import CollisionZone, collision_zone
from .kinematics import (CROSSING_EPS, Limits, Trajectory, _step_batch,
                         effective_interval, integrate_jerk_sequence,
                         lift_to_trajectory, reaches_zone_end,
                         zone_crossing_times)
from .safety import (EGO_FIRST, OTHER_FIRST, collides, has_valid_plan_b)

MAX_CANDIDATES = 10_000_000


@dataclass(frozen=True)
class OracleConfig:
    jerk_levels: tuple[float, ...]
    steps: int
    dt: float
    time_oversampling: int = 8

    def __post_init__(self):
        if self.steps < 1 or self.steps > 8:
            raise ValueError("oracle supports 1..8 steps")
        if self.dt <= 0.0 or self.time_oversampling < 1:
            raise ValueError("bad dt or oversampling")


@dataclass(frozen=True)
class OracleResult:
    outcome: str  # "selected" | "emergency_brake"
    profile_indices: tuple[int, ...] | None
    total_cost: float | None
    candidates_enumerated: int = 0


def exhaustive_best(scenario, config: OracleConfig) -> OracleResult:
    """Globally best ensemble by full enumeration with the production rules.

    Refuses intractable configurations. Ties are broken by the natural
    enumeration order (lexicographic in the per-vehicle sequence index).
    """
    n = len(scenario.vehicles)
    per_vehicle = len(config.jerk_levels) ** config.steps
    if per_vehicle ** n > MAX_CANDIDATES:
        raise IntractableConfigError(
            f"{per_vehicle ** n} candidates exceed the oracle limit")

    paths = [v.path for v in scenario.vehicles]
    zones = {(i, j): collision_zone(paths[i], paths[j])
             for i in range(n) for j in range(i + 1, n)}

    candidates: list[list[tuple[int, Trajectory]]] = []
    for vi, veh in enumerate(scenario.vehicles):
        entries = []
        for k, jerks in enumerate(itertools.product(config.jerk_levels,
                                                    repeat=config.steps)):
            profile = integrate_jerk_sequence(veh.initial, jerks, config.dt,
                                              veh.limits)
            if profile.s[-1] > veh.path.length + 1e-9:
                continue
            traj = lift_to_trajectory(profile, veh.path)
            ok = True
            for (i, j), zone in zones.items():
                if zone.empty:
                    continue
                if vi == i and not reaches_zone_end(traj, zone.interval_a):
                    ok = False
                elif vi == j and not reaches_zone_end(traj, zone.interval_b):
                    ok = False
            if ok:
                entries.append((k, traj))
        candidates.append(entries)

    params = [v.cost_params for v in scenario.vehicles]
    limits = [v.limits for v in scenario.vehicles]
    row = scenario.right_of_way_indices
    ego = scenario.ego_index
    singles = [{k: singleton_cost(tr, params[vi]) for k, tr in entries}
               for vi, entries in enumerate(candidates)]

    best_cost = math.inf
    best_indices = None
    enumerated = 0
    for combo in itertools.product(*candidates):
        trajs = [tr for _, tr in combo]
        indices = tuple(k for k, _ in combo)
        skip = False
        for i in range(n):
            for j in range(i + 1, n):
                if collides(trajs[i], trajs[j], zones[(i, j)]):
                    skip = True
        if skip:
            continue
        enumerated += 1
        total = _summed_cost(trajs, indices, params, zones, row, singles)
        if total >= best_cost or total >= scenario.feasibility_threshold:
            continue
        if has_valid_plan_b(trajs, zones, limits, ego):
            best_cost = total
            best_indices = indices

    if best_indices is None:
        return OracleResult("emergency_brake", None, None, enumerated)
    return OracleResult("selected", best_indices, best_cost, enumerated)


def _summed_cost(trajs, indices, params, zones, row, singles):
    """ensemble_cost with per-trajectory singleton results reused."""
    n = len(trajs)
    total = 0.0
    for i in range(n):
        bd = singles[i][indices[i]]
        for j in range(n):
            if j == i:
                continue
            bd = bd + pairwise_cost(trajs[i], trajs[j], zone_between(zones, i, j),
                                    (i, j) in row, params[i],
                                    singleton_i=singles[i][indices[i]])
        total = total + bd.total
    return total


def dense_occupancy_check(traj_a: Trajectory, traj_b: Trajectory,
                          zone: CollisionZone, oversampling: int = 8) -> bool:
    """Whether both footprints touch the zone simultaneously.

    Occupancy is evaluated on a time grid refined by the oversampling factor
    (1 reproduces the sample grid), augmented with both vehicles'
    interpolated zone entry and exit instants so that overlaps shorter than
    a grid step are still observed.
    """
    if zone.empty:
        return False
    entry_a, exit_a = effective_interval(zone.interval_a,
                                         traj_a.path.vehicle_length)
    entry_b, exit_b = effective_interval(zone.interval_b,
                                         traj_b.path.vehicle_length)
    prof = traj_a.profile
    n_fine = (len(prof.s) - 1) * oversampling
    t = prof.t0 + (prof.dt / oversampling) * np.arange(n_fine + 1)
    crucial = [x for x in (*zone_crossing_times(traj_a, zone.interval_a),
                           *zone_crossing_times(traj_b, zone.interval_b))
               if x is not None]
    if crucial:
        t = np.sort(np.concatenate([t, crucial]))
    sa = traj_a.s_at(t)
    sb = traj_b.s_at(t)
    occ_a = (sa >= entry_a - CROSSING_EPS) & (sa <= exit_a + CROSSING_EPS)
    occ_b = (sb >= entry_b - CROSSING_EPS) & (sb <= exit_b + CROSSING_EPS)
    return bool(np.any(occ_a & occ_b))


def _envelope_positions(s0, v0, limits: Limits, accelerate, tau) -> np.ndarray:
    """Constant-extreme-acceleration positions; s0, v0, accelerate broadcast
    against the local times tau (clamped at 0)."""
    s0 = np.asarray(s0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    accelerate = np.asarray(accelerate, dtype=bool)
    tau = np.maximum(tau, 0.0)
    a = limits.a_max
    v0a = np.minimum(v0, limits.v_max)
    t_vm = (limits.v_max - v0a) / a
    ramp_up = s0 + v0a * tau + 0.5 * a * tau * tau
    top = s0 + v0a * t_vm + 0.5 * a * t_vm * t_vm + limits.v_max * (tau - t_vm)
    acc_pos = np.where(tau <= t_vm, ramp_up, top)
    b = -limits.a_min
    t_stop = v0 / b
    ramp_dn = s0 + v0 * tau - 0.5 * b * tau * tau
    stop = s0 + v0 * t_stop - 0.5 * b * t_stop * t_stop
    brake_pos = np.where(tau <= t_stop, ramp_dn, stop)
    return np.where(accelerate, acc_pos, brake_pos)


def _accel_time_to_reach_arr(v, distance, limits: Limits) -> np.ndarray:
    """accel_time_to_reach over arrays."""
    v = np.asarray(v, dtype=float)
    d = np.asarray(distance, dtype=float)
    a = limits.a_max
    vc = np.minimum(v, limits.v_max)
    t_acc = (limits.v_max - vc) / a
    d_acc = vc * t_acc + 0.5 * a * t_acc * t_acc
    within = np.sqrt(np.maximum(vc * vc + 2.0 * a * np.maximum(d, 0.0), 0.0))
    t_ramp = (-vc + within) / a
    t_cruise = t_acc + (d - d_acc) / limits.v_max
    t = np.where(d <= d_acc, t_ramp, t_cruise)
    return np.where(d <= 0.0, 0.0, t)


def simulate_adversaries(ego: Trajectory, other: Trajectory,
                         zone: CollisionZone, ego_limits: Limits,
                         other_limits: Limits, onsets: np.ndarray,
                         suffix_jerks: np.ndarray,
                         oversampling: int = 8) -> np.ndarray:
    """Play adversary behaviors of the other vehicle against the contingency
    response promised by the plan-B analysis; returns a collided flag per
    adversary.

    Adversary k follows the other vehicle's plan up to sample onsets[k] and
    applies suffix_jerks[k] from there on (integrated within the other's
    limits). The ego follows its plan and reacts at the onset sample with
    zero delay: in the other-first case it brakes maximally if the other's
    worst case still threatens its zone entry; in the ego-first case it
    escapes with maximal acceleration if that clears its exit before the
    other's earliest entry, and otherwise stops before its entry while it
    still can. Responses are constant-acceleration motions; a collision is
    simultaneous zone occupancy on the oversampled grid.
    """
    prof_e, prof_o = ego.profile, other.profile
    times = prof_e.times
    n = len(times) - 1
    k_count = len(onsets)
    if suffix_jerks.shape != (k_count, n):
        raise ValueError("suffix_jerks must have shape (len(onsets), steps)")

    # realized other states: plan prefix, integrated suffix
    s_o = np.tile(prof_o.s, (k_count, 1))
    v_o = np.tile(prof_o.v, (k_count, 1))
    a_o = np.tile(prof_o.a, (k_count, 1))
    for i in range(n):
        active = onsets <= i
        s2, v2, a2 = _step_batch(s_o[:, i], v_o[:, i], a_o[:, i],
                                 suffix_jerks[:, i], prof_o.dt, other_limits)
        s_o[:, i + 1] = np.where(active, s2, s_o[:, i + 1])
        v_o[:, i + 1] = np.where(active, v2, v_o[:, i + 1])
        a_o[:, i + 1] = np.where(active, a2, a_o[:, i + 1])

    entry_e, exit_e = effective_interval(zone.interval_a,
                                         ego.path.vehicle_length)
    entry_o, exit_o = effective_interval(zone.interval_b,
                                         other.path.vehicle_length)
    t_in_e, t_out_e = zone_crossing_times(ego, zone.interval_a)
    t_out_o = zone_crossing_times(other, zone.interval_b)[1]
    ego_first = t_out_e is not None and (t_out_o is None or t_out_e <= t_out_o)
    case = EGO_FIRST if ego_first else OTHER_FIRST

    # per-adversary ego response decided at the onset sample
    onsets = np.asarray(onsets, dtype=int)
    t0k = times[onsets]
    s_e0 = prof_e.s[onsets]
    v_e0 = prof_e.v[onsets]
    s_o0 = prof_o.s[onsets]
    v_o0 = prof_o.v[onsets]
    b_o = -other_limits.a_min
    b_e = -ego_limits.a_min
    if case == OTHER_FIRST:
        if t_in_e is None:
            threat = np.zeros(k_count, dtype=bool)
        else:
            not_past = s_o0 <= exit_o
            can_park = s_o0 + v_o0 * v_o0 / (2.0 * b_o) <= exit_o
            room = np.maximum(exit_o - s_o0, 0.0)
            inner = np.maximum(v_o0 * v_o0 - 2.0 * b_o * room, 0.0)
            t_exit_worst = t0k + (v_o0 - np.sqrt(inner)) / b_o
            threat = (t0k < t_in_e) & not_past & \
                (can_park | (t_exit_worst >= t_in_e))
        react = threat
        react_accel = np.zeros(k_count, dtype=bool)
    else:
        # the ego-first ordering implies the ego does enter and clear
        t_exit = t_out_e if t_out_e is not None else float(times[-1])
        active = t0k < t_exit
        t_entry_worst = t0k + _accel_time_to_reach_arr(
            v_o0, entry_o - s_o0, other_limits)
        t_escape = t0k + _accel_time_to_reach_arr(v_e0, exit_e - s_e0,
                                                  ego_limits)
        react_accel = active & (t_escape < t_entry_worst)
        can_stop = (t0k < t_in_e) & \
            (s_e0 + v_e0 * v_e0 / (2.0 * b_e) <= entry_e)
        react = react_accel | (active & ~react_accel & can_stop)
    react_time = np.where(react, t0k, np.inf)

    # dense occupancy on the realized motions, vectorized over adversaries
    dt_fine = prof_e.dt / oversampling
    t = prof_e.t0 + dt_fine * np.arange(n * oversampling + 1)
    s_e_plan = np.interp(t, times, prof_e.s)
    env = _envelope_positions(s_e0[:, None], v_e0[:, None], ego_limits,
                              react_accel[:, None],
                              t[None, :] - react_time[:, None])
    responding = react[:, None] & (t[None, :] >= react_time[:, None])
    s_e = np.where(responding, env, s_e_plan[None, :])
    idx = np.searchsorted(times, t, side="right") - 1
    idx = np.clip(idx, 0, n - 1)
    frac = (t - times[idx]) / prof_o.dt
    s_adv = s_o[:, idx] + frac[None, :] * (s_o[:, idx + 1] - s_o[:, idx])
    occ_e = (s_e >= entry_e) & (s_e <= exit_e)
    occ_o = (s_adv >= entry_o) & (s_adv <= exit_o)
    return np.any(occ_e & occ_o, axis=1)
