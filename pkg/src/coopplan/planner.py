"""Sampling-based cooperative planner.

For each vehicle a set of velocity profiles is generated from random (or
exhaustively enumerated) jerk sequences. Candidate ensembles are the
Cartesian product of the per-vehicle trajectory sets, pre-filtered by two
rules: every trajectory must clear the far end of each collision zone it
shares, and colliding ensembles are dropped. The remaining candidates are
ranked by total ensemble cost; walking the ranking in ascending order, the
first candidate with a valid plan B and a total below the feasibility
threshold is selected. If none qualifies, an emergency braking maneuver for
the ego vehicle is returned instead.

The two-vehicle case is evaluated with vectorized cost matrices that
reproduce the scalar cost functions term by term (same expressions, same
summation order), so the selection is identical to a plain exhaustive scan.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, replace

import numpy as np

from .costs import (CostBreakdown, _total, ensemble_cost, singleton_cost,
                    zone_between)
from .errors import IntractableConfigError
from .geometry import CollisionZone, collision_zone
from .kinematics import (CROSSING_EPS, Limits, LongState, Trajectory,
                         VelocityProfile, crossing_times_batch,
                         effective_interval, integrate_jerk_batch,
                         lift_to_trajectory, max_brake_profile,
                         reaches_zone_end)
from .safety import collides, ego_plan_b_verdicts, has_valid_plan_b

EXHAUSTIVE_LIMIT = 1_000_000


@dataclass(frozen=True)
class SamplingConfig:
    """How velocity profiles are drawn for each vehicle.

    Each drawn jerk value is held for jerk_hold_steps consecutive dt-steps;
    with one-step holds a 32-step uniform draw almost never sustains a
    deceleration long enough to yield, so coarser holds make the sampled
    set cover distinct behaviors (rush, hold back, creep) at modest sample
    counts. The trajectory discretization itself stays at dt.
    """

    seed: int = 0
    profiles_per_vehicle: int = 300
    jerk_levels: tuple[float, ...] = (-2.0, -1.0, 0.0, 1.0, 2.0)
    dt: float = 0.25
    horizon: float = 8.0
    jerk_hold_steps: int = 1
    exhaustive: bool = False

    def __post_init__(self):
        if self.profiles_per_vehicle < 1:
            raise ValueError("need at least one profile per vehicle")
        if self.dt <= 0.0 or self.horizon <= 0.0:
            raise ValueError("dt and horizon must be positive")
        steps = self.horizon / self.dt
        if abs(steps - round(steps)) > 1e-9:
            raise ValueError("horizon must be an integer number of steps")
        if len(self.jerk_levels) == 0:
            raise ValueError("need at least one jerk level")
        if self.jerk_hold_steps < 1 or self.steps % self.jerk_hold_steps:
            raise ValueError("jerk_hold_steps must divide the step count")

    @property
    def steps(self) -> int:
        return int(round(self.horizon / self.dt))

    @property
    def jerk_draws(self) -> int:
        return self.steps // self.jerk_hold_steps


@dataclass(frozen=True)
class PlanResult:
    """Outcome of a planning run."""

    outcome: str  # "selected" | "emergency_brake"
    ensemble: tuple[Trajectory, ...] | None
    profile_indices: tuple[int, ...] | None
    total_cost: float | None
    breakdowns: tuple[CostBreakdown, ...] | None
    plan_b: dict | None            # other-vehicle index -> PlanBVerdict
    candidates_evaluated: int
    emergency_profile: VelocityProfile | None
    zones: dict                    # sorted index pair -> CollisionZone

    @property
    def selected(self) -> bool:
        return self.outcome == "selected"


def vehicle_seed(base_seed: int, vehicle_id: str) -> int:
    """Stable per-vehicle seed: independent of vehicle order in the scenario."""
    digest = hashlib.sha256(vehicle_id.encode("utf-8")).digest()
    vid = int.from_bytes(digest[:8], "big")
    return int(np.random.SeedSequence([base_seed, vid]).generate_state(1, np.uint64)[0])


def sample_profiles(initial: LongState, config: SamplingConfig,
                    limits: Limits) -> list[VelocityProfile]:
    """Velocity profiles from jerk sequences; deterministic given the seed.

    Random mode draws each jerk value uniformly from the level set
    (duplicates permitted), one draw per hold block; exhaustive mode
    enumerates every sequence in lexicographic order of the level set.
    """
    levels = np.asarray(config.jerk_levels, dtype=float)
    if np.any(levels < limits.j_min - 1e-12) or np.any(levels > limits.j_max + 1e-12):
        raise ValueError("jerk levels outside the vehicle's jerk limits")
    if config.exhaustive:
        count = len(levels) ** config.jerk_draws
        if count > EXHAUSTIVE_LIMIT:
            raise IntractableConfigError(
                f"{count} jerk sequences exceed the exhaustive limit")
        draws = np.array(list(itertools.product(levels,
                                                repeat=config.jerk_draws)))
    else:
        rng = np.random.default_rng(np.random.SeedSequence(config.seed))
        draws = rng.choice(levels, size=(config.profiles_per_vehicle,
                                         config.jerk_draws))
    jerks = np.repeat(draws, config.jerk_hold_steps, axis=1)
    s, v, a = integrate_jerk_batch(initial, jerks, config.dt, limits)
    return [VelocityProfile(config.dt, 0.0, s[k], v[k], a[k])
            for k in range(jerks.shape[0])]


def _zone_interval_for(zones, vehicle_index: int):
    """Intervals (one per non-empty zone) that the vehicle must clear."""
    intervals = []
    for (i, j), zone in zones.items():
        if zone.empty:
            continue
        if vehicle_index == i:
            intervals.append(zone.interval_a)
        elif vehicle_index == j:
            intervals.append(zone.interval_b)
    return intervals


def enumerate_ensembles(trajectory_sets, zones):
    """Candidate ensembles: the filtered Cartesian product.

    trajectory_sets is one sequence of trajectories per vehicle (or a
    mapping index -> trajectory). Trajectories that do not clear the far end
    of every zone they share are dropped up front; colliding combinations
    are skipped. Yields (indices, trajectories) in lexicographic index
    order.
    """
    kept = []
    for vi, trajs in enumerate(trajectory_sets):
        entries = sorted(trajs.items()) if isinstance(trajs, dict) \
            else list(enumerate(trajs))
        for interval in _zone_interval_for(zones, vi):
            entries = [(k, tr) for k, tr in entries
                       if reaches_zone_end(tr, interval)]
        kept.append(entries)

    n = len(kept)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)
             if not zone_between(zones, i, j).empty]
    for combo in itertools.product(*kept):
        trajs = tuple(tr for _, tr in combo)
        if any(collides(trajs[i], trajs[j], zone_between(zones, i, j))
               for i, j in pairs):
            continue
        yield tuple(k for k, _ in combo), trajs


def _rank_two_vehicle(kept_a, kept_b, zone: CollisionZone, params_a, params_b,
                      row_ab: bool, row_ba: bool):
    """Cost matrix over all candidate pairs, reproducing the scalar costs.

    Returns (total, colliding, singles_a, singles_b) where total[i, j] is
    exactly ensemble_cost of (kept_a[i], kept_b[j]).
    """
    singles_a = [singleton_cost(tr, params_a) for _, tr in kept_a]
    singles_b = [singleton_cost(tr, params_b) for _, tr in kept_b]
    comf_a = np.array([bd.comfort for bd in singles_a])
    disc_a = np.array([bd.discomfort for bd in singles_a])
    inf_a = np.array([bd.infeasibility for bd in singles_a])
    comf_b = np.array([bd.comfort for bd in singles_b])
    disc_b = np.array([bd.discomfort for bd in singles_b])
    inf_b = np.array([bd.infeasibility for bd in singles_b])

    ka, kb = len(kept_a), len(kept_b)
    if zone.empty:
        tzc_val = np.full((ka, kb), np.inf)
        colliding = np.zeros((ka, kb), dtype=bool)
    else:
        tzc_val, colliding = _tzc_matrix(kept_a, kept_b, zone)

    def tzc_terms(params):
        finite = np.isfinite(tzc_val)
        c, d, i = params.tzc.components(np.where(finite, tzc_val, 0.0))
        zero = ~finite
        return (np.where(zero, 0.0, c), np.where(zero, 0.0, d),
                np.where(zero, 0.0, i))

    tc_a, td_a, ti_a = tzc_terms(params_a)
    tc_b, td_b, ti_b = tzc_terms(params_b)
    row_a = params_a.row_factor * (comf_a + disc_a) if row_ab else np.zeros(ka)
    row_b = params_b.row_factor * (comf_b + disc_b) if row_ba else np.zeros(kb)

    total_a = _total(comf_a[:, None] + tc_a, disc_a[:, None] + td_a,
                     inf_a[:, None] + ti_a, row_a[:, None])
    total_b = _total(comf_b[None, :] + tc_b, disc_b[None, :] + td_b,
                     inf_b[None, :] + ti_b, row_b[None, :])
    return total_a + total_b, colliding, singles_a, singles_b


def _tzc_matrix(kept_a, kept_b, zone: CollisionZone):
    """Clearance values and collision flags for all candidate pairs."""
    trajs_a = [tr for _, tr in kept_a]
    trajs_b = [tr for _, tr in kept_b]
    sa = np.stack([tr.profile.s for tr in trajs_a])
    sb = np.stack([tr.profile.s for tr in trajs_b])
    prof = trajs_a[0].profile
    dt, t0 = prof.dt, prof.t0
    times = prof.times
    t_end = float(times[-1])

    entry_a, exit_a = effective_interval(zone.interval_a,
                                         trajs_a[0].path.vehicle_length)
    entry_b, exit_b = effective_interval(zone.interval_b,
                                         trajs_b[0].path.vehicle_length)
    t_in_a = crossing_times_batch(sa, dt, t0, entry_a)
    t_out_a = crossing_times_batch(sa, dt, t0, exit_a)
    t_in_b = crossing_times_batch(sb, dt, t0, entry_b)
    t_out_b = crossing_times_batch(sb, dt, t0, exit_b)

    end_a = np.where(np.isnan(t_out_a), t_end, t_out_a)
    end_b = np.where(np.isnan(t_out_b), t_end, t_out_b)
    has_a = ~np.isnan(t_in_a) & (sa[:, 0] <= exit_a + CROSSING_EPS)
    has_b = ~np.isnan(t_in_b) & (sb[:, 0] <= exit_b + CROSSING_EPS)

    lo = np.maximum(t_in_a[:, None], t_in_b[None, :])
    hi = np.minimum(end_a[:, None], end_b[None, :])
    overlap = has_a[:, None] & has_b[None, :] & (lo <= hi)

    fin_a = ~np.isnan(t_out_a)
    fin_b = ~np.isnan(t_out_b)
    first_a = fin_a[:, None] & (~fin_b[None, :] | (t_out_a[:, None] <= t_out_b[None, :]))
    first_b = ~first_a & fin_b[None, :]

    ka, kb = len(trajs_a), len(trajs_b)
    ta_clean = np.where(fin_a, t_out_a, t0)
    tb_clean = np.where(fin_b, t_out_b, t0)
    s2_b = np.empty((ka, kb))
    v2_b = np.empty((ka, kb))
    for j in range(kb):
        s2_b[:, j] = np.interp(ta_clean, times, sb[j])
        v2_b[:, j] = np.interp(ta_clean, times, trajs_b[j].profile.v)
    s2_a = np.empty((ka, kb))
    v2_a = np.empty((ka, kb))
    for i in range(ka):
        s2_a[i, :] = np.interp(tb_clean, times, sa[i])
        v2_a[i, :] = np.interp(tb_clean, times, trajs_a[i].profile.v)

    with np.errstate(divide="ignore", invalid="ignore"):
        tzc_fa = np.where(v2_b > 0.0, (entry_b - s2_b) / np.where(v2_b > 0.0, v2_b, 1.0),
                          np.inf)
        tzc_fb = np.where(v2_a > 0.0, (entry_a - s2_a) / np.where(v2_a > 0.0, v2_a, 1.0),
                          np.inf)
    tzc_val = np.where(overlap, -(hi - lo),
                       np.where(first_a, tzc_fa,
                                np.where(first_b, tzc_fb, np.inf)))
    return tzc_val, overlap


def _emergency(scenario, config: SamplingConfig, candidates: int,
               zones) -> PlanResult:
    ego = scenario.vehicles[scenario.ego_index]
    profile = max_brake_profile(ego.initial, ego.limits, config.dt, config.steps)
    return PlanResult("emergency_brake", None, None, None, None, None,
                      candidates, profile, zones)


def plan(scenario, config: SamplingConfig | None = None) -> PlanResult:
    """Select the minimum-cost ensemble with a valid plan B.

    Ranks every candidate ensemble by total cost and walks the ranking in
    ascending order (ties broken lexicographically by per-vehicle profile
    index), returning the first candidate whose plan B is valid from the ego
    vehicle's viewpoint and whose total stays below the feasibility
    threshold. Falls back to an emergency braking maneuver otherwise.
    """
    if config is None:
        config = scenario.sampling
    n = len(scenario.vehicles)
    paths = [veh.path for veh in scenario.vehicles]
    zones = {(i, j): collision_zone(paths[i], paths[j])
             for i in range(n) for j in range(i + 1, n)}

    kept_sets = []
    for vi, veh in enumerate(scenario.vehicles):
        cfg = config if config.exhaustive else replace(
            config, seed=vehicle_seed(config.seed, veh.id))
        profiles = sample_profiles(veh.initial, cfg, veh.limits)
        kept = []
        for k, prof in enumerate(profiles):
            if prof.s[-1] > veh.path.length + 1e-9:
                continue  # runs off the predefined path within the horizon
            kept.append((k, lift_to_trajectory(prof, veh.path)))
        for interval in _zone_interval_for(zones, vi):
            kept = [(k, tr) for k, tr in kept if reaches_zone_end(tr, interval)]
        kept_sets.append(kept)

    if any(len(kept) == 0 for kept in kept_sets):
        return _emergency(scenario, config, 0, zones)

    params = [veh.cost_params for veh in scenario.vehicles]
    limits = [veh.limits for veh in scenario.vehicles]
    threshold = scenario.feasibility_threshold
    ego = scenario.ego_index

    if n == 1:
        kept = kept_sets[0]
        totals = np.array([singleton_cost(tr, params[0]).total for _, tr in kept])
        order = np.argsort(totals, kind="stable")
        candidates = len(kept)
        for pos in order:
            if totals[pos] >= threshold:
                break
            k, tr = kept[pos]
            total, bds = ensemble_cost([tr], params, zones, frozenset())
            return PlanResult("selected", (tr,), (k,), total, tuple(bds), {},
                              candidates, None, zones)
        return _emergency(scenario, config, candidates, zones)

    if n == 2:
        row = scenario.right_of_way_indices
        total, colliding, _, _ = _rank_two_vehicle(
            kept_sets[0], kept_sets[1], zones[(0, 1)], params[0], params[1],
            (0, 1) in row, (1, 0) in row)
        ranked = np.where(colliding, np.inf, total)
        candidates = int(np.count_nonzero(~colliding))
        flat_order = np.argsort(ranked, axis=None, kind="stable")
        kb = len(kept_sets[1])
        for flat in flat_order:
            ia, ib = int(flat) // kb, int(flat) % kb
            value = ranked[ia, ib]
            if not np.isfinite(value) or value >= threshold:
                break
            trajs = (kept_sets[0][ia][1], kept_sets[1][ib][1])
            if has_valid_plan_b(trajs, zones, limits, ego):
                indices = (kept_sets[0][ia][0], kept_sets[1][ib][0])
                total_sel, bds = ensemble_cost(list(trajs), params, zones, row)
                verdicts = ego_plan_b_verdicts(trajs, zones, limits, ego)
                return PlanResult("selected", trajs, indices, total_sel,
                                  tuple(bds), verdicts, candidates, None, zones)
        return _emergency(scenario, config, candidates, zones)

    # general case: plain enumeration (the paper's scenarios have two vehicles)
    row = scenario.right_of_way_indices
    scored = []
    for indices, trajs in enumerate_ensembles(
            [dict(kept) for kept in kept_sets], zones):
        total, _ = ensemble_cost(list(trajs), params, zones, row)
        scored.append((total, indices, trajs))
    scored.sort(key=lambda item: (item[0], item[1]))
    for total, indices, trajs in scored:
        if total >= threshold:
            break
        if has_valid_plan_b(trajs, zones, limits, ego):
            total_sel, bds = ensemble_cost(list(trajs), params, zones, row)
            verdicts = ego_plan_b_verdicts(trajs, zones, limits, ego)
            return PlanResult("selected", trajs, indices, total_sel,
                              tuple(bds), verdicts, len(scored), None, zones)
    return _emergency(scenario, config, len(scored), zones)
