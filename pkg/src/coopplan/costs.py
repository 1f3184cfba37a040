"""Trajectory cost model.

Each scalar trajectory property is rated by an evaluation functional with
three zones around its optimum: a comfort zone with small quadratic costs, a
discomfort zone adding a steeper quadratic term, and an infeasibility zone
adding an exponentially growing term. Every added term starts from zero at
its own onset, so the composed curve is continuous. The coefficients are
anchored so that the comfort cost equals t_comf at the comfortable deviation
and the infeasibility cost equals t_inf at the infeasible value.

Singleton costs rate one trajectory (speed, longitudinal and lateral
acceleration, yaw rate, lateral offset) as a time integral over the samples.
Pairwise costs rate the clearance between two trajectories through the time
of zone clearance (TZC) and add the upscaled comfort costs of a vehicle that
holds the right of way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import CollisionZone
from .kinematics import (CROSSING_EPS, Trajectory, effective_interval,
                         zone_crossing_times)

T_COMF_DEFAULT = 1.0
T_INF_DEFAULT = 1.0e6
B_OVER_A_DEFAULT = 20.0
ROW_FACTOR_DEFAULT = 10.0
TZC_COMFORT_BOUNDARY = 2.0  # s, clearance below which discomfort sets in


def _total(comfort, discomfort, infeasibility, row):
    # single place fixing the summation order, shared by the scalar breakdown
    # and the planner's vectorized fast path
    return ((comfort + discomfort) + infeasibility) + row


@dataclass(frozen=True)
class CostBreakdown:
    """Cost split into the analysis categories."""

    comfort: float = 0.0
    discomfort: float = 0.0
    infeasibility: float = 0.0
    row: float = 0.0

    @property
    def total(self) -> float:
        return _total(self.comfort, self.discomfort, self.infeasibility, self.row)

    def __add__(self, other: "CostBreakdown") -> "CostBreakdown":
        return CostBreakdown(self.comfort + other.comfort,
                             self.discomfort + other.discomfort,
                             self.infeasibility + other.infeasibility,
                             self.row + other.row)


@dataclass(frozen=True)
class EvaluationFunctionalParams:
    """One property's optimum, zone boundaries and threshold anchors.

    A side can be disabled by pushing its boundaries to infinity
    (cmargin = disc = inf boundary = inf); the clearance functional uses
    this to make any sufficiently large clearance free of cost.
    """

    f_opt: float
    f_disc_plus: float
    f_disc_minus: float
    f_inf_plus: float
    f_inf_minus: float
    margin_plus: float
    margin_minus: float
    cmargin_plus: float
    cmargin_minus: float
    t_comf: float = T_COMF_DEFAULT
    t_inf: float = T_INF_DEFAULT
    b_plus: float | None = None
    b_minus: float | None = None

    def __post_init__(self):
        if not (0.0 < self.t_comf < self.t_inf):
            raise ValueError("need 0 < t_comf < t_inf")
        if not (self.margin_plus > 0.0 and self.margin_minus > 0.0):
            raise ValueError("infeasibility margins must be positive")
        if not (self.cmargin_plus > 0.0 and self.cmargin_minus > 0.0):
            raise ValueError("comfortable deviations must be positive")
        if not (self.f_opt <= self.f_disc_plus <= self.f_inf_plus - self.margin_plus):
            raise ValueError("need f_opt <= f_disc_plus <= f_inf_plus - margin_plus")
        if not (self.f_inf_minus + self.margin_minus <= self.f_disc_minus <= self.f_opt):
            raise ValueError("need f_inf_minus + margin_minus <= f_disc_minus <= f_opt")
        if self.b_plus is None:
            object.__setattr__(self, "b_plus", B_OVER_A_DEFAULT * self.a_plus)
        if self.b_minus is None:
            object.__setattr__(self, "b_minus", B_OVER_A_DEFAULT * self.a_minus)
        if self.b_plus < self.a_plus or self.b_minus < self.a_minus:
            raise ValueError("discomfort must grow at least as fast as comfort")

    @property
    def a_plus(self) -> float:
        return self.t_comf / (self.cmargin_plus * self.cmargin_plus)

    @property
    def a_minus(self) -> float:
        return self.t_comf / (self.cmargin_minus * self.cmargin_minus)

    @property
    def c_plus(self) -> float:
        m = self.margin_plus
        return self.t_inf / (m * m * math.exp(m))

    @property
    def c_minus(self) -> float:
        m = self.margin_minus
        return self.t_inf / (m * m * math.exp(m))

    def components(self, f):
        """Comfort, discomfort and infeasibility terms at f (scalar or array).

        Each term is active only past its onset and is zero at the onset
        itself, which keeps the composed cost continuous.
        """
        d = f - self.f_opt
        dpos = np.where(d > 0.0, d, 0.0)
        dneg = np.where(d < 0.0, d, 0.0)
        comfort = self.a_plus * dpos * dpos + self.a_minus * dneg * dneg

        dp = f - self.f_disc_plus
        dm = f - self.f_disc_minus
        dp = np.where(dp > 0.0, dp, 0.0)
        dm = np.where(dm < 0.0, dm, 0.0)
        discomfort = self.b_plus * dp * dp + self.b_minus * dm * dm

        qp = f - (self.f_inf_plus - self.margin_plus)
        qm = f - (self.f_inf_minus + self.margin_minus)
        qp = np.where(qp > 0.0, qp, 0.0)
        qm = np.where(qm < 0.0, qm, 0.0)
        with np.errstate(over="ignore"):
            infeasibility = (self.c_plus * qp * qp * np.exp(qp)
                             + self.c_minus * qm * qm * np.exp(-qm))
        return comfort, discomfort, infeasibility


def eval_functional(params: EvaluationFunctionalParams, f: float) -> CostBreakdown:
    """Cost of a single property value. Raises ValueError on non-finite f."""
    if not np.isfinite(f):
        raise ValueError("property value must be finite")
    comfort, discomfort, infeasibility = params.components(float(f))
    return CostBreakdown(float(comfort), float(discomfort), float(infeasibility), 0.0)


@dataclass(frozen=True)
class VehicleCostParams:
    """Per-property functionals plus the right-of-way upscaling factor."""

    v: EvaluationFunctionalParams
    a_lon: EvaluationFunctionalParams
    a_lat: EvaluationFunctionalParams
    omega: EvaluationFunctionalParams
    offset: EvaluationFunctionalParams
    tzc: EvaluationFunctionalParams
    row_factor: float = ROW_FACTOR_DEFAULT

    def __post_init__(self):
        if self.row_factor <= 1.0:
            raise ValueError("row_factor must exceed 1")


def default_vehicle_params(speed_limit: float,
                           row_factor: float = ROW_FACTOR_DEFAULT,
                           t_comf: float = T_COMF_DEFAULT,
                           t_inf: float = T_INF_DEFAULT) -> VehicleCostParams:
    """Default parameter table; every value is overridable per scenario.

    Speed optimum is the limit with infeasibility at 1.2x; slower driving is
    uncomfortable but never infeasible (yielding must stay possible). The
    clearance functional is one-sided: clearances above 2 s are free,
    discomfort sets in below 2 s and the infeasible value sits at 0 s.
    """
    inf = math.inf
    v = EvaluationFunctionalParams(
        f_opt=speed_limit,
        f_disc_plus=1.1 * speed_limit, f_disc_minus=0.5 * speed_limit,
        f_inf_plus=1.2 * speed_limit, f_inf_minus=-inf,
        margin_plus=0.05 * speed_limit, margin_minus=1.0,
        cmargin_plus=0.1 * speed_limit, cmargin_minus=0.5 * speed_limit,
        t_comf=t_comf, t_inf=t_inf)
    a_lon = EvaluationFunctionalParams(
        f_opt=0.0, f_disc_plus=2.5, f_disc_minus=-2.5,
        f_inf_plus=8.0, f_inf_minus=-8.0, margin_plus=1.0, margin_minus=1.0,
        cmargin_plus=1.5, cmargin_minus=1.5, t_comf=t_comf, t_inf=t_inf)
    a_lat = EvaluationFunctionalParams(
        f_opt=0.0, f_disc_plus=3.0, f_disc_minus=-3.0,
        f_inf_plus=6.0, f_inf_minus=-6.0, margin_plus=1.0, margin_minus=1.0,
        cmargin_plus=1.5, cmargin_minus=1.5, t_comf=t_comf, t_inf=t_inf)
    omega = EvaluationFunctionalParams(
        f_opt=0.0, f_disc_plus=0.6, f_disc_minus=-0.6,
        f_inf_plus=1.5, f_inf_minus=-1.5, margin_plus=0.3, margin_minus=0.3,
        cmargin_plus=0.3, cmargin_minus=0.3, t_comf=t_comf, t_inf=t_inf)
    offset = EvaluationFunctionalParams(
        f_opt=0.0, f_disc_plus=1.0, f_disc_minus=-1.0,
        f_inf_plus=2.0, f_inf_minus=-2.0, margin_plus=0.5, margin_minus=0.5,
        cmargin_plus=0.5, cmargin_minus=0.5, t_comf=t_comf, t_inf=t_inf)
    tzc = EvaluationFunctionalParams(
        f_opt=TZC_COMFORT_BOUNDARY,
        f_disc_plus=inf, f_disc_minus=TZC_COMFORT_BOUNDARY,
        f_inf_plus=inf, f_inf_minus=0.0,
        margin_plus=1.0, margin_minus=0.5,
        cmargin_plus=inf, cmargin_minus=TZC_COMFORT_BOUNDARY,
        t_comf=t_comf, t_inf=t_inf, b_plus=0.0)
    return VehicleCostParams(v, a_lon, a_lat, omega, offset, tzc, row_factor)


def singleton_cost(traj: Trajectory, params: VehicleCostParams) -> CostBreakdown:
    """Cost of one trajectory on its own: time integral over the samples.

    Speed, longitudinal acceleration, lateral acceleration and yaw rate are
    rated per sample and scaled by dt. The lateral offset is identically at
    its optimum because the vehicle is bound to the path, and is kept in the
    sum only for structural completeness. Jerk and curvature carry no cost.
    """
    dt = traj.dt
    offset = np.zeros(len(traj.profile.s))
    comfort = discomfort = infeasibility = 0.0
    for p, values in ((params.v, traj.profile.v),
                      (params.a_lon, traj.profile.a),
                      (params.a_lat, traj.a_lat),
                      (params.omega, traj.omega),
                      (params.offset, offset)):
        c, d, i = p.components(values)
        comfort += float(np.sum(c)) * dt
        discomfort += float(np.sum(d)) * dt
        infeasibility += float(np.sum(i)) * dt
    return CostBreakdown(comfort, discomfort, infeasibility, 0.0)


def occupancy_window(traj: Trajectory, interval) -> tuple[float, float] | None:
    """Closed time window during which the footprint touches the zone.

    None when the vehicle never reaches the zone or already cleared it
    before its first sample; a vehicle that enters but does not clear
    within the horizon occupies until its last sample.
    """
    exit_eff = effective_interval(interval, traj.path.vehicle_length)[1]
    if traj.profile.s[0] > exit_eff + CROSSING_EPS:
        return None
    t_in, t_out = zone_crossing_times(traj, interval)
    if t_in is None:
        return None
    end = t_out if t_out is not None else float(traj.times[-1])
    return t_in, end


def tzc(traj_a: Trajectory, traj_b: Trajectory, zone: CollisionZone) -> float:
    """Time of zone clearance between two trajectories.

    Infinite when the paths do not overlap. When both vehicles touch the
    zone simultaneously at any interpolated time the value is the negative
    maximal temporal overlap (<= 0, a collision). Otherwise the gap of the
    second vehicle to its zone entry at the moment the first vehicle clears,
    divided by the second vehicle's speed at that moment; a standstill
    second vehicle yields infinity. States past the horizon use the last
    sample (constant extrapolation).
    """
    if zone.empty:
        return math.inf
    win_a = occupancy_window(traj_a, zone.interval_a)
    win_b = occupancy_window(traj_b, zone.interval_b)
    if win_a is not None and win_b is not None:
        lo = max(win_a[0], win_b[0])
        hi = min(win_a[1], win_b[1])
        if lo <= hi:
            return -(hi - lo)

    t_out_a = zone_crossing_times(traj_a, zone.interval_a)[1]
    t_out_b = zone_crossing_times(traj_b, zone.interval_b)[1]
    if t_out_a is None and t_out_b is None:
        return math.inf  # neither clears within the horizon and no overlap
    if t_out_a is not None and (t_out_b is None or t_out_a <= t_out_b):
        t_first_out, second, interval_second = t_out_a, traj_b, zone.interval_b
    else:
        t_first_out, second, interval_second = t_out_b, traj_a, zone.interval_a

    entry_second = effective_interval(interval_second,
                                      second.path.vehicle_length)[0]
    s2 = float(second.s_at(t_first_out))
    v2 = float(second.v_at(t_first_out))
    if v2 <= 0.0:
        return math.inf
    return (entry_second - s2) / v2


def tzc_cost(value: float, params: EvaluationFunctionalParams) -> CostBreakdown:
    """Evaluation of a clearance value; infinite clearance is free."""
    if math.isinf(value) and value > 0.0:
        return CostBreakdown()
    return eval_functional(params, value)


def pairwise_cost(traj_i: Trajectory, traj_j: Trajectory, zone: CollisionZone,
                  i_has_priority: bool, params_i: VehicleCostParams,
                  singleton_i: CostBreakdown | None = None) -> CostBreakdown:
    """Cost charged to vehicle i for its relation to vehicle j.

    The clearance term uses vehicle i's functional. When i holds the right
    of way over j, i's own comfort and discomfort costs are added once more,
    upscaled by its row factor, so that interfering with i is expensive but
    never impossible. The minimum-distance term is intentionally absent: it
    either falls inside the zone, where the clearance term covers it, or it
    is irrelevant.
    """
    bd = tzc_cost(tzc(traj_i, traj_j, zone), params_i.tzc)
    row = 0.0
    if i_has_priority:
        if singleton_i is None:
            singleton_i = singleton_cost(traj_i, params_i)
        row = params_i.row_factor * (singleton_i.comfort + singleton_i.discomfort)
    return CostBreakdown(bd.comfort, bd.discomfort, bd.infeasibility, row)


_EMPTY_ZONE = CollisionZone(None, None, True)


def zone_between(zones, i: int, j: int) -> CollisionZone:
    """Zone for the ordered pair (i, j) from a dict keyed by sorted pairs.

    Pairs without an entry have no overlap (empty zone).
    """
    if i < j:
        return zones.get((i, j), _EMPTY_ZONE)
    return zones.get((j, i), _EMPTY_ZONE).swapped()


def ensemble_cost(trajectories, params, zones, right_of_way):
    """Total cost of a trajectory ensemble and the per-vehicle breakdowns.

    trajectories and params are parallel sequences; zones maps sorted index
    pairs to CollisionZones oriented accordingly; right_of_way contains
    ordered index pairs (i, j) meaning i has priority over j. All
    trajectories must share dt and start time.
    """
    n = len(trajectories)
    if len(params) != n:
        raise ValueError("need one parameter set per trajectory")
    dt0 = trajectories[0].profile.dt
    t00 = trajectories[0].profile.t0
    for tr in trajectories[1:]:
        if tr.profile.dt != dt0 or tr.profile.t0 != t00:
            raise ValueError("trajectories must share dt and start time")

    singles = [singleton_cost(tr, p) for tr, p in zip(trajectories, params)]
    breakdowns = []
    for i in range(n):
        bd = singles[i]
        for j in range(n):
            if j == i:
                continue
            zone = zone_between(zones, i, j)
            bd = bd + pairwise_cost(trajectories[i], trajectories[j], zone,
                                    (i, j) in right_of_way, params[i],
                                    singleton_i=singles[i])
        breakdowns.append(bd)

    total = 0.0
    for bd in breakdowns:
        total = total + bd.total
    return total, breakdowns
