"""Longitudinal kinematics: jerk-sequence integration, trajectory lifting,
and interpolated zone-crossing times.

Profiles are integrated with piecewise-constant jerk per step. Acceleration
and velocity limits are enforced in continuous time: within a step the
closed-form motion is advanced to each clamp event (acceleration bound
reached, velocity reaching 0 or v_max) and the regime switched there, so no
sample ever violates a limit and a stop lands at the exact stopping point.
When the velocity clamps, the stored acceleration is zeroed and the velocity
stays pinned for the remainder of that step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PathOverrunError
from .geometry import Path, eval_path


@dataclass(frozen=True)
class LongState:
    """Longitudinal state along a path."""

    s: float   # arc length, m
    v: float   # speed along the path, m/s (never negative)
    a: float   # longitudinal acceleration, m/s^2


@dataclass(frozen=True)
class Limits:
    """Physical feasibility bounds of one vehicle."""

    v_max: float
    a_min: float
    a_max: float
    j_min: float
    j_max: float

    def __post_init__(self):
        if not (self.a_min < 0.0 < self.a_max):
            raise ValueError("need a_min < 0 < a_max")
        if not (self.j_min < 0.0 < self.j_max):
            raise ValueError("need j_min < 0 < j_max")
        if self.v_max <= 0.0:
            raise ValueError("need v_max > 0")


@dataclass(frozen=True)
class VelocityProfile:
    """Time-discretized longitudinal states at t_i = t0 + i*dt."""

    dt: float
    t0: float
    s: np.ndarray  # (n,), non-decreasing
    v: np.ndarray  # (n,), >= 0
    a: np.ndarray  # (n,)

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        for name in ("s", "v", "a"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        n = len(self.s)
        if n == 0 or len(self.v) != n or len(self.a) != n:
            raise ValueError("state arrays must be non-empty and equally long")
        if np.any(self.v < 0.0):
            raise ValueError("speeds must be non-negative")
        if np.any(np.diff(self.s) < 0.0):
            raise ValueError("arc length must be non-decreasing")

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.s))

    @property
    def t_end(self) -> float:
        return self.t0 + self.dt * (len(self.s) - 1)

    def state(self, i: int) -> LongState:
        return LongState(float(self.s[i]), float(self.v[i]), float(self.a[i]))


@dataclass(frozen=True)
class Trajectory:
    """A velocity profile lifted onto a path, with derived planar properties."""

    profile: VelocityProfile
    path: Path
    position: np.ndarray  # (n, 2)
    psi: np.ndarray       # (n,), wrapped to (-pi, pi]
    omega: np.ndarray     # (n,), finite differences of the heading
    a_lat: np.ndarray     # (n,), v^2 * kappa

    @property
    def times(self) -> np.ndarray:
        return self.profile.times

    @property
    def dt(self) -> float:
        return self.profile.dt

    def s_at(self, t) -> np.ndarray:
        """Arc length at time t, linearly interpolated (clamped to the ends)."""
        return np.interp(t, self.profile.times, self.profile.s)

    def v_at(self, t) -> np.ndarray:
        """Speed at time t, linearly interpolated (clamped to the ends)."""
        return np.interp(t, self.profile.times, self.profile.v)


def _advance(s, v, a, j, t):
    """Closed-form constant-jerk motion over duration t."""
    s2 = s + v * t + 0.5 * a * t * t + (j * t * t * t) / 6.0
    v2 = v + a * t + 0.5 * j * t * t
    a2 = a + j * t
    return s2, v2, a2


def _earliest_v_root(v, a, j, bound, tmax):
    """Earliest t in (0, tmax] with v + a*t + j*t^2/2 == bound, else +inf."""
    c = v - bound
    out = np.full_like(v, np.inf)
    lin = j == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        t_lin = np.where(lin & (a != 0.0), -c / np.where(a != 0.0, a, 1.0), np.inf)
    ok = lin & (t_lin > 0.0) & (t_lin <= tmax)
    out = np.where(ok, t_lin, out)

    quad = ~lin
    disc = a * a - 2.0 * j * c
    has = quad & (disc >= 0.0)
    root = np.sqrt(np.where(has, disc, 0.0))
    jj = np.where(quad, j, 1.0)
    for t_cand in ((-a - root) / jj, (-a + root) / jj):
        ok = has & (t_cand > 0.0) & (t_cand <= tmax)
        out = np.where(ok, np.minimum(out, t_cand), out)
    return out


def _step_batch(s, v, a, j, dt: float, limits: Limits):
    """Advance all lanes by one step of piecewise-constant jerk with clamping."""
    vmax, amin, amax = limits.v_max, limits.a_min, limits.a_max

    # lanes already pressed against a velocity bound and pushing outward:
    # pinned for the whole step, acceleration zeroed
    pin0 = (v <= 0.0) & ((a < 0.0) | ((a == 0.0) & (j < 0.0)))
    pinv = ~pin0 & (v >= vmax) & ((a > 0.0) | ((a == 0.0) & (j > 0.0)))
    s = np.where(pinv, s + vmax * dt, s)
    v = np.where(pin0, 0.0, np.where(pinv, vmax, v))
    a = np.where(pin0 | pinv, 0.0, a)
    done = pin0 | pinv

    # jerk phase: runs until the acceleration hits a bound, the velocity hits
    # a bound, or the step ends, whichever is first
    with np.errstate(divide="ignore", invalid="ignore"):
        jj = np.where(j != 0.0, j, 1.0)
        t_a = np.where(j > 0.0, (amax - a) / jj,
                       np.where(j < 0.0, (amin - a) / jj, np.inf))
    t_a = np.where(done, np.inf, np.maximum(t_a, 0.0))
    cap = np.minimum(t_a, dt)
    t_v0 = _earliest_v_root(v, a, j, 0.0, cap)
    t_vm = _earliest_v_root(v, a, j, vmax, cap)
    t_v = np.minimum(t_v0, t_vm)
    hits_zero = t_v0 <= t_vm

    ev_v = ~done & np.isfinite(t_v)
    t_v_safe = np.where(ev_v, t_v, 0.0)
    sv, _, _ = _advance(s, v, a, j, t_v_safe)
    s = np.where(ev_v, np.where(hits_zero, sv, sv + vmax * (dt - t_v_safe)), s)
    v = np.where(ev_v, np.where(hits_zero, 0.0, vmax), v)
    a = np.where(ev_v, 0.0, a)
    done |= ev_v

    # acceleration clamp followed by a constant-acceleration phase
    ev_a = ~done & (t_a <= dt)
    t_a_safe = np.where(ev_a, t_a, 0.0)
    sa, va, _ = _advance(s, v, a, j, t_a_safe)
    abound = np.where(j > 0.0, amax, amin)
    rem = np.where(ev_a, dt - t_a, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        t_b0 = np.where(abound < 0.0, va / np.maximum(-abound, 1e-300), np.inf)
        t_bm = np.where(abound > 0.0, (vmax - va) / np.maximum(abound, 1e-300), np.inf)
    t_b = np.minimum(t_b0, t_bm)
    hits_zero_b = t_b0 <= t_bm

    ev_b = ev_a & (t_b <= rem)
    t_b_safe = np.where(ev_b, t_b, 0.0)
    sb, _, _ = _advance(sa, va, abound, 0.0, t_b_safe)
    s = np.where(ev_b, np.where(hits_zero_b, sb, sb + vmax * (rem - t_b_safe)), s)
    v = np.where(ev_b, np.where(hits_zero_b, 0.0, vmax), v)
    a = np.where(ev_b, 0.0, a)
    done |= ev_b

    tail = ev_a & ~ev_b
    st, vt, _ = _advance(sa, va, abound, 0.0, np.where(tail, rem, 0.0))
    s = np.where(tail, st, s)
    v = np.where(tail, vt, v)
    a = np.where(tail, abound, a)
    done |= tail

    # unclamped remainder: plain constant-jerk step
    sf, vf, af = _advance(s, v, a, j, dt)
    s = np.where(done, s, sf)
    v = np.where(done, v, vf)
    a = np.where(done, a, af)
    return s, v, a


def integrate_jerk_batch(initial: LongState, jerks: np.ndarray, dt: float,
                         limits: Limits):
    """Integrate K jerk sequences at once.

    jerks has shape (K, steps); returns s, v, a arrays of shape (K, steps+1).
    The initial state is clamped into the limits.
    """
    jerks = np.asarray(jerks, dtype=float)
    if jerks.ndim != 2:
        raise ValueError("jerks must have shape (K, steps)")
    if not np.all(np.isfinite(jerks)):
        raise ValueError("jerk values must be finite")
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    k, steps = jerks.shape
    s = np.empty((k, steps + 1))
    v = np.empty((k, steps + 1))
    a = np.empty((k, steps + 1))
    s[:, 0] = initial.s
    v[:, 0] = min(max(initial.v, 0.0), limits.v_max)
    a[:, 0] = min(max(initial.a, limits.a_min), limits.a_max)
    for i in range(steps):
        s[:, i + 1], v[:, i + 1], a[:, i + 1] = _step_batch(
            s[:, i], v[:, i], a[:, i], jerks[:, i], dt, limits)
    return s, v, a


def integrate_jerk_sequence(initial: LongState, jerks, dt: float,
                            limits: Limits, t0: float = 0.0) -> VelocityProfile:
    """Integrate one piecewise-constant jerk sequence into a velocity profile."""
    jerks = np.atleast_1d(np.asarray(jerks, dtype=float))
    s, v, a = integrate_jerk_batch(initial, jerks[None, :], dt, limits)
    return VelocityProfile(dt, t0, s[0], v[0], a[0])


def constant_velocity_profile(s0: float, v: float, dt: float, steps: int,
                              t0: float = 0.0) -> VelocityProfile:
    """Profile moving at constant speed; handy for tests and examples."""
    t = dt * np.arange(steps + 1)
    return VelocityProfile(dt, t0, s0 + v * t, np.full(steps + 1, float(v)),
                           np.zeros(steps + 1))


def max_brake_profile(initial: LongState, limits: Limits, dt: float,
                      steps: int, t0: float = 0.0) -> VelocityProfile:
    """Maximal-deceleration profile: jerk pinned at j_min until standstill."""
    return integrate_jerk_sequence(initial, np.full(steps, limits.j_min),
                                   dt, limits, t0)


def lift_to_trajectory(profile: VelocityProfile, path: Path) -> Trajectory:
    """Derive the planar states of a profile along a path.

    Raises PathOverrunError when the profile travels past the path end.
    """
    if profile.s[-1] > path.length + 1e-9:
        raise PathOverrunError(
            f"profile ends at s={profile.s[-1]:.3f} m beyond path end "
            f"{path.length:.3f} m")
    s = np.minimum(profile.s, path.length)
    position, psi, kappa = eval_path(path, s)
    psi_cont = np.unwrap(psi)
    omega = np.gradient(psi_cont, profile.dt) if len(s) > 1 else np.zeros(1)
    a_lat = profile.v ** 2 * kappa
    for arr in (position, psi, omega, a_lat):
        arr.flags.writeable = False
    return Trajectory(profile, path, position, psi, omega, a_lat)


def effective_interval(interval, vehicle_length: float):
    """Zone interval shifted so entry/exit refer to the bumpers.

    The vehicle reference point is its center: the footprint starts touching
    the zone when the center reaches s_in - length/2 and stops touching it
    once the center passes s_out + length/2.
    """
    s_in, s_out = interval
    half = vehicle_length / 2.0
    return s_in - half, s_out + half


CROSSING_EPS = 1e-9  # boundary inclusivity against integration round-off (m)


def first_crossing_time(profile: VelocityProfile, target: float) -> float | None:
    """Earliest time with s(t) >= target, linearly interpolated, else None.

    Reaching the target within CROSSING_EPS counts (an exact stop at a zone
    boundary is a crossing despite accumulated round-off).
    """
    s = profile.s
    if s[0] >= target - CROSSING_EPS:
        return float(profile.t0)
    reached = s >= target - CROSSING_EPS
    if not reached.any():
        return None
    # mirror crossing_times_batch term by term so both give identical floats
    k = int(np.argmax(reached))
    frac = (target - s[k - 1]) / (s[k] - s[k - 1])
    frac = min(max(frac, 0.0), 1.0)
    return float(profile.t0 + profile.dt * (k - 1) + profile.dt * frac)


def crossing_times_batch(s: np.ndarray, dt: float, t0: float,
                         target: float) -> np.ndarray:
    """first_crossing_time over rows of a (K, n) arc-length array; NaN if never."""
    reached = s >= target - CROSSING_EPS
    has = reached.any(axis=1)
    k = reached.argmax(axis=1)
    k_safe = np.maximum(k, 1)
    s_prev = np.take_along_axis(s, (k_safe - 1)[:, None], axis=1)[:, 0]
    s_next = np.take_along_axis(s, k_safe[:, None], axis=1)[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = (target - s_prev) / (s_next - s_prev)
    frac = np.minimum(np.maximum(frac, 0.0), 1.0)
    t = t0 + dt * (k_safe - 1) + dt * frac
    t = np.where(k == 0, t0, t)
    return np.where(has, t, np.nan)


def zone_crossing_times(trajectory: Trajectory, interval):
    """Times at which the footprint starts and stops touching a zone interval.

    t_in is the earliest time the front bumper reaches the zone start, t_out
    the earliest time the rear bumper passes the zone end; each is found by
    linear interpolation of s between the bracketing samples and is None when
    never reached. Reaching the exit boundary exactly counts as cleared.
    """
    s_in, s_out = interval
    if s_in > s_out:
        raise ValueError("interval must satisfy s_in <= s_out")
    entry, exit_ = effective_interval(interval, trajectory.path.vehicle_length)
    return (first_crossing_time(trajectory.profile, entry),
            first_crossing_time(trajectory.profile, exit_))


def reaches_zone_end(trajectory: Trajectory, interval) -> bool:
    """Whether the trajectory clears the far end of the zone interval."""
    return zone_crossing_times(trajectory, interval)[1] is not None
