"""Worst-case contingency checking.

For the selected T-junction ensemble, asks the "what could the other
vehicle do" question at every sample and then stress-tests the verdict:
two thousand bounded adversary behaviors of the other vehicle are played
against the prescribed ego response, none of which may end in a collision.
Finally shows a setup with no contingency at all, where the planner falls
back to emergency braking.
"""

import numpy as np

from coopplan import (Limits, SamplingConfig, build_path, builtin_scenarios,
                      default_vehicle_params, plan)
from coopplan.kinematics import LongState
from coopplan.oracle import simulate_adversaries
from coopplan.safety import plan_b_verdict
from coopplan.scenario import Scenario, VehicleSpec

scenario = builtin_scenarios()["t_junction_unsigned"]
result = plan(scenario)
assert result.selected
ego_index = scenario.ego_index
other_index = 1 - ego_index
verdict = result.plan_b[other_index]
print(f"selected ensemble plan B: valid={verdict.valid}")

zone = result.zones[(0, 1)] if ego_index == 0 else result.zones[(0, 1)].swapped()
ego_traj = result.ensemble[ego_index]
other_traj = result.ensemble[other_index]
ego_limits = scenario.vehicles[ego_index].limits
other_limits = scenario.vehicles[other_index].limits

check = plan_b_verdict(ego_traj, other_traj, zone, ego_limits, other_limits)
print(f"re-checked verdict: valid={check.valid}")

rng = np.random.default_rng(0)
n = len(ego_traj.times) - 1
count = 2000
onsets = rng.integers(0, n, size=count)
kinds = rng.integers(0, 3, size=count)
suffix = rng.uniform(other_limits.j_min, other_limits.j_max, size=(count, n))
suffix[kinds == 0] = other_limits.j_min   # slam the brakes
suffix[kinds == 1] = other_limits.j_max   # floor it
collided = simulate_adversaries(ego_traj, other_traj, zone, ego_limits,
                                other_limits, onsets, suffix)
print(f"{count} adversary behaviors simulated, collisions: "
      f"{int(collided.sum())}")

# and a situation with no way out: one rigid candidate each, arriving with
# a gap too small for any contingency
pa = build_path([(-60.0, 0.0), (140.0, 0.0)], 2.0, 4.0, 2.0)
pb = build_path([(0.0, -60.0), (0.0, 140.0)], 2.0, 4.0, 2.0)
lim = Limits(12.0, -8.0, 3.0, -10.0, 10.0)
trap = Scenario(
    name="trap", speed_limit=10.0, ego_id="b",
    vehicles=(VehicleSpec("a", pa, LongState(0.0, 10.0, 0.0), lim,
                          default_vehicle_params(10.0)),
              VehicleSpec("b", pb, LongState(7.0, 10.0, 0.0), lim,
                          default_vehicle_params(10.0))),
    sampling=SamplingConfig(seed=1, profiles_per_vehicle=1,
                            jerk_levels=(0.0,)))
fallback = plan(trap)
print(f"rigid near-miss scenario: outcome = {fallback.outcome}, "
      f"ego brakes from {fallback.emergency_profile.v[0]:.0f} m/s to "
      f"{fallback.emergency_profile.v[-1]:.0f} m/s")
