"""Cooperative motion planning on predefined paths.

Velocity profiles are sampled from random jerk sequences, lifted onto
arc-length parametrized paths, and rated jointly per trajectory ensemble:
per-vehicle comfort/discomfort/infeasibility functionals, pairwise
zone-clearance costs, and right-of-way upscaling. The minimum-cost ensemble
that passes a worst-case contingency check is selected; emergency braking
is the fallback.
"""

from .builtins import builtin_scenarios
from .costs import (CostBreakdown, EvaluationFunctionalParams,
                    VehicleCostParams, default_vehicle_params, ensemble_cost,
                    eval_functional, pairwise_cost, singleton_cost, tzc)
from .errors import (DegenerateGeometryError, IntractableConfigError,
                     PathOverrunError, ScenarioFormatError,
                     ScenarioValidationError)
from .geometry import CollisionZone, Path, build_path, collision_zone, eval_path
from .kinematics import (Limits, LongState, Trajectory, VelocityProfile,
                         constant_velocity_profile, integrate_jerk_sequence,
                         lift_to_trajectory, reaches_zone_end,
                         zone_crossing_times)
from .oracle import OracleConfig, dense_occupancy_check, exhaustive_best
from .planner import (PlanResult, SamplingConfig, enumerate_ensembles, plan,
                      sample_profiles)
from .report import RunReport, build_report, export_report
from .safety import (PlanBVerdict, collides, has_valid_plan_b,
                     plan_b_ego_first, plan_b_other_first)
from .scenario import (Scenario, VehicleSpec, load_scenario,
                       load_scenario_file, parse_scenario, scenario_to_dict,
                       serialize_scenario)

__all__ = [
    "CollisionZone", "CostBreakdown", "DegenerateGeometryError",
    "EvaluationFunctionalParams", "IntractableConfigError", "Limits",
    "LongState", "OracleConfig", "Path", "PathOverrunError", "PlanBVerdict",
    "PlanResult", "RunReport", "SamplingConfig", "Scenario",
    "ScenarioFormatError", "ScenarioValidationError", "Trajectory",
    "VehicleCostParams", "VehicleSpec", "VelocityProfile",
    "build_path", "build_report", "builtin_scenarios", "collides",
    "collision_zone", "constant_velocity_profile", "default_vehicle_params",
    "dense_occupancy_check", "ensemble_cost", "enumerate_ensembles",
    "eval_functional", "eval_path", "exhaustive_best", "export_report",
    "has_valid_plan_b", "integrate_jerk_sequence", "lift_to_trajectory",
    "load_scenario", "load_scenario_file", "pairwise_cost", "parse_scenario",
    "plan", "plan_b_ego_first", "plan_b_other_first", "reaches_zone_end",
    "sample_profiles", "scenario_to_dict", "serialize_scenario",
    "singleton_cost", "tzc", "zone_crossing_times",
]
