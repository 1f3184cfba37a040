"""Scenario documents: schema, loading, validation and serialization.

A scenario is a YAML document with SI units throughout:

    name: narrowing_row
    speed_limit: 10.0          # m/s, default speed optimum of every vehicle
    ego: west
    right_of_way:              # pairs [priority id, yielding id]; optional
      - [east, west]
    feasibility_threshold: 1.0e6   # optional
    sampling:                      # optional, all fields optional
      seed: 0
      profiles_per_vehicle: 300
      jerk_levels: [-2, -1, 0, 1, 2]
      dt: 0.25
      horizon: 8.0
      exhaustive: false
    vehicles:
      - id: west
        path:
          waypoints: [[0.0, 0.0], [120.0, 0.0], ...]
          corridor_halfwidth: 2.0
          vehicle_length: 4.5
          vehicle_width: 2.0
        initial: {s: 0.0, v: 10.0, a: 0.0}
        limits:  {v_max: 12.0, a_min: -8.0, a_max: 3.0, j_min: -10.0, j_max: 10.0}
        cost:                      # optional
          desired_speed: 10.0      # defaults to speed_limit
          row_factor: 10.0
          comfort_threshold: 1.0
          infeasibility_threshold: 1.0e6
          properties:              # optional full per-property overrides
            v: {f_opt: ..., f_disc_plus: ..., f_disc_minus: ..., ...}

Unknown fields are rejected; error messages name the offending field path.
"""

from __future__ import annotations

from dataclasses import dataclass

import yaml

from .costs import (EvaluationFunctionalParams, VehicleCostParams,
                    default_vehicle_params)
from .errors import ScenarioFormatError, ScenarioValidationError
from .geometry import Path, build_path
from .kinematics import Limits, LongState
from .planner import SamplingConfig

DEFAULT_A_MIN = -8.0
DEFAULT_A_MAX = 3.0
DEFAULT_J_MIN = -10.0
DEFAULT_J_MAX = 10.0
DEFAULT_VMAX_FACTOR = 1.2


@dataclass(frozen=True)
class VehicleSpec:
    id: str
    path: Path
    initial: LongState
    limits: Limits
    cost_params: VehicleCostParams


@dataclass(frozen=True)
class Scenario:
    name: str
    speed_limit: float
    ego_id: str
    vehicles: tuple[VehicleSpec, ...]
    right_of_way: tuple[tuple[str, str], ...] = ()
    feasibility_threshold: float = 1.0e6
    sampling: SamplingConfig = SamplingConfig()

    def __post_init__(self):
        ids = [v.id for v in self.vehicles]
        if len(ids) != len(set(ids)):
            raise ScenarioValidationError("vehicle ids must be unique")
        if self.ego_id not in ids:
            raise ScenarioValidationError(f"ego id {self.ego_id!r} not among vehicles")
        if self.speed_limit <= 0.0:
            raise ScenarioValidationError("speed_limit must be positive")
        seen = set()
        for a, b in self.right_of_way:
            if a not in ids or b not in ids:
                raise ScenarioValidationError(f"right_of_way pair ({a}, {b}) "
                                              "references unknown vehicle")
            if a == b:
                raise ScenarioValidationError("right_of_way must be irreflexive")
            if (b, a) in seen:
                raise ScenarioValidationError(
                    f"right_of_way is cyclic for ({a}, {b})")
            if (a, b) in seen:
                raise ScenarioValidationError(f"duplicate right_of_way pair ({a}, {b})")
            seen.add((a, b))
        for v in self.vehicles:
            if not (0.0 <= v.initial.s <= v.path.length):
                raise ScenarioValidationError(
                    f"vehicle {v.id!r} starts outside its path")
            if not (0.0 <= v.initial.v <= v.limits.v_max):
                raise ScenarioValidationError(
                    f"vehicle {v.id!r} initial speed outside [0, v_max]")

    @property
    def ego_index(self) -> int:
        return [v.id for v in self.vehicles].index(self.ego_id)

    @property
    def right_of_way_indices(self) -> frozenset:
        ids = [v.id for v in self.vehicles]
        return frozenset((ids.index(a), ids.index(b)) for a, b in self.right_of_way)


def _require(mapping, key, path, kind=None):
    if not isinstance(mapping, dict):
        raise ScenarioFormatError(f"{path or 'document'}: expected a mapping")
    if key not in mapping:
        raise ScenarioFormatError(f"{path + '.' if path else ''}{key}: missing field")
    return _check(mapping[key], f"{path + '.' if path else ''}{key}", kind)


def _optional(mapping, key, path, default, kind=None):
    if not isinstance(mapping, dict):
        raise ScenarioFormatError(f"{path or 'document'}: expected a mapping")
    if key not in mapping or mapping[key] is None:
        return default
    return _check(mapping[key], f"{path + '.' if path else ''}{key}", kind)


def _check(value, path, kind):
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioFormatError(f"{path}: expected a number")
        return float(value)
    if kind is not None and not isinstance(value, kind):
        raise ScenarioFormatError(f"{path}: expected {kind.__name__}")
    return value


def _reject_unknown(mapping, allowed, path):
    unknown = set(mapping) - set(allowed)
    if unknown:
        raise ScenarioFormatError(
            f"{path or 'document'}: unknown field {sorted(unknown)[0]!r}")


_FUNCTIONAL_FIELDS = ("f_opt", "f_disc_plus", "f_disc_minus", "f_inf_plus",
                      "f_inf_minus", "margin_plus", "margin_minus",
                      "cmargin_plus", "cmargin_minus", "t_comf", "t_inf",
                      "b_plus", "b_minus")


def _parse_functional(doc, path, base: EvaluationFunctionalParams):
    _reject_unknown(doc, _FUNCTIONAL_FIELDS, path)
    kwargs = {f: _optional(doc, f, path, getattr(base, f), float)
              for f in _FUNCTIONAL_FIELDS}
    try:
        return EvaluationFunctionalParams(**kwargs)
    except ValueError as exc:
        raise ScenarioValidationError(f"{path}: {exc}") from exc


def _parse_cost(doc, path, speed_limit: float) -> VehicleCostParams:
    _reject_unknown(doc, ("desired_speed", "row_factor", "comfort_threshold",
                          "infeasibility_threshold", "properties"), path)
    desired = _optional(doc, "desired_speed", path, speed_limit, float)
    row = _optional(doc, "row_factor", path, None, float)
    t_comf = _optional(doc, "comfort_threshold", path, 1.0, float)
    t_inf = _optional(doc, "infeasibility_threshold", path, 1.0e6, float)
    base = default_vehicle_params(desired, t_comf=t_comf, t_inf=t_inf)
    if row is not None:
        base = VehicleCostParams(base.v, base.a_lon, base.a_lat, base.omega,
                                 base.offset, base.tzc, row)
    props = _optional(doc, "properties", path, None, dict)
    if props is None:
        return base
    ppath = f"{path}.properties"
    _reject_unknown(props, ("v", "a_lon", "a_lat", "omega", "offset", "tzc"), ppath)
    parsed = {}
    for name in ("v", "a_lon", "a_lat", "omega", "offset", "tzc"):
        sub = _optional(props, name, ppath, None, dict)
        parsed[name] = getattr(base, name) if sub is None else \
            _parse_functional(sub, f"{ppath}.{name}", getattr(base, name))
    return VehicleCostParams(parsed["v"], parsed["a_lon"], parsed["a_lat"],
                             parsed["omega"], parsed["offset"], parsed["tzc"],
                             base.row_factor)


def _parse_vehicle(doc, path, speed_limit: float) -> VehicleSpec:
    _reject_unknown(doc, ("id", "path", "initial", "limits", "cost"), path)
    vid = _require(doc, "id", path, str)

    pdoc = _require(doc, "path", path, dict)
    ppath = f"{path}.path"
    _reject_unknown(pdoc, ("waypoints", "corridor_halfwidth", "vehicle_length",
                           "vehicle_width"), ppath)
    waypoints = _require(pdoc, "waypoints", ppath, list)
    try:
        vehicle_path = build_path(
            waypoints,
            _require(pdoc, "corridor_halfwidth", ppath, float),
            _require(pdoc, "vehicle_length", ppath, float),
            _require(pdoc, "vehicle_width", ppath, float))
    except ValueError as exc:
        raise ScenarioValidationError(f"{ppath}: {exc}") from exc

    idoc = _require(doc, "initial", path, dict)
    ipath = f"{path}.initial"
    _reject_unknown(idoc, ("s", "v", "a"), ipath)
    initial = LongState(_optional(idoc, "s", ipath, 0.0, float),
                        _require(idoc, "v", ipath, float),
                        _optional(idoc, "a", ipath, 0.0, float))

    ldoc = _optional(doc, "limits", path, {}, dict)
    lpath = f"{path}.limits"
    _reject_unknown(ldoc, ("v_max", "a_min", "a_max", "j_min", "j_max"), lpath)
    try:
        limits = Limits(
            _optional(ldoc, "v_max", lpath, DEFAULT_VMAX_FACTOR * speed_limit, float),
            _optional(ldoc, "a_min", lpath, DEFAULT_A_MIN, float),
            _optional(ldoc, "a_max", lpath, DEFAULT_A_MAX, float),
            _optional(ldoc, "j_min", lpath, DEFAULT_J_MIN, float),
            _optional(ldoc, "j_max", lpath, DEFAULT_J_MAX, float))
    except ValueError as exc:
        raise ScenarioValidationError(f"{lpath}: {exc}") from exc

    cdoc = _optional(doc, "cost", path, None, dict)
    cost = default_vehicle_params(speed_limit) if cdoc is None else \
        _parse_cost(cdoc, f"{path}.cost", speed_limit)
    return VehicleSpec(vid, vehicle_path, initial, limits, cost)


def parse_scenario(doc: dict) -> Scenario:
    """Build a Scenario from an already-parsed document mapping."""
    _reject_unknown(doc, ("name", "speed_limit", "ego", "right_of_way",
                          "feasibility_threshold", "sampling", "vehicles"), "")
    name = _require(doc, "name", "", str)
    speed_limit = _require(doc, "speed_limit", "", float)
    ego = _require(doc, "ego", "", str)

    vdocs = _require(doc, "vehicles", "", list)
    if not vdocs:
        raise ScenarioFormatError("vehicles: must not be empty")
    vehicles = tuple(_parse_vehicle(_check(v, f"vehicles[{i}]", dict),
                                    f"vehicles[{i}]", speed_limit)
                     for i, v in enumerate(vdocs))

    row_doc = _optional(doc, "right_of_way", "", [], list)
    row = []
    for i, pair in enumerate(row_doc):
        if not (isinstance(pair, list) and len(pair) == 2
                and all(isinstance(p, str) for p in pair)):
            raise ScenarioFormatError(
                f"right_of_way[{i}]: expected a pair of vehicle ids")
        row.append((pair[0], pair[1]))

    sdoc = _optional(doc, "sampling", "", None, dict)
    sampling = SamplingConfig()
    if sdoc is not None:
        spath = "sampling"
        _reject_unknown(sdoc, ("seed", "profiles_per_vehicle", "jerk_levels",
                               "dt", "horizon", "jerk_hold_steps",
                               "exhaustive"), spath)
        levels = _optional(sdoc, "jerk_levels", spath, list(SamplingConfig().jerk_levels), list)
        try:
            sampling = SamplingConfig(
                int(_optional(sdoc, "seed", spath, 0, int)),
                int(_optional(sdoc, "profiles_per_vehicle", spath, 300, int)),
                tuple(float(x) for x in levels),
                _optional(sdoc, "dt", spath, 0.25, float),
                _optional(sdoc, "horizon", spath, 8.0, float),
                int(_optional(sdoc, "jerk_hold_steps", spath, 1, int)),
                bool(_optional(sdoc, "exhaustive", spath, False, bool)))
        except ValueError as exc:
            raise ScenarioValidationError(f"sampling: {exc}") from exc

    threshold = _optional(doc, "feasibility_threshold", "", 1.0e6, float)
    return Scenario(name, speed_limit, ego, vehicles, tuple(row), threshold,
                    sampling)


def load_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document (YAML text)."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioFormatError(f"not valid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScenarioFormatError("document: expected a mapping at top level")
    return parse_scenario(doc)


def load_scenario_file(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return load_scenario(fh.read())


def _functional_dict(p: EvaluationFunctionalParams) -> dict:
    return {f: float(getattr(p, f)) for f in _FUNCTIONAL_FIELDS}


def scenario_to_dict(s: Scenario) -> dict:
    """Plain-data form of a scenario; load_scenario inverts it exactly."""
    return {
        "name": s.name,
        "speed_limit": s.speed_limit,
        "ego": s.ego_id,
        "right_of_way": [list(pair) for pair in s.right_of_way],
        "feasibility_threshold": s.feasibility_threshold,
        "sampling": {
            "seed": s.sampling.seed,
            "profiles_per_vehicle": s.sampling.profiles_per_vehicle,
            "jerk_levels": list(s.sampling.jerk_levels),
            "dt": s.sampling.dt,
            "horizon": s.sampling.horizon,
            "jerk_hold_steps": s.sampling.jerk_hold_steps,
            "exhaustive": s.sampling.exhaustive,
        },
        "vehicles": [{
            "id": v.id,
            "path": {
                "waypoints": [[float(x), float(y)] for x, y in v.path.waypoints],
                "corridor_halfwidth": v.path.corridor_halfwidth,
                "vehicle_length": v.path.vehicle_length,
                "vehicle_width": v.path.vehicle_width,
            },
            "initial": {"s": v.initial.s, "v": v.initial.v, "a": v.initial.a},
            "limits": {"v_max": v.limits.v_max, "a_min": v.limits.a_min,
                       "a_max": v.limits.a_max, "j_min": v.limits.j_min,
                       "j_max": v.limits.j_max},
            "cost": {
                "row_factor": v.cost_params.row_factor,
                "properties": {
                    name: _functional_dict(getattr(v.cost_params, name))
                    for name in ("v", "a_lon", "a_lat", "omega", "offset", "tzc")
                },
            },
        } for v in s.vehicles],
    }


def serialize_scenario(s: Scenario) -> str:
    return yaml.safe_dump(scenario_to_dict(s), sort_keys=False)
