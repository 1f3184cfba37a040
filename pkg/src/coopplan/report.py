"""Run reports: per-vehicle sample tables, cost tables and serialization.

CSV holds one row per (vehicle, sample time) with s, v, a. JSON holds the
full planning outcome: per-vehicle, per-category cost breakdowns, zone
intervals, plan-B verdicts and the resolved sampling configuration. Both
formats are byte-stable for identical inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path as FilePath

from .planner import PlanResult, SamplingConfig
from .scenario import Scenario


@dataclass(frozen=True)
class RunReport:
    scenario: Scenario
    config: SamplingConfig
    result: PlanResult


def build_report(scenario: Scenario, result: PlanResult,
                 config: SamplingConfig | None = None) -> RunReport:
    return RunReport(scenario, config if config is not None else scenario.sampling,
                     result)


def _sample_rows(report: RunReport):
    r = report.result
    if r.selected:
        per_vehicle = [(spec.id, traj.profile)
                       for spec, traj in zip(report.scenario.vehicles, r.ensemble)]
    elif r.emergency_profile is not None:
        per_vehicle = [(report.scenario.ego_id, r.emergency_profile)]
    else:
        per_vehicle = []
    for vid, prof in per_vehicle:
        times = prof.times
        for i in range(len(times)):
            yield (vid, float(times[i]), float(prof.s[i]), float(prof.v[i]),
                   float(prof.a[i]))


def report_csv(report: RunReport) -> str:
    lines = ["vehicle,t,s,v,a"]
    for vid, t, s, v, a in _sample_rows(report):
        lines.append(f"{vid},{t!r},{s!r},{v!r},{a!r}")
    return "\n".join(lines) + "\n"


def _breakdown_dict(bd) -> dict:
    return {"comfort": bd.comfort, "discomfort": bd.discomfort,
            "infeasibility": bd.infeasibility, "row": bd.row,
            "total": bd.total}


def _zone_dict(scenario: Scenario, pair, zone) -> dict:
    i, j = pair
    ids = [v.id for v in scenario.vehicles]
    return {
        "vehicles": [ids[i], ids[j]],
        "empty": zone.empty,
        "interval_a": None if zone.empty else list(zone.interval_a),
        "interval_b": None if zone.empty else list(zone.interval_b),
    }


def report_json(report: RunReport) -> str:
    s, r = report.scenario, report.result
    ids = [v.id for v in s.vehicles]
    doc = {
        "scenario": s.name,
        "outcome": r.outcome,
        "candidates_evaluated": r.candidates_evaluated,
        "feasibility_threshold": s.feasibility_threshold,
        "sampling": {
            "seed": report.config.seed,
            "profiles_per_vehicle": report.config.profiles_per_vehicle,
            "jerk_levels": list(report.config.jerk_levels),
            "dt": report.config.dt,
            "horizon": report.config.horizon,
            "jerk_hold_steps": report.config.jerk_hold_steps,
            "exhaustive": report.config.exhaustive,
        },
        "zones": [_zone_dict(s, pair, zone) for pair, zone in sorted(r.zones.items())],
    }
    if r.selected:
        doc["total_cost"] = r.total_cost
        doc["vehicles"] = [{
            "id": ids[i],
            "profile_index": r.profile_indices[i],
            "cost": _breakdown_dict(r.breakdowns[i]),
        } for i in range(len(ids))]
        doc["plan_b"] = [{
            "ego": s.ego_id,
            "other": ids[j],
            "valid": verdict.valid,
            "failing_time": verdict.failing_time,
            "failing_case": verdict.failing_case,
        } for j, verdict in sorted(r.plan_b.items())]
    else:
        prof = r.emergency_profile
        doc["emergency"] = {
            "vehicle": s.ego_id,
            "t": [float(t) for t in prof.times],
            "s": [float(x) for x in prof.s],
            "v": [float(x) for x in prof.v],
            "a": [float(x) for x in prof.a],
        }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def export_report(report: RunReport, format: str, out_dir) -> list[FilePath]:
    """Write the report; format is "csv", "json" or "both". Returns paths."""
    out = FilePath(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    name = report.scenario.name
    written = []
    if format not in ("csv", "json", "both"):
        raise ValueError(f"unknown format {format!r}")
    if format in ("csv", "both"):
        p = out / f"{name}_samples.csv"
        p.write_text(report_csv(report), encoding="utf-8")
        written.append(p)
    if format in ("json", "both"):
        p = out / f"{name}_result.json"
        p.write_text(report_json(report), encoding="utf-8")
        written.append(p)
    return written
