"""Command-line interface.

    coopplan run <scenario-file|builtin-name> [--seed N] [--samples N]
                 [--dt F] [--horizon F] [--format csv|json|both]
                 [--out-dir DIR]
    coopplan list-builtins
    coopplan validate <scenario-file>

Exit codes of `run`: 0 when an ensemble was selected, 2 when the planner
fell back to emergency braking, 1 on errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path as FilePath

from .builtins import builtin_scenarios
from .planner import plan
from .report import build_report, export_report
from .scenario import load_scenario_file


def _resolve_scenario(ref: str):
    builtins = builtin_scenarios()
    if ref in builtins:
        return builtins[ref]
    if FilePath(ref).exists():
        return load_scenario_file(ref)
    raise ValueError(f"{ref!r} is neither a builtin scenario nor a file")


def _apply_overrides(scenario, args):
    cfg = scenario.sampling
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.samples is not None:
        cfg = replace(cfg, profiles_per_vehicle=args.samples)
    if args.dt is not None:
        cfg = replace(cfg, dt=args.dt)
    if args.horizon is not None:
        cfg = replace(cfg, horizon=args.horizon)
    return cfg


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="coopplan",
        description="Cooperative motion planning on predefined paths")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="plan a scenario and export the report")
    run_p.add_argument("scenario", help="scenario file or builtin name")
    run_p.add_argument("--seed", type=int, default=None)
    run_p.add_argument("--samples", type=int, default=None,
                       help="profiles per vehicle")
    run_p.add_argument("--dt", type=float, default=None)
    run_p.add_argument("--horizon", type=float, default=None)
    run_p.add_argument("--format", choices=("csv", "json", "both"),
                       default="both")
    run_p.add_argument("--out-dir", default="out")

    sub.add_parser("list-builtins", help="list builtin scenario names")

    val_p = sub.add_parser("validate", help="check a scenario file")
    val_p.add_argument("scenario")

    args = parser.parse_args(argv)

    if args.command == "list-builtins":
        for name in sorted(builtin_scenarios()):
            print(name)
        return 0

    if args.command == "validate":
        try:
            scenario = load_scenario_file(args.scenario)
        except (OSError, ValueError) as exc:
            print(f"invalid: {exc}", file=sys.stderr)
            return 1
        print(f"ok: {scenario.name} ({len(scenario.vehicles)} vehicles)")
        return 0

    try:
        scenario = _resolve_scenario(args.scenario)
        config = _apply_overrides(scenario, args)
        result = plan(scenario, config)
        report = build_report(scenario, result, config)
        written = export_report(report, args.format, args.out_dir)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    for p in written:
        print(p)
    if result.selected:
        print(f"selected ensemble {result.profile_indices} "
              f"with total cost {result.total_cost:.6g} "
              f"({result.candidates_evaluated} candidates)")
        return 0
    print("no candidate with a valid plan B: emergency braking")
    return 2


if __name__ == "__main__":
    sys.exit(main())
