import json

import pytest

from coopplan import (ScenarioFormatError, ScenarioValidationError,
                      builtin_scenarios, load_scenario, parse_scenario,
                      plan, scenario_to_dict, serialize_scenario)
from coopplan.cli import main as cli_main
from coopplan.report import build_report, export_report, report_csv, report_json

MINIMAL = """
name: mini
speed_limit: 10.0
ego: a
vehicles:
  - id: a
    path:
      waypoints: [[0.0, 0.0], [200.0, 0.0]]
      corridor_halfwidth: 2.0
      vehicle_length: 4.0
      vehicle_width: 2.0
    initial: {s: 0.0, v: 10.0}
"""

TWO_VEHICLE = """
name: pair
speed_limit: 10.0
ego: a
right_of_way:
  - [b, a]
sampling: {seed: 2, profiles_per_vehicle: 40}
vehicles:
  - id: a
    path:
      waypoints: [[-60.0, 0.0], [140.0, 0.0]]
      corridor_halfwidth: 2.0
      vehicle_length: 4.0
      vehicle_width: 2.0
    initial: {s: 0.0, v: 10.0}
  - id: b
    path:
      waypoints: [[0.0, -60.0], [0.0, 140.0]]
      corridor_halfwidth: 2.0
      vehicle_length: 4.0
      vehicle_width: 2.0
    initial: {s: 12.0, v: 10.0}
"""


class TestLoadScenario:
    def test_minimal_document(self):
        s = load_scenario(MINIMAL)
        assert s.name == "mini"
        assert s.vehicles[0].limits.v_max == pytest.approx(12.0)
        assert s.vehicles[0].cost_params.v.f_opt == pytest.approx(10.0)

    def test_missing_path_names_field(self):
        doc = {"name": "x", "speed_limit": 10.0, "ego": "a",
               "vehicles": [{"id": "a", "initial": {"v": 5.0}}]}
        with pytest.raises(ScenarioFormatError, match=r"vehicles\[0\]\.path"):
            parse_scenario(doc)

    def test_unknown_field_rejected(self):
        with pytest.raises(ScenarioFormatError, match="bogus"):
            load_scenario(MINIMAL + "\nbogus: 1\n")

    def test_cyclic_right_of_way_rejected(self):
        text = TWO_VEHICLE.replace("  - [b, a]", "  - [b, a]\n  - [a, b]")
        with pytest.raises(ScenarioValidationError, match="cyclic"):
            load_scenario(text)

    def test_unknown_ego_rejected(self):
        with pytest.raises(ScenarioValidationError):
            load_scenario(MINIMAL.replace("ego: a", "ego: ghost"))

    def test_round_trip(self):
        for s in (load_scenario(TWO_VEHICLE),
                  *builtin_scenarios().values()):
            again = load_scenario(serialize_scenario(s))
            assert again == s

    def test_schema_expresses_every_parameter(self):
        # everything the cost model and planner read survives a round trip
        s = builtin_scenarios()["t_junction_row"]
        d = scenario_to_dict(s)
        v = d["vehicles"][0]
        assert set(v["cost"]["properties"]) == {"v", "a_lon", "a_lat",
                                                "omega", "offset", "tzc"}
        assert set(d["sampling"]) == {"seed", "profiles_per_vehicle",
                                      "jerk_levels", "dt", "horizon",
                                      "jerk_hold_steps", "exhaustive"}


class TestBuiltins:
    def test_four_scenarios(self):
        names = set(builtin_scenarios())
        assert names == {"t_junction_unsigned", "t_junction_row",
                         "narrowing_unsigned", "narrowing_row"}

    def test_right_of_way_pairs(self):
        b = builtin_scenarios()
        assert b["t_junction_unsigned"].right_of_way == ()
        assert len(b["t_junction_row"].right_of_way) == 1
        assert b["narrowing_unsigned"].right_of_way == ()
        assert b["narrowing_row"].right_of_way == (("east", "west"),)

    def test_variants_share_paths(self):
        b = builtin_scenarios()
        for base in ("t_junction", "narrowing"):
            unsigned = b[f"{base}_unsigned"]
            signed = b[f"{base}_row"]
            for vu, vs in zip(unsigned.vehicles, signed.vehicles):
                assert vu.path == vs.path


class TestReports:
    def test_csv_row_count(self):
        s = load_scenario(TWO_VEHICLE)
        result = plan(s)
        assert result.selected
        report = build_report(s, result)
        lines = report_csv(report).strip().splitlines()
        n = int(round(s.sampling.horizon / s.sampling.dt)) + 1
        assert len(lines) == 1 + 2 * n  # header + rows per vehicle sample

    def test_emergency_json_outcome(self):
        text = TWO_VEHICLE.replace("profiles_per_vehicle: 40",
                                   "profiles_per_vehicle: 1, jerk_levels: [0.0]")
        text = text.replace("s: 12.0", "s: 7.0").replace("ego: a", "ego: b")
        s = load_scenario(text)
        result = plan(s)
        assert result.outcome == "emergency_brake"
        doc = json.loads(report_json(build_report(s, result)))
        assert doc["outcome"] == "emergency_brake"
        assert doc["emergency"]["vehicle"] == "b"

    def test_byte_identical_reruns(self, tmp_path):
        s = load_scenario(TWO_VEHICLE)
        blobs = []
        for run in range(2):
            result = plan(s)
            report = build_report(s, result)
            blobs.append((report_csv(report), report_json(report)))
        assert blobs[0] == blobs[1]


class TestCli:
    def test_list_builtins(self, capsys):
        assert cli_main(["list-builtins"]) == 0
        out = capsys.readouterr().out
        assert "narrowing_row" in out

    def test_validate_ok(self, tmp_path, capsys):
        f = tmp_path / "scen.yaml"
        f.write_text(TWO_VEHICLE)
        assert cli_main(["validate", str(f)]) == 0

    def test_validate_bad(self, tmp_path, capsys):
        f = tmp_path / "bad.yaml"
        f.write_text("name: broken\n")
        assert cli_main(["validate", str(f)]) == 1

    def test_run_writes_reports_and_exit_code(self, tmp_path, capsys):
        f = tmp_path / "scen.yaml"
        f.write_text(TWO_VEHICLE)
        code = cli_main(["run", str(f), "--out-dir", str(tmp_path / "out"),
                         "--format", "both"])
        assert code == 0
        assert (tmp_path / "out" / "pair_samples.csv").exists()
        assert (tmp_path / "out" / "pair_result.json").exists()

    def test_run_emergency_exit_code(self, tmp_path):
        text = TWO_VEHICLE.replace("profiles_per_vehicle: 40",
                                   "profiles_per_vehicle: 1, jerk_levels: [0.0]")
        text = text.replace("s: 12.0", "s: 7.0").replace("ego: a", "ego: b")
        f = tmp_path / "scen.yaml"
        f.write_text(text)
        code = cli_main(["run", str(f), "--out-dir", str(tmp_path / "out"),
                         "--format", "json"])
        assert code == 2

    def test_run_unknown_scenario(self, tmp_path):
        assert cli_main(["run", "no_such_thing", "--out-dir",
                         str(tmp_path)]) == 1
