"""CLI commands: artifacts on disk, exit codes, determinism."""

import json

import pytest
from click.testing import CliRunner

from fleettco.cli import main
from fleettco.dataset import load_dataset
from fleettco.system import project


@pytest.fixture()
def runner():
    return CliRunner()


def test_system_tco_reports_bev_adder(runner, tmp_path):
    r = runner.invoke(main, ["system-tco", "--variant", "BEV700", "--year", "2023",
                             "--out", str(tmp_path)])
    assert r.exit_code == 0, r.output
    csv_text = (tmp_path / "system_tco_BEV700.csv").read_text("utf-8")
    adder = float(csv_text.splitlines()[1].split(",")[3])
    assert abs(adder - 0.25) <= 0.05
    assert (tmp_path / "system_capex_BEV700_dcfc.png").exists()


def test_schedule_empty_instance_exits_zero(runner, tmp_path):
    instance = tmp_path / "empty.csv"
    instance.write_text("id,arrival_h,dwell_h,required_h\n", encoding="utf-8")
    r = runner.invoke(main, ["schedule", "--instance", str(instance), "--out", str(tmp_path)])
    assert r.exit_code == 0, r.output
    assert "0 stations" in r.output


def test_schedule_infeasible_instance_exits_three(runner, tmp_path):
    instance = tmp_path / "bad.csv"
    instance.write_text(
        "id,arrival_h,dwell_h,required_h\nv0,0.0,1.0,2.0\n", encoding="utf-8"
    )
    r = runner.invoke(main, ["schedule", "--instance", str(instance), "--out", str(tmp_path)])
    assert r.exit_code == 3
    assert "v0" in r.output


def test_missing_dataset_exits_two(runner, tmp_path):
    r = runner.invoke(main, ["--dataset", str(tmp_path / "nope.json"),
                             "system-tco", "--variant", "BEV700"])
    assert r.exit_code == 2


def test_unknown_variant_exits_two(runner, tmp_path):
    r = runner.invoke(main, ["system-tco", "--variant", "WARP9", "--out", str(tmp_path)])
    assert r.exit_code == 2


def test_project_four_year_series_matches_engine(runner, tmp_path):
    r = runner.invoke(main, ["project", "--variants", "D-ICE,BEV700",
                             "--years", "2025,2030,2035,2040", "--out", str(tmp_path)])
    assert r.exit_code == 0, r.output
    lines = (tmp_path / "projection.csv").read_text("utf-8").splitlines()
    assert len(lines) == 1 + 8  # header + 2 variants x 4 years
    rows = {(parts[0], parts[1]): parts for parts in (ln.split(",") for ln in lines[1:])}
    engine = project(load_dataset(), ["D-ICE", "BEV700"], [2025, 2030, 2035, 2040])
    for row in engine:
        cells = rows[(row.variant, str(row.year))]
        assert float(cells[2]) == pytest.approx(row.levelized_no_infra, abs=1e-4)
        assert float(cells[3]) == pytest.approx(row.levelized_with_infra, abs=1e-4)
    assert (tmp_path / "projection.png").exists()


def test_sensitivity_zero_delta_all_zero(runner, tmp_path):
    r = runner.invoke(main, ["sensitivity", "--variant", "D-ICE", "--delta", "0",
                             "--out", str(tmp_path)])
    assert r.exit_code == 0, r.output
    lines = (tmp_path / "sensitivity_D-ICE.csv").read_text("utf-8").splitlines()[1:]
    assert lines and all(float(ln.split(",")[5]) == 0.0 for ln in lines)


def test_breakeven_same_variant_parity_first_year(runner, tmp_path):
    r = runner.invoke(main, ["breakeven", "--variant", "D-ICE", "--baseline", "D-ICE",
                             "--start", "2024", "--end", "2026", "--out", str(tmp_path)])
    assert r.exit_code == 0, r.output
    assert "breakeven year: 2024" in r.output


def test_vehicle_and_infra_commands_write_artifacts(runner, tmp_path):
    r = runner.invoke(main, ["vehicle-tco", "--vehicle-class", "box_truck",
                             "--out", str(tmp_path)])
    assert r.exit_code == 0, r.output
    assert (tmp_path / "vehicle_tco_box_truck.csv").exists()
    assert (tmp_path / "vehicle_tco_box_truck.png").exists()
    r = runner.invoke(main, ["infra-tco", "--infra-type", "dcfc", "--stations", "4",
                             "--dispensed", "1000000", "--out", str(tmp_path)])
    assert r.exit_code == 0, r.output
    assert (tmp_path / "infra_capex_dcfc.csv").exists()
    assert (tmp_path / "infra_capex_dcfc.png").exists()


def test_structured_output_is_deterministic(runner, tmp_path):
    args = ["system-tco", "--variant", "FCEV200", "--year", "2030", "--format", "structured"]
    r1 = runner.invoke(main, args + ["--out", str(tmp_path / "a")])
    r2 = runner.invoke(main, args + ["--out", str(tmp_path / "b")])
    assert r1.exit_code == r2.exit_code == 0
    a = (tmp_path / "a" / "system_tco_FCEV200.json").read_bytes()
    b = (tmp_path / "b" / "system_tco_FCEV200.json").read_bytes()
    assert a == b
    assert json.loads(a)["variant"] == "FCEV200"


def test_override_flag_shifts_result(runner, tmp_path):
    base = runner.invoke(main, ["system-tco", "--variant", "D-ICE",
                                "--format", "structured", "--out", str(tmp_path / "x")])
    up = runner.invoke(main, ["system-tco", "--variant", "D-ICE", "--override",
                              "diesel_price=0.10", "--format", "structured",
                              "--out", str(tmp_path / "y")])
    assert base.exit_code == up.exit_code == 0
    v0 = json.loads(base.output)["levelized_usd_per_mile"]["with_infrastructure"]
    v1 = json.loads(up.output)["levelized_usd_per_mile"]["with_infrastructure"]
    assert v1 > v0
