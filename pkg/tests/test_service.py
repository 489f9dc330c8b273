"""HTTP/JSON service: endpoint contracts, error codes, CLI parity."""

import copy
import json

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from fleettco.cli import main
from fleettco.dataset import load_dataset
from fleettco.service import create_app


@pytest.fixture(scope="module")
def ds():
    return load_dataset()


@pytest.fixture(scope="module")
def client(ds):
    return TestClient(create_app(ds))


def test_variants_metadata(client):
    r = client.get("/api/variants")
    assert r.status_code == 200
    body = r.json()
    assert len(body["variants"]) == 12
    ids = {v["id"] for v in body["variants"]}
    assert {"D-ICE", "BEV700", "FCEV200", "NZEV-H2"} <= ids
    assert any(f["id"] == "diesel_price" for f in body["factors"])
    assert body["dataset_hash"]


def test_system_tco_diesel_adder(client):
    r = client.post("/api/system-tco", json={"variant": "D-ICE", "year": 2023})
    assert r.status_code == 200
    adder = r.json()["levelized_usd_per_mile"]["infrastructure_adder"]
    assert abs(adder - 0.05) <= 0.05


def test_breakeven_identical_series_first_year(client):
    r = client.post(
        "/api/breakeven",
        json={"variant": "D-ICE", "baseline": "D-ICE", "start_year": 2025, "end_year": 2030},
    )
    assert r.status_code == 200
    assert r.json()["breakeven_year"] == 2025


def test_sensitivity_zero_delta(client):
    r = client.post("/api/sensitivity", json={"variant": "BEV700", "delta": 0.0})
    assert r.status_code == 200
    assert all(row["relative_change"] == 0.0 for row in r.json()["results"])


def test_malformed_body_returns_400_with_fields(client):
    r = client.post("/api/system-tco", json={"year": "not-a-year"})
    assert r.status_code == 400
    body = r.json()
    assert body["error"] == "malformed request body"
    fields = {p["field"] for p in body["problems"]}
    assert any("variant" in f for f in fields)
    assert any("year" in f for f in fields)


def test_unknown_variant_returns_400(client):
    r = client.post("/api/system-tco", json={"variant": "WARP9"})
    assert r.status_code == 400


def test_infeasible_scenario_returns_422(ds):
    raw = copy.deepcopy(dict(ds.raw))
    # A charge requirement longer than the depot day cannot be scheduled.
    raw["fleet_preset"]["service_per_visit"]["BEV1000"]["charge_kwh"] = 4000
    broken = ds.with_raw(raw)
    client = TestClient(create_app(broken))
    r = client.post("/api/system-tco", json={"variant": "BEV1000"})
    assert r.status_code == 422


def test_project_rows_cover_requested_grid(client):
    r = client.post("/api/project", json={"variants": ["BEV700"], "years": [2025, 2040]})
    assert r.status_code == 200
    rows = r.json()["rows"]
    assert [(row["variant"], row["year"]) for row in rows] == [("BEV700", 2025), ("BEV700", 2040)]
    for row in rows:
        assert row["with_infrastructure"] >= row["no_infrastructure"]


def test_overrides_change_results(client):
    base = client.post("/api/system-tco", json={"variant": "D-ICE"}).json()
    up = client.post(
        "/api/system-tco", json={"variant": "D-ICE", "overrides": {"diesel_price": 0.10}}
    ).json()
    assert (
        up["levelized_usd_per_mile"]["with_infrastructure"]
        > base["levelized_usd_per_mile"]["with_infrastructure"]
    )


def test_cli_and_service_payloads_byte_identical(client, tmp_path):
    runner = CliRunner()
    r = runner.invoke(
        main,
        ["system-tco", "--variant", "NZEV-NG", "--year", "2030", "--format", "structured",
         "--out", str(tmp_path)],
    )
    assert r.exit_code == 0
    cli_bytes = (tmp_path / "system_tco_NZEV-NG.json").read_bytes().rstrip(b"\n")
    service_bytes = client.post(
        "/api/system-tco", json={"variant": "NZEV-NG", "year": 2030}
    ).content
    assert cli_bytes == service_bytes


def test_service_is_stateless_across_requests(client):
    a = client.post("/api/system-tco", json={"variant": "BEV700", "year": 2023}).content
    client.post(
        "/api/system-tco", json={"variant": "BEV700", "year": 2023, "overrides": {"battery_unit_cost": 0.5}}
    )
    b = client.post("/api/system-tco", json={"variant": "BEV700", "year": 2023}).content
    assert a == b


def test_fleet_size_accepted_and_reflected(client):
    r = client.post("/api/system-tco", json={"variant": "BEV700", "fleet_size": 60})
    assert r.status_code == 200
    body = r.json()
    assert body["fleet_size"] == 60
    assert body["stations"][0]["count"] > 9
    bad = client.post("/api/system-tco", json={"variant": "BEV700", "fleet_size": 0})
    assert bad.status_code == 400


def test_structured_payload_schema_fields(client):
    body = client.post("/api/system-tco", json={"variant": "NZEV-H2"}).json()
    assert set(body["levelized_usd_per_mile"]) == {
        "no_infrastructure",
        "with_infrastructure",
        "infrastructure_adder",
    }
    assert [s["infra_type"] for s in body["stations"]] == ["h2", "dcfc"]
    assert {i["infra_type"] for i in body["infrastructure"]} == {"h2", "dcfc"}
    assert json.dumps(body, sort_keys=True)  # JSON-serializable end to end
