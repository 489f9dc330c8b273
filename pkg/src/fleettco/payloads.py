"""Structured result payloads shared by the CLI and the HTTP service.

Both surfaces serialize these dicts with the same canonical encoder, so a
given (dataset hash, request) pair produces byte-identical output no
matter which path served it.
"""

from __future__ import annotations

import json

from .dataset import Dataset
from .sensitivity import FACTORS, SensitivityResult
from .system import ProjectionRow, SystemTcoResult, variant_names


def encode(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False)


def variants_payload(dataset: Dataset) -> dict:
    system = dataset.raw["system"]
    return {
        "dataset_hash": dataset.dataset_hash(),
        "base_year": dataset.base_year,
        "fleet_size": system["fleet_size"],
        "fleet_class": system["fleet_class"],
        "baseline_variant": system["baseline_variant"],
        "advancement_levels": sorted(dataset.raw["advancement_levels"]),
        "variants": [
            {
                "id": name,
                "powertrain": system["variants"][name]["powertrain"],
                "vehicle_class": system["fleet_class"],
                "infrastructure": system["infra_pairing"][name],
            }
            for name in variant_names(dataset)
        ],
        "factors": [
            {"id": h.factor_id, "category": h.category, "description": h.description}
            for h in sorted(FACTORS.values(), key=lambda h: h.factor_id)
        ],
    }


def system_tco_payload(dataset: Dataset, result: SystemTcoResult) -> dict:
    return {
        "dataset_hash": dataset.dataset_hash(),
        "variant": result.variant,
        "year": result.year,
        "advancement": result.advancement,
        "fleet_size": result.fleet_size,
        "levelized_usd_per_mile": {
            "no_infrastructure": result.levelized_no_infra,
            "with_infrastructure": result.levelized_with_infra,
            "infrastructure_adder": result.infra_adder_per_mile,
        },
        "vehicle": {
            "gross_price_usd": result.vehicle.gross_price,
            "net_price_usd": result.vehicle.net_price,
            "residual_usd": result.vehicle.residual,
            "levelized_usd_per_mile": dict(result.vehicle.levelized),
            "discounted_totals_usd": dict(result.vehicle.totals),
        },
        "stations": [
            {
                "infra_type": p.infra_type,
                "station_kind": p.station_kind,
                "count": p.station_count,
                "utilization": p.utilization(),
            }
            for p in result.plans
        ],
        "infrastructure": [
            {
                "infra_type": b.infra_type,
                "num_stations": b.num_stations,
                "construction_years": b.construction_years,
                "capex_usd": b.capex.total,
                "discounted_total_usd": b.total,
                "capex_items": [
                    {
                        "id": i.item_id,
                        "kind": i.kind,
                        "cost_usd": i.cost,
                        "share": i.share,
                    }
                    for i in b.capex.items
                ],
            }
            for b in result.infra
        ],
    }


def project_payload(dataset: Dataset, rows: list[ProjectionRow]) -> dict:
    return {
        "dataset_hash": dataset.dataset_hash(),
        "rows": [
            {
                "variant": r.variant,
                "year": r.year,
                "no_infrastructure": r.levelized_no_infra,
                "with_infrastructure": r.levelized_with_infra,
                "no_infrastructure_band": list(r.no_infra_band),
                "with_infrastructure_band": list(r.with_infra_band),
                "at_or_below_baseline": r.at_or_below_baseline,
            }
            for r in rows
        ],
    }


def sensitivity_payload(dataset: Dataset, results: list[SensitivityResult]) -> dict:
    return {
        "dataset_hash": dataset.dataset_hash(),
        "results": [
            {
                "variant": r.variant,
                "factor": r.factor,
                "category": r.category,
                "baseline_usd_per_mile": r.baseline_per_mile,
                "perturbed_usd_per_mile": r.perturbed_per_mile,
                "relative_change": r.relative_change,
            }
            for r in results
        ],
    }


def breakeven_payload(
    dataset: Dataset,
    variant: str,
    baseline: str,
    years: list[int],
    alt_series: dict[int, float],
    base_series: dict[int, float],
    parity_year: int | None,
    with_infrastructure: bool,
) -> dict:
    return {
        "dataset_hash": dataset.dataset_hash(),
        "variant": variant,
        "baseline": baseline,
        "with_infrastructure": with_infrastructure,
        "breakeven_year": parity_year,
        "years": years,
        "series": {
            "alternative": [alt_series[y] for y in years],
            "baseline": [base_series[y] for y in years],
        },
    }
