"""One-at-a-time sensitivity sweeps over the system TCO.

Each factor handle maps to one logical dataset field (a price series, a
unit cost, a rate). A run re-evaluates the full system TCO with exactly
that field scaled by (1 + delta), leaving every other byte of the dataset
untouched, and reports the relative change against the unperturbed
baseline.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import Callable

from .dataset import Dataset
from .errors import InvalidInputError
from .system import system_tco


def _scale(node: dict, key: str, factor: float) -> None:
    node[key] = node[key] * factor


def _scale_series(raw: dict, series: str, factor: float) -> None:
    table = raw["energy_prices_usd"][series]
    for year in table:
        table[year] *= factor


def _scale_all_classes(raw: dict, field_name: str, factor: float) -> None:
    for cls in raw["operations"]["classes"].values():
        cls[field_name] *= factor


def _scale_intensities(raw: dict, carriers: tuple[str, ...], factor: float) -> None:
    for cls in raw["energy"]["intensities_per_mile"].values():
        for pt in cls.values():
            for carrier in carriers:
                if carrier in pt:
                    pt[carrier] *= factor


def _scale_maintenance(raw: dict, factor: float) -> None:
    for cls in raw["operations"]["maintenance_usd_per_mile"].values():
        for pt in cls:
            cls[pt] *= factor


def _scale_infra_equipment(raw: dict, factor: float, item_filter=None, type_filter=None) -> None:
    for name, t in raw["infrastructure"]["types"].items():
        if type_filter and name not in type_filter:
            continue
        for item in t["equipment"]:
            if item_filter is None or item["id"] in item_filter:
                item["unit_cost_usd"] *= factor


def _scale_infra_development(raw: dict, factor: float) -> None:
    for t in raw["infrastructure"]["types"].values():
        for item in t["development"]:
            item["fixed_usd"] *= factor
            item["per_station_usd"] *= factor


def _scale_infra_om(raw: dict, factor: float) -> None:
    for t in raw["infrastructure"]["types"].values():
        for key in t["om"]:
            t["om"][key] *= factor


@dataclass(frozen=True)
class FactorHandle:
    factor_id: str
    category: str
    description: str
    apply: Callable[[dict, float], None]


FACTORS: dict[str, FactorHandle] = {
    h.factor_id: h
    for h in [
        FactorHandle("diesel_price", "energy_price", "diesel $/gal series",
                     lambda raw, f: _scale_series(raw, "diesel_per_gal", f)),
        FactorHandle("electricity_price", "energy_price", "electricity $/kWh series",
                     lambda raw, f: _scale_series(raw, "electricity_per_kwh", f)),
        FactorHandle("h2_price", "energy_price", "hydrogen $/kg series",
                     lambda raw, f: _scale_series(raw, "h2_per_kg", f)),
        FactorHandle("ng_price", "energy_price", "natural gas $/kg series",
                     lambda raw, f: _scale_series(raw, "ng_per_kg", f)),
        FactorHandle("carbon_price", "energy_price", "carbon $/kg CO2 series",
                     lambda raw, f: _scale_series(raw, "carbon_per_kg_co2", f)),
        FactorHandle("battery_unit_cost", "vehicle_price", "battery pack $/kWh",
                     lambda raw, f: _scale(raw["unit_costs_usd"], "battery_per_kwh", f)),
        FactorHandle("fuel_cell_unit_cost", "vehicle_price", "fuel cell $/kW",
                     lambda raw, f: _scale(raw["unit_costs_usd"], "fuel_cell_per_kw", f)),
        FactorHandle("h2_tank_unit_cost", "vehicle_price", "hydrogen tank $/kg",
                     lambda raw, f: (_scale(raw["unit_costs_usd"], "h2_tank_per_kg", f),
                                     _scale(raw["unit_costs_usd"], "h2_ice_tank_per_kg", f))),
        FactorHandle("electric_drive_unit_cost", "vehicle_price", "electric drive $/kW",
                     lambda raw, f: _scale(raw["unit_costs_usd"], "electric_drive_per_kw", f)),
        FactorHandle("base_vehicle_cost", "vehicle_price", "conventional component baseline costs",
                     lambda raw, f: [_scale(raw["base_component_costs_usd"], k, f)
                                     for k in raw["base_component_costs_usd"]]),
        FactorHandle("annual_vmt", "vehicle_om", "annual miles traveled",
                     lambda raw, f: _scale_all_classes(raw, "annual_vmt_miles", f)),
        FactorHandle("driver_wage", "vehicle_om", "driver wage $/hr",
                     lambda raw, f: _scale(raw["operations"], "driver_wage_usd_per_hour", f)),
        FactorHandle("maintenance_rate", "vehicle_om", "vehicle maintenance $/mi",
                     lambda raw, f: _scale_maintenance(raw, f)),
        FactorHandle("insurance_rate", "vehicle_om", "insurance as a fraction of price",
                     lambda raw, f: _scale(raw["operations"], "insurance_rate_frac_of_price_per_year", f)),
        FactorHandle("fuel_consumption", "fuel_efficiency", "fuel burned per mile (all fuels)",
                     lambda raw, f: _scale_intensities(raw, ("diesel_gal", "h2_kg", "ng_kg"), f)),
        FactorHandle("electricity_consumption", "fuel_efficiency", "electricity per mile",
                     lambda raw, f: _scale_intensities(raw, ("electricity_kwh",), f)),
        FactorHandle("residual_value", "end_of_life", "resale value multiplier",
                     lambda raw, f: _scale(raw["residual_value"], "value_multiplier", f)),
        FactorHandle("down_payment", "financial", "down payment fraction",
                     lambda raw, f: raw["financial"].__setitem__(
                         "down_payment_frac", min(raw["financial"]["down_payment_frac"] * f, 1.0))),
        FactorHandle("interest_rate", "financial", "loan interest rate",
                     lambda raw, f: _scale(raw["financial"], "interest_rate_frac", f)),
        FactorHandle("charger_cost", "infra_equipment", "charger unit cost",
                     lambda raw, f: _scale_infra_equipment(raw, f, item_filter=("charger",))),
        FactorHandle("h2_compressor_cost", "infra_equipment", "hydrogen compressor cost",
                     lambda raw, f: _scale_infra_equipment(raw, f, item_filter=("compressor",), type_filter=("h2",))),
        FactorHandle("infra_equipment_cost", "infra_equipment", "all infrastructure equipment costs",
                     lambda raw, f: _scale_infra_equipment(raw, f)),
        FactorHandle("infra_development_cost", "infra_development", "all infrastructure development costs",
                     lambda raw, f: _scale_infra_development(raw, f)),
        FactorHandle("infra_om_cost", "infra_om", "all infrastructure O&M rates",
                     lambda raw, f: _scale_infra_om(raw, f)),
    ]
}

FACTOR_CATEGORIES = tuple(dict.fromkeys(h.category for h in FACTORS.values()))


@dataclass(frozen=True)
class SensitivityResult:
    variant: str
    factor: str
    category: str
    baseline_per_mile: float
    perturbed_per_mile: float

    @property
    def relative_change(self) -> float:
        return self.perturbed_per_mile / self.baseline_per_mile - 1.0


def perturb_dataset(dataset: Dataset, factor_id: str, delta: float) -> Dataset:
    """Dataset copy with exactly one logical field scaled by (1 + delta)."""
    handle = FACTORS.get(factor_id)
    if handle is None:
        raise InvalidInputError(f"unknown sensitivity factor: {factor_id}")
    raw = copy.deepcopy(dict(dataset.raw))
    handle.apply(raw, 1.0 + delta)
    return dataset.with_raw(raw)


def run_sensitivity(
    dataset: Dataset,
    variant: str,
    year: int | None = None,
    factors: list[str] | None = None,
    delta: float = 0.10,
) -> list[SensitivityResult]:
    """One result per factor, ordered by factor id for deterministic output."""
    ids = factors if factors is not None else sorted(FACTORS)
    unknown = [f for f in ids if f not in FACTORS]
    if unknown:
        raise InvalidInputError(f"unknown sensitivity factors: {unknown}")
    baseline = system_tco(dataset, variant, year).levelized_with_infra
    results = []
    for factor_id in sorted(ids):
        perturbed = system_tco(perturb_dataset(dataset, factor_id, delta), variant, year)
        results.append(
            SensitivityResult(
                variant=variant,
                factor=factor_id,
                category=FACTORS[factor_id].category,
                baseline_per_mile=baseline,
                perturbed_per_mile=perturbed.levelized_with_infra,
            )
        )
    return results


def tornado_table(results: list[SensitivityResult]) -> list[SensitivityResult]:
    """Factors ranked by impact magnitude, stable alphabetical tie-break."""
    if not results:
        raise InvalidInputError("no sensitivity results to rank")
    return sorted(results, key=lambda r: (-abs(r.relative_change), r.factor))
