"""Refueling/charging infrastructure costing: CapEx, O&M, utility, carbon, EoL.

Equipment quantities scale with the station count; development items carry
a fixed site portion plus a per-station portion, which is where the
economies of scale come from. Key equipment is replaced when it reaches
its design life; depreciable equipment is valued straight-line between
replacements, so the end-of-life residual is the remaining book value of
the newest installation (zero when the horizon divides the life evenly).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dataset import Dataset
from .errors import DatasetIncompleteError, InvalidInputError
from .finance import discount_sum, learned_cost

INFRA_COST_COMPONENTS = (
    "acquisition",
    "operation",
    "maintenance",
    "energy",
    "environmental",
    "end_of_life",
)


@dataclass(frozen=True)
class InfraConfig:
    """One refueling/charging site: type, station count, service horizon."""

    infra_type: str
    num_stations: int
    horizon_years: int = 30

    def __post_init__(self):
        if self.num_stations < 1:
            raise InvalidInputError("num_stations must be >= 1")
        if self.horizon_years < 1:
            raise InvalidInputError("horizon_years must be >= 1")


@dataclass(frozen=True)
class CapexItem:
    item_id: str
    kind: str  # "equipment" or "development"
    quantity: float
    unit_cost: float
    cost: float
    share: float


@dataclass(frozen=True)
class CapexBreakdown:
    items: tuple[CapexItem, ...]
    total: float

    def share_of(self, item_id: str) -> float:
        for item in self.items:
            if item.item_id == item_id:
                return item.share
        raise DatasetIncompleteError(f"no CapEx item named {item_id}")

    @property
    def development_share(self) -> float:
        return sum(i.share for i in self.items if i.kind == "development")


def _equipment_quantity(item: dict, num_stations: int) -> float:
    return float(num_stations) if item.get("per_station") else float(item.get("quantity", 1))


def infra_capex(
    dataset: Dataset, config: InfraConfig, year: int, learning_multiplier: float = 1.0
) -> CapexBreakdown:
    """Installed capital cost with per-item breakdown shares."""
    t = dataset.infra_type(config.infra_type)
    base_year = dataset.base_year
    items: list[CapexItem] = []
    for item in t["equipment"]:
        qty = _equipment_quantity(item, config.num_stations)
        rate = min(item["learning_rate_frac_per_year"] * learning_multiplier, 0.999999)
        unit = learned_cost(item["unit_cost_usd"], rate, year, base_year)
        unit = max(unit - item.get("incentive_usd", 0.0), 0.0)
        items.append(CapexItem(item["id"], "equipment", qty, unit, qty * unit, 0.0))
    for item in t["development"]:
        rate = min(item["learning_rate_frac_per_year"] * learning_multiplier, 0.999999)
        factor = (1.0 - rate) ** (year - base_year)
        cost = (item["fixed_usd"] + item["per_station_usd"] * config.num_stations) * factor
        items.append(CapexItem(item["id"], "development", 1.0, cost, cost, 0.0))
    total = sum(i.cost for i in items)
    if total > 0:
        items = [
            CapexItem(i.item_id, i.kind, i.quantity, i.unit_cost, i.cost, i.cost / total)
            for i in items
        ]
    return CapexBreakdown(items=tuple(items), total=total)


def infra_maintenance_year(
    base_usd: float,
    age_escalation: float,
    age_years: int,
    replacement_costs: tuple[tuple[float, float], ...] = (),
) -> float:
    """Age-escalated upkeep plus replacements of life-expired equipment."""
    if age_years < 1:
        raise InvalidInputError("age_years starts at 1 for the first operating year")
    total = base_usd * (1.0 + age_escalation * (age_years - 1))
    for price, uplift in replacement_costs:
        total += price * (1.0 + uplift)
    return total


def infra_opex_year(
    insurance: float, warranty: float, tax: float, labor: float, downtime: float
) -> float:
    return insurance + warranty + tax + labor + downtime


def utility_bill_year(tariff: dict, energy_kwh: float, peak_kw: float) -> float:
    """Fixed + energy + 12 monthly demand charges + delivery + transmission.

    Covers station-side overhead only; energy dispensed into vehicles is
    billed on the vehicle side and excluded here to avoid double counting.
    """
    if energy_kwh < 0 or peak_kw < 0:
        raise InvalidInputError("energy and peak demand must be >= 0")
    return (
        tariff["fixed_usd_per_year"]
        + tariff["energy_usd_per_kwh"] * energy_kwh
        + tariff["demand_usd_per_kw_month"] * peak_kw * 12.0
        + tariff["delivery_usd_per_year"]
        + tariff["transmission_usd_per_year"]
    )


def infra_environmental_year(
    overhead_kwh: float, grid_kg_per_kwh: float, carbon_price: float
) -> float:
    return overhead_kwh * grid_kg_per_kwh * carbon_price


@dataclass(frozen=True)
class InfraCostBreakdown:
    infra_type: str
    num_stations: int
    start_year: int
    construction_years: int
    horizon_years: int
    discount_rate: float
    per_year: dict[str, tuple[float, ...]]
    capex: CapexBreakdown
    dispensed_units_per_year: float
    totals: dict[str, float] = field(default_factory=dict)

    @property
    def total(self) -> float:
        return sum(self.totals.values())

    @property
    def levelized_per_unit(self) -> float:
        if self.dispensed_units_per_year <= 0:
            return 0.0
        ops_years = range(self.construction_years, self.construction_years + self.horizon_years)
        disc_units = sum(
            self.dispensed_units_per_year / (1.0 + self.discount_rate) ** t for t in ops_years
        )
        return self.total / disc_units


def construction_period(dataset: Dataset, config: InfraConfig) -> int:
    t = dataset.infra_type(config.infra_type)
    if config.num_stations == 1:
        return int(t["construction_years_single"])
    return int(t["construction_years_multi"])


def infra_peak_kw(dataset: Dataset, config: InfraConfig) -> float:
    """Billing peak: charger sites scale with rated power and coincidence;
    fuel stations use their per-station process-load peak."""
    t = dataset.infra_type(config.infra_type)
    rated = t["rated_power_kw"]
    if rated > 0:
        coincidence = dataset.raw["infrastructure"]["utility_tariff"]["coincidence_factor"]
        return config.num_stations * rated * coincidence
    return config.num_stations * t["station_peak_kw_per_station"]


def infra_tco(
    dataset: Dataset,
    config: InfraConfig,
    dispensed_per_year: dict[str, float] | None = None,
    start_year: int | None = None,
    learning_multiplier: float = 1.0,
    discount_rate: float | None = None,
) -> InfraCostBreakdown:
    """Discounted six-component breakdown over construction plus operations.

    ``dispensed_per_year`` maps energy carriers (diesel_gal, h2_kg, ng_kg,
    electricity_kwh) to annual quantities delivered into vehicles; only the
    station-side overhead share of that energy is billed here.
    """
    raw = dataset.raw
    t = dataset.infra_type(config.infra_type)
    year0 = start_year if start_year is not None else dataset.base_year
    horizon = config.horizon_years
    if horizon > int(t["system_life_years"]):
        raise InvalidInputError(
            f"horizon {horizon} exceeds system life {t['system_life_years']}"
        )
    d = discount_rate if discount_rate is not None else dataset.financial.discount_rate
    construction = construction_period(dataset, config)
    n_years = construction + horizon
    flows = {c: [0.0] * n_years for c in INFRA_COST_COMPONENTS}

    capex = infra_capex(dataset, config, year0, learning_multiplier)
    for c_year in range(construction):
        flows["acquisition"][c_year] = capex.total / construction

    om = t["om"]
    tariff = raw["infrastructure"]["utility_tariff"]
    densities = raw["energy"]["energy_density_kwh_per_unit"]
    dispensed = dispensed_per_year or {}
    dispensed_kwh = sum(densities[k] * v for k, v in dispensed.items())
    efficiency = t["transfer_efficiency_frac"]
    overhead_kwh = (1.0 / efficiency - 1.0) * dispensed_kwh
    aux_kwh = t["aux_kwh_per_station_year"] * config.num_stations
    peak_kw = infra_peak_kw(dataset, config)
    grid_kg = raw["energy"]["grid_carbon_kg_per_kwh"]
    uplift = raw["replacement_labor_uplift_frac"]
    key_life_default = int(t["key_equipment_life_years"])

    maint_base = om["maintenance_usd_per_station_year"] * config.num_stations
    insurance = om["insurance_frac_of_capex_per_year"] * capex.total
    tax = om["property_tax_frac_of_capex_per_year"] * capex.total
    warranty = om["warranty_usd_per_station_year"] * config.num_stations
    opex = infra_opex_year(
        insurance, warranty, tax, om["labor_usd_per_year"], om["downtime_usd_per_year"]
    )

    for age in range(1, horizon + 1):
        idx = construction + age - 1
        year = year0 + idx
        replacements: list[tuple[float, float]] = []
        for item in t["equipment"]:
            life = int(item.get("life_years", key_life_default))
            if life < horizon and age % life == 0 and age < horizon:
                qty = _equipment_quantity(item, config.num_stations)
                rate = min(item["learning_rate_frac_per_year"] * learning_multiplier, 0.999999)
                unit = learned_cost(item["unit_cost_usd"], rate, year, dataset.base_year)
                replacements.append((qty * unit, uplift))
        flows["maintenance"][idx] = infra_maintenance_year(
            maint_base, om["age_escalation_frac_per_year"], age, tuple(replacements)
        )
        flows["operation"][idx] = opex
        flows["energy"][idx] = utility_bill_year(tariff, overhead_kwh + aux_kwh, peak_kw)
        flows["environmental"][idx] = infra_environmental_year(
            overhead_kwh + aux_kwh, grid_kg, dataset.energy_price("carbon_per_kg_co2", year)
        )

    # End-of-life residual: straight-line remaining value of the newest
    # installation of each finite-life item.
    residual = 0.0
    final_year = year0 + n_years - 1
    for item in t["equipment"]:
        life = int(item.get("life_years", key_life_default))
        if life <= 0:
            continue
        last_install_age = life * ((horizon - 1) // life)
        age_at_end = horizon - last_install_age
        remaining = max(1.0 - age_at_end / life, 0.0)
        if remaining > 0:
            qty = _equipment_quantity(item, config.num_stations)
            rate = min(item["learning_rate_frac_per_year"] * learning_multiplier, 0.999999)
            install_year = year0 + construction + last_install_age
            unit = learned_cost(item["unit_cost_usd"], rate, min(install_year, final_year), dataset.base_year)
            residual += remaining * qty * unit
    flows["end_of_life"][n_years - 1] = -residual

    totals = {c: discount_sum(flows[c], d, first_index=0) for c in INFRA_COST_COMPONENTS}
    primary_units = 0.0
    if dispensed:
        primary_units = max(dispensed.values())
    return InfraCostBreakdown(
        infra_type=config.infra_type,
        num_stations=config.num_stations,
        start_year=year0,
        construction_years=construction,
        horizon_years=horizon,
        discount_rate=d,
        per_year={c: tuple(v) for c, v in flows.items()},
        capex=capex,
        dispensed_units_per_year=primary_units,
        totals=totals,
    )
