"""Vehicle costing: component pricing, six cost components, and per-vehicle TCO.

Component prices follow baseline-cost x margin x multiplier, with sized
parts (battery, fuel cell, tanks, electric drive) encoded as a per-unit
baseline whose margin factor carries both the profit margin and the
installed quantity. Learning curves apply per component; incentives are
subtracted from the summed price with a floor at zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .dataset import Dataset
from .errors import DatasetIncompleteError, InvalidInputError
from .finance import FinancialParams, discount_sum, discounted_vmt, learned_cost, loan_payments

COST_COMPONENTS = ("acquisition", "operation", "maintenance", "energy", "environmental", "end_of_life")


@dataclass(frozen=True)
class VehicleSpec:
    vehicle_class: str
    powertrain: str
    battery_kwh: float
    fuel_tank: float
    fuel_tank_unit: str  # "gal", "kg", or "none"
    fuel_cell_kw: float
    electric_drive_kw: float

    def __post_init__(self):
        for name in ("battery_kwh", "fuel_tank", "fuel_cell_kw", "electric_drive_kw"):
            if getattr(self, name) < 0:
                raise InvalidInputError(f"{name} must be >= 0")
        if self.powertrain == "BEV" and self.fuel_tank != 0:
            raise InvalidInputError("BEV must have fuel_tank = 0")
        if self.powertrain in ("D-ICE", "H2-ICE", "NG-ICE") and (
            self.battery_kwh != 0 or self.fuel_cell_kw != 0
        ):
            raise InvalidInputError(f"{self.powertrain} cannot carry a battery or fuel cell")


def spec_for(
    dataset: Dataset,
    vehicle_class: str,
    powertrain: str,
    battery_kwh: float | None = None,
    fuel_cell_kw: float | None = None,
) -> VehicleSpec:
    """Spec from the dataset table, with optional size overrides for variants."""
    fields = dataset.vehicle_spec_fields(vehicle_class, powertrain)
    edrive = dataset.raw["electric_drive_kw"].get(vehicle_class, {}).get(powertrain, 0.0)
    return VehicleSpec(
        vehicle_class=vehicle_class,
        powertrain=powertrain,
        battery_kwh=battery_kwh if battery_kwh is not None else fields["battery_kwh"],
        fuel_tank=fields["fuel_tank"],
        fuel_tank_unit=fields["fuel_tank_unit"],
        fuel_cell_kw=fuel_cell_kw if fuel_cell_kw is not None else fields["fuel_cell_kw"],
        electric_drive_kw=edrive,
    )


@dataclass(frozen=True)
class BomEntry:
    component: str
    baseline_cost: float  # reference manufacturing cost (per unit for sized parts)
    margin: float  # margin x class scale x installed quantity, all > 0
    multiplier: float  # class/powertrain assembly multiplier
    learning_rate: float


def component_price(entry: BomEntry) -> float:
    """baseline x margin x multiplier for one component."""
    if entry.margin <= 0 or entry.multiplier <= 0:
        raise InvalidInputError(f"{entry.component}: margin and multiplier must be > 0")
    return entry.baseline_cost * entry.margin * entry.multiplier

_SHARED_CONVENTIONAL = (
    "glider",
    "chassis",
    "cooling_system",
    "hvac",
    "power_steering",
    "air_compressor",
    "twelve_volt",
)
_ENGINE_POWERTRAINS = ("D-ICE", "H2-ICE", "NG-ICE")
_NZEV_POWERTRAINS = ("NZEV-H2", "NZEV-NG", "NZEV-D")


def build_bom(dataset: Dataset, spec: VehicleSpec) -> list[BomEntry]:
    """Expand the dataset's compact parameters into one entry per component.

    The class/powertrain assembly multiplier is kept at 1.0: sized parts
    already carry their installed quantity, and class scale rides on the
    margin factor of the conventional parts.
    """
    raw = dataset.raw
    base = raw["base_component_costs_usd"]
    margins = raw["component_margins"]
    rates = raw["learning_rates_frac_per_year"]
    scale = raw["class_scale"].get(spec.vehicle_class)
    if scale is None:
        raise DatasetIncompleteError(f"no class scale for {spec.vehicle_class}")
    pt = spec.powertrain
    entries: list[BomEntry] = []

    def add(component, baseline, margin, rate):
        entries.append(
            BomEntry(
                component=component,
                baseline_cost=baseline,
                margin=margin,
                multiplier=1.0,
                learning_rate=rate,
            )
        )

    for name in _SHARED_CONVENTIONAL:
        add(name, base[name], margins["conventional"] * scale, rates["conventional"])

    if pt in _ENGINE_POWERTRAINS:
        premium = raw["engine_premium"].get(pt, 1.0)
        add("engine", base["engine"], margins["conventional"] * scale * premium, rates["conventional"])
        add("transmission_clutch", base["transmission_clutch"], margins["conventional"] * scale, rates["conventional"])

    at_cost = raw["aftertreatment_usd"].get(pt, 0.0)
    if at_cost > 0:
        relative = at_cost / raw["aftertreatment_usd"]["D-ICE"]
        add("after_treatment", base["after_treatment"], margins["conventional"] * scale * relative, rates["conventional"])

    electric = pt in ("BEV", "FCEV") or pt in _NZEV_POWERTRAINS
    if electric:
        unit = raw["unit_costs_usd"]
        pe = raw["power_electronics_usd"]
        add("electric_drive", unit["electric_drive_per_kw"], margins["electric_drive"] * spec.electric_drive_kw, rates["electric_drive"])
        add("hv_harness", pe["hv_harness"], margins["power_electronics"], rates["power_electronics"])
        add("hv_junction_box", pe["hv_junction_box"], margins["power_electronics"], rates["power_electronics"])
        if pt != "FCEV":
            add("onboard_charger", pe["onboard_charger"], margins["power_electronics"], rates["power_electronics"])
        if spec.battery_kwh > 0:
            add("battery", unit["battery_per_kwh"], margins["battery"] * spec.battery_kwh, rates["battery"])

    if pt == "FCEV" and spec.fuel_cell_kw > 0:
        add("fuel_cell", raw["unit_costs_usd"]["fuel_cell_per_kw"], margins["fuel_cell"] * spec.fuel_cell_kw, rates["fuel_cell"])

    if pt in _NZEV_POWERTRAINS:
        add("hybrid_genset", raw["hybrid_genset_usd"], margins["hybrid_genset"] * scale, rates["hybrid_genset"])

    if spec.fuel_tank > 0:
        unit = raw["unit_costs_usd"]
        if spec.fuel_tank_unit == "gal":
            add("fuel_tank", unit["diesel_tank_per_gal"], margins["diesel_tank"] * spec.fuel_tank, rates["diesel_tank"])
        elif pt == "H2-ICE":
            # Lower-pressure storage than the fuel-cell tanks.
            add("fuel_tank", unit["h2_ice_tank_per_kg"], margins["h2_tank"] * spec.fuel_tank, rates["h2_tank"])
        elif pt in ("FCEV", "NZEV-H2"):
            add("fuel_tank", unit["h2_tank_per_kg"], margins["h2_tank"] * spec.fuel_tank, rates["h2_tank"])
        else:  # natural gas
            add("fuel_tank", unit["ng_tank_per_kg"], margins["ng_tank"] * spec.fuel_tank, rates["ng_tank"])
    return entries


def vehicle_gross_price(
    dataset: Dataset, spec: VehicleSpec, year: int, learning_multiplier: float = 1.0
) -> float:
    """Sum of learned component prices, before incentives."""
    base_year = dataset.base_year
    total = 0.0
    for entry in build_bom(dataset, spec):
        rate = min(entry.learning_rate * learning_multiplier, 0.999999)
        total += learned_cost(component_price(entry), rate, year, base_year)
    return total


def vehicle_price(
    dataset: Dataset, spec: VehicleSpec, year: int, learning_multiplier: float = 1.0
) -> float:
    """Purchase price net of incentives, floored at zero."""
    gross = vehicle_gross_price(dataset, spec, year, learning_multiplier)
    incentive = dataset.incentive(year, spec.vehicle_class, spec.powertrain)
    return max(gross - incentive, 0.0)


def vehicle_capex(price: float, params: FinancialParams) -> list[float]:
    """Year-indexed acquisition outflows (index 0 = down payment)."""
    return loan_payments(price, params).payment_flows(params.analysis_period_years)


def maintenance_year(
    base_rate: float,
    escalation_per_100k: float,
    odometer_miles: float,
    vmt: float,
    replacement_costs: tuple[tuple[float, float], ...] = (),
) -> float:
    """Mileage-based maintenance plus any component replacements this year.

    ``replacement_costs`` holds (part_price, labor_uplift) pairs for parts
    whose accumulated usage reached design life in this year.
    """
    if odometer_miles < 0:
        raise InvalidInputError("odometer_miles must be >= 0")
    rate = base_rate * (1.0 + escalation_per_100k * odometer_miles / 100000.0)
    total = rate * vmt
    for price, uplift in replacement_costs:
        total += price * (1.0 + uplift)
    return total


def opex_year(
    driver_wage: float,
    driving_hours: float,
    insurance: float,
    registration_tax: float,
    payload_penalty_lb: float,
    payload_loss_rate: float,
    vmt: float,
    dwell_hours: float,
    dwell_labor_ratio: float,
) -> float:
    """Driver + insurance + tax + payload-capacity loss + dwell labor."""
    driver = driver_wage * driving_hours
    payload = payload_penalty_lb * payload_loss_rate * vmt
    dwell = dwell_hours * driver_wage * dwell_labor_ratio
    return driver + insurance + registration_tax + payload + dwell


def energy_cost_year(quantities: dict[str, float], prices: dict[str, float]) -> float:
    """Sum of carrier price x quantity; dual-carrier powertrains sum both."""
    total = 0.0
    for carrier, qty in quantities.items():
        if qty == 0:
            continue
        if carrier not in prices:
            raise DatasetIncompleteError(f"no price for energy carrier: {carrier}")
        total += prices[carrier] * qty
    return total


def environmental_cost_year(
    quantities: dict[str, float], carbon_factors: dict[str, float], carbon_price: float
) -> float:
    """Tank-to-wheel CO2 mass x carbon price, summed over carriers."""
    total = 0.0
    for carrier, qty in quantities.items():
        total += carbon_factors.get(carrier, 0.0) * qty * carbon_price
    return total


def residual_value(
    price: float,
    annual_retention: float,
    per_1k_mile_retention: float,
    age_years: float,
    mileage_thousands: float,
) -> float:
    """Exponential-decay resale value in age and mileage.

    Equivalent to C * exp(A*a + M*m) with exp(A) and exp(M) the annual and
    per-1000-mile retention fractions.
    """
    if age_years < 0 or mileage_thousands < 0:
        raise InvalidInputError("age and mileage must be >= 0")
    return price * annual_retention**age_years * per_1k_mile_retention**mileage_thousands


@dataclass(frozen=True)
class CostBreakdown:
    """Per-year flows and discounted/levelized values for the six components."""

    vehicle_class: str
    powertrain: str
    start_year: int
    analysis_years: int
    discount_rate: float
    per_year: dict[str, tuple[float, ...]]  # component -> flows indexed 0..N
    vmt: tuple[float, ...]  # years 1..N
    gross_price: float
    net_price: float
    residual: float
    totals: dict[str, float] = field(default_factory=dict)
    levelized: dict[str, float] = field(default_factory=dict)

    @property
    def total(self) -> float:
        return sum(self.totals.values())

    @property
    def levelized_total(self) -> float:
        return sum(self.levelized.values())


def _service_hours(dataset: Dataset, quantities: dict[str, float]) -> float:
    """Hours per year spent refueling/charging the given annual quantities."""
    rates = dataset.raw["energy"]["dispense_rates"]
    per_hour = {
        "diesel_gal": rates["diesel_gal_per_min"] * 60.0,
        "h2_kg": rates["h2_kg_per_min"] * 60.0,
        "ng_kg": rates["ng_gal_per_hour"] * rates["ng_kg_per_gal"],
        "electricity_kwh": rates["dcfc_kw"],
    }
    return sum(qty / per_hour[carrier] for carrier, qty in quantities.items() if qty > 0)


def vehicle_tco(
    dataset: Dataset,
    spec: VehicleSpec,
    start_year: int | None = None,
    learning_multiplier: float = 1.0,
    financial: FinancialParams | None = None,
) -> CostBreakdown:
    """Discounted six-component cost breakdown for one vehicle."""
    raw = dataset.raw
    fp = financial or dataset.financial
    year0 = start_year if start_year is not None else dataset.base_year
    n = fp.analysis_period_years
    ops = raw["operations"]
    cls = ops["classes"][spec.vehicle_class]
    vmt = float(cls["annual_vmt_miles"])
    wage = ops["driver_wage_usd_per_hour"]
    intensity = dataset.intensity(spec.vehicle_class, spec.powertrain)

    gross = vehicle_gross_price(dataset, spec, year0, learning_multiplier)
    net = max(gross - dataset.incentive(year0, spec.vehicle_class, spec.powertrain), 0.0)
    acquisition = vehicle_capex(net, fp)

    flows = {c: [0.0] * (n + 1) for c in COST_COMPONENTS}
    flows["acquisition"] = list(acquisition)

    maint_base = ops["maintenance_usd_per_mile"][spec.vehicle_class][spec.powertrain]
    maint_slope = ops["maintenance_odometer_escalation_per_100k_miles"]
    insurance_rate = ops["insurance_rate_frac_of_price_per_year"]
    registration = cls["registration_usd_per_year"]
    payload_lb = ops["payload_penalty_lb"][spec.vehicle_class][spec.powertrain]
    payload_rate = ops["payload_loss_usd_per_lb_mile"]
    depot_ratio = ops["dwell"]["depot_refuel_ratio"][spec.powertrain]
    labor_ratio = ops["dwell"]["dwell_labor_ratio"][spec.powertrain]
    carbon_factors = raw["energy"]["vehicle_carbon_kg_per_unit"]

    battery_threshold = raw["battery_replacement"]["rated_cycles"] * spec.battery_kwh
    labor_uplift = raw["replacement_labor_uplift_frac"]
    throughput = 0.0

    quantities = {carrier: rate * vmt for carrier, rate in intensity.items()}
    service_hours = _service_hours(dataset, quantities)
    dwell_hours = service_hours * (1.0 - depot_ratio)

    for i in range(1, n + 1):
        year = year0 + i - 1
        odometer = vmt * (i - 1)

        replacements: list[tuple[float, float]] = []
        if battery_threshold > 0:
            throughput += quantities.get("electricity_kwh", 0.0)
            # Carry the overshoot so the long-run replacement count equals
            # floor(total throughput / threshold) exactly.
            while throughput >= battery_threshold:
                unit = raw["unit_costs_usd"]["battery_per_kwh"]
                rate = min(raw["learning_rates_frac_per_year"]["battery"] * learning_multiplier, 0.999999)
                pack = learned_cost(unit, rate, year, dataset.base_year) * spec.battery_kwh
                replacements.append((pack, labor_uplift))
                throughput -= battery_threshold

        flows["maintenance"][i] = maintenance_year(
            maint_base, maint_slope, odometer, vmt, tuple(replacements)
        )
        flows["operation"][i] = opex_year(
            driver_wage=wage,
            driving_hours=vmt / cls["average_speed_mph"],
            insurance=insurance_rate * gross,
            registration_tax=registration,
            payload_penalty_lb=payload_lb,
            payload_loss_rate=payload_rate,
            vmt=vmt,
            dwell_hours=dwell_hours,
            dwell_labor_ratio=labor_ratio,
        )
        prices = {
            "diesel_gal": dataset.energy_price("diesel_per_gal", year),
            "electricity_kwh": dataset.energy_price("electricity_per_kwh", year),
            "h2_kg": dataset.energy_price("h2_per_kg", year),
            "ng_kg": dataset.energy_price("ng_per_kg", year),
        }
        flows["energy"][i] = energy_cost_year(quantities, prices)
        flows["environmental"][i] = environmental_cost_year(
            quantities, carbon_factors, dataset.energy_price("carbon_per_kg_co2", year)
        )

    rv_cfg = raw["residual_value"]
    residual = rv_cfg["value_multiplier"] * residual_value(
        gross,
        rv_cfg["annual_retention_frac"],
        rv_cfg["per_1k_mile_retention_frac"],
        age_years=n,
        mileage_thousands=vmt * n / 1000.0,
    )
    flows["end_of_life"][n] = -residual

    d = fp.discount_rate
    vmt_flows = tuple([vmt] * n)
    disc_vmt = discounted_vmt(vmt_flows, d)
    totals = {c: discount_sum(flows[c], d, first_index=0) for c in COST_COMPONENTS}
    levelized = {c: totals[c] / disc_vmt for c in COST_COMPONENTS}

    return CostBreakdown(
        vehicle_class=spec.vehicle_class,
        powertrain=spec.powertrain,
        start_year=year0,
        analysis_years=n,
        discount_rate=d,
        per_year={c: tuple(v) for c, v in flows.items()},
        vmt=vmt_flows,
        gross_price=gross,
        net_price=net,
        residual=residual,
        totals=totals,
        levelized=levelized,
    )
