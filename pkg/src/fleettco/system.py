"""System-of-systems TCO: vehicle cost plus allocated infrastructure cost.

A scenario fixes one vehicle variant for the whole fleet, sizes the paired
refueling/charging site with the depot scheduler, amortizes the site's
30-year discounted cost over 30 years of discounted fleet miles (the fleet
is assumed replaced every vehicle lifetime), and adds the resulting $/mile
to the vehicle's levelized TCO.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dataset import Dataset
from .errors import InvalidInputError
from .fleet import calibration_fleet_params, generate_fleet
from .infrastructure import InfraConfig, InfraCostBreakdown, infra_tco
from .scheduling import FleetInstance, Schedule, min_stations, utilization
from .vehicle import CostBreakdown, VehicleSpec, spec_for, vehicle_tco

ADVANCEMENT_LEVELS = ("low", "moderate", "high")

_CHARGING_TYPES = ("dcfc", "mcs")


def variant_names(dataset: Dataset) -> list[str]:
    return list(dataset.raw["system"]["variants"].keys())


def variant_spec(dataset: Dataset, variant: str) -> VehicleSpec:
    system = dataset.raw["system"]
    cfg = system["variants"].get(variant)
    if cfg is None:
        raise InvalidInputError(f"unknown variant: {variant}")
    return spec_for(
        dataset,
        system["fleet_class"],
        cfg["powertrain"],
        battery_kwh=cfg.get("battery_kwh"),
        fuel_cell_kw=cfg.get("fuel_cell_kw"),
    )


@dataclass(frozen=True)
class StationPlan:
    infra_type: str
    station_kind: str  # "fuel" or "charge"
    instance: FleetInstance
    schedule: Schedule

    @property
    def station_count(self) -> int:
        return self.schedule.station_count

    def utilization(self) -> float:
        return utilization(self.schedule, self.instance.max_operational_h)


_plan_cache: dict[tuple, StationPlan] = {}


def station_plans(
    dataset: Dataset, variant: str, service_scale: float = 1.0, count_scale: float = 1.0
) -> list[StationPlan]:
    """Solve the depot station-minimization problem per paired infra type."""
    pairing = dataset.raw["system"]["infra_pairing"].get(variant)
    if pairing is None:
        raise InvalidInputError(f"no infrastructure pairing for variant {variant}")
    plans = []
    for infra_type in pairing:
        kind = "charge" if infra_type in _CHARGING_TYPES else "fuel"
        key = (dataset.dataset_hash(), variant, infra_type, service_scale, count_scale)
        plan = _plan_cache.get(key)
        if plan is None:
            params = calibration_fleet_params(dataset, variant, kind, service_scale, count_scale)
            instance = generate_fleet(params)
            schedule = min_stations(instance)
            plan = StationPlan(infra_type, kind, instance, schedule)
            _plan_cache[key] = plan
        plans.append(plan)
    return plans


@dataclass(frozen=True)
class SystemTcoResult:
    variant: str
    year: int
    advancement: str
    vehicle: CostBreakdown
    plans: tuple[StationPlan, ...]
    infra: tuple[InfraCostBreakdown, ...]
    fleet_size: int
    infra_adder_per_mile: float
    levelized_no_infra: float

    @property
    def levelized_with_infra(self) -> float:
        return self.levelized_no_infra + self.infra_adder_per_mile

    @property
    def station_counts(self) -> dict[str, int]:
        return {p.infra_type: p.station_count for p in self.plans}


def _discounted_fleet_vmt(
    fleet_vmt_per_year: float, discount_rate: float, construction_years: int, horizon: int
) -> float:
    return sum(
        fleet_vmt_per_year / (1.0 + discount_rate) ** t
        for t in range(construction_years, construction_years + horizon)
    )


def system_tco(
    dataset: Dataset,
    variant: str,
    year: int | None = None,
    advancement: str = "moderate",
    fleet_size: int | None = None,
) -> SystemTcoResult:
    """Vehicle TCO plus the per-mile infrastructure adder for one scenario.

    ``fleet_size`` rescales the depot fleet (shift-group counts round to
    integers, so the effective size is the generated vehicle count).
    """
    system = dataset.raw["system"]
    year = year if year is not None else dataset.base_year
    multiplier = dataset.advancement_multiplier(advancement)
    spec = variant_spec(dataset, variant)
    vehicle = vehicle_tco(dataset, spec, start_year=year, learning_multiplier=multiplier)

    default_size = int(system["fleet_size"])
    count_scale = 1.0
    if fleet_size is not None:
        if fleet_size < 1:
            raise InvalidInputError("fleet_size must be >= 1")
        count_scale = fleet_size / default_size
    fleet_class = system["fleet_class"]
    vmt = dataset.raw["operations"]["classes"][fleet_class]["annual_vmt_miles"]
    horizon = int(system["infra_horizon_years"])
    d = dataset.financial.discount_rate
    intensity = dataset.intensity(fleet_class, spec.powertrain)

    plans = tuple(station_plans(dataset, variant, count_scale=count_scale))
    effective_size = len(plans[0].instance.vehicles) if plans else default_size
    fleet_vmt = effective_size * vmt
    infra_results = []
    adder = 0.0
    for plan in plans:
        if plan.station_kind == "charge":
            dispensed = {"electricity_kwh": intensity.get("electricity_kwh", 0.0) * fleet_vmt}
        else:
            dispensed = {
                carrier: rate * fleet_vmt
                for carrier, rate in intensity.items()
                if carrier != "electricity_kwh"
            }
        config = InfraConfig(plan.infra_type, plan.station_count, horizon_years=horizon)
        result = infra_tco(
            dataset,
            config,
            dispensed_per_year=dispensed,
            start_year=year,
            learning_multiplier=multiplier,
        )
        disc_vmt = _discounted_fleet_vmt(fleet_vmt, d, result.construction_years, horizon)
        adder += result.total / disc_vmt
        infra_results.append(result)

    return SystemTcoResult(
        variant=variant,
        year=year,
        advancement=advancement,
        vehicle=vehicle,
        plans=plans,
        infra=tuple(infra_results),
        fleet_size=effective_size,
        infra_adder_per_mile=adder,
        levelized_no_infra=vehicle.levelized_total,
    )


def breakeven_year(
    alternative: dict[int, float], baseline: dict[int, float], years: list[int]
) -> int | None:
    """First year the alternative's levelized TCO is at or below baseline.

    Ties count as parity. Both series must cover every requested year.
    """
    if not years:
        raise InvalidInputError("year range is empty")
    missing = [y for y in years if y not in alternative or y not in baseline]
    if missing:
        raise InvalidInputError(f"series do not cover years: {missing}")
    for y in sorted(years):
        if alternative[y] <= baseline[y]:
            return y
    return None


@dataclass(frozen=True)
class ProjectionRow:
    variant: str
    year: int
    levelized_no_infra: float
    levelized_with_infra: float
    no_infra_band: tuple[float, float]
    with_infra_band: tuple[float, float]
    at_or_below_baseline: bool


def project(
    dataset: Dataset,
    variants: list[str] | None = None,
    years: list[int] | None = None,
    levels: tuple[str, ...] = ADVANCEMENT_LEVELS,
) -> list[ProjectionRow]:
    """Moderate-advancement series with a low/high band per variant-year.

    Each row also flags whether the variant's with-infrastructure TCO is at
    or below the baseline variant's in that year (parity indicator).
    """
    variants = variants or variant_names(dataset)
    years = sorted(years or [2025, 2030, 2035, 2040])
    baseline_variant = dataset.raw["system"]["baseline_variant"]
    baseline = {
        year: system_tco(dataset, baseline_variant, year).levelized_with_infra for year in years
    }
    rows = []
    for variant in variants:
        for year in years:
            no_infra = {}
            with_infra = {}
            for level in levels:
                r = system_tco(dataset, variant, year, advancement=level)
                no_infra[level] = r.levelized_no_infra
                with_infra[level] = r.levelized_with_infra
            rows.append(
                ProjectionRow(
                    variant=variant,
                    year=year,
                    levelized_no_infra=no_infra["moderate"],
                    levelized_with_infra=with_infra["moderate"],
                    no_infra_band=(min(no_infra.values()), max(no_infra.values())),
                    with_infra_band=(min(with_infra.values()), max(with_infra.values())),
                    at_or_below_baseline=with_infra["moderate"] <= baseline[year],
                )
            )
    return rows
