"""Synthetic fleet generation for depot scheduling.

Vehicles arrive in shift groups; each group has a staggered arrival
pattern, a base dwell (0 means "parked until the end of the depot day"),
and a fuel-service scale (short-haul shuttles dispense less fuel). A
vehicle whose required service exceeds its base dwell has the dwell
stretched to cover the service plus slack, mirroring a fleet that adapts
parking time to charging needs. Generation is seeded and bit-reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .dataset import Dataset
from .errors import InvalidInputError
from .scheduling import FleetInstance, Vehicle


@dataclass(frozen=True)
class FleetGroup:
    name: str
    count: int
    arrival_start_h: float
    arrival_step_h: float
    dwell_h: float  # 0 -> until end of day
    fuel_scale: float = 1.0


@dataclass(frozen=True)
class FleetGeneratorParams:
    groups: tuple[FleetGroup, ...]
    service_h: float  # base required service per visit
    service_is_fuel: bool  # fuel services scale with each group's fuel_scale
    max_operational_h: float = 24.0
    dwell_slack_h: float = 2.5
    seed: int | None = None
    arrival_jitter_h: float = 0.0
    dwell_jitter_h: float = 0.0

    def __post_init__(self):
        if self.service_h <= 0:
            raise InvalidInputError("service_h must be positive")
        if self.arrival_jitter_h < 0 or self.dwell_jitter_h < 0:
            raise InvalidInputError("jitter widths must be >= 0")
        for g in self.groups:
            if g.count < 0:
                raise InvalidInputError(f"group {g.name}: count must be >= 0")
            if g.fuel_scale <= 0:
                raise InvalidInputError(f"group {g.name}: fuel_scale must be positive")
            if g.dwell_h < 0:
                raise InvalidInputError(f"group {g.name}: dwell_h must be >= 0")


def generate_fleet(params: FleetGeneratorParams) -> FleetInstance:
    """Deterministic fleet instance; identical for identical params."""
    rng = random.Random(params.seed)
    jitter_on = params.seed is not None and (
        params.arrival_jitter_h > 0 or params.dwell_jitter_h > 0
    )
    vehicles: list[Vehicle] = []
    idx = 0
    for g in params.groups:
        for k in range(g.count):
            arrival = g.arrival_start_h + g.arrival_step_h * k
            if jitter_on:
                arrival += rng.uniform(-params.arrival_jitter_h, params.arrival_jitter_h)
            arrival = min(max(arrival, 0.0), 23.99)
            dwell = g.dwell_h if g.dwell_h > 0 else params.max_operational_h - arrival
            if jitter_on and g.dwell_h > 0:
                dwell += rng.uniform(-params.dwell_jitter_h, params.dwell_jitter_h)
            required = params.service_h * (g.fuel_scale if params.service_is_fuel else 1.0)
            if required > dwell:
                dwell = required + params.dwell_slack_h
            dwell = min(dwell, params.max_operational_h - arrival)
            vehicles.append(
                Vehicle(
                    id=f"{g.name}-{k:02d}",
                    arrival_h=round(arrival, 4),
                    dwell_h=round(dwell, 4),
                    required_h=round(required, 4),
                )
            )
            idx += 1
    return FleetInstance(
        vehicles=tuple(vehicles), max_operational_h=params.max_operational_h
    )


def preset_groups(dataset: Dataset, count_scale: float = 1.0) -> tuple[FleetGroup, ...]:
    """Shift groups from the preset, optionally rescaled to another fleet size."""
    preset = dataset.raw["fleet_preset"]
    groups = []
    for g in preset["groups"]:
        count = int(round(g["count"] * count_scale)) if count_scale != 1.0 else int(g["count"])
        groups.append(
            FleetGroup(
                name=g["name"],
                count=count,
                arrival_start_h=g["arrival_start_h"],
                arrival_step_h=g["arrival_step_h"],
                dwell_h=g["dwell_h"],
                fuel_scale=g["fuel_scale"],
            )
        )
    return tuple(groups)


def service_hours_per_visit(dataset: Dataset, variant: str, station_kind: str) -> float:
    """Hours of station time one visit needs, from quantity and fill rate.

    ``station_kind`` is "fuel" or "charge"; NZEV variants have both.
    """
    preset = dataset.raw["fleet_preset"]
    service = preset["service_per_visit"].get(variant)
    if service is None:
        raise InvalidInputError(f"no service profile for variant {variant}")
    rates = dataset.raw["energy"]["dispense_rates"]
    if station_kind == "charge":
        kwh = service.get("charge_kwh", 0.0)
        if kwh <= 0:
            raise InvalidInputError(f"variant {variant} has no charging service")
        return kwh / rates["dcfc_kw"]
    for carrier, per_hour in (
        ("diesel_gal", rates["diesel_gal_per_min"] * 60.0),
        ("h2_kg", rates["h2_kg_per_min"] * 60.0),
        ("ng_kg", rates["ng_gal_per_hour"] * rates["ng_kg_per_gal"]),
    ):
        qty = service.get(carrier, 0.0)
        if qty > 0:
            return qty / per_hour
    raise InvalidInputError(f"variant {variant} has no fuel service")


def calibration_fleet_params(
    dataset: Dataset,
    variant: str,
    station_kind: str,
    service_scale: float = 1.0,
    count_scale: float = 1.0,
) -> FleetGeneratorParams:
    """Preset parameters that reproduce the published depot station counts."""
    preset = dataset.raw["fleet_preset"]
    return FleetGeneratorParams(
        groups=preset_groups(dataset, count_scale),
        service_h=service_hours_per_visit(dataset, variant, station_kind) * service_scale,
        service_is_fuel=station_kind == "fuel",
        max_operational_h=preset["max_operational_h"],
        dwell_slack_h=preset["dwell_slack_h"],
    )
