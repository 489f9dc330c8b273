"""Total-cost-of-ownership engine for freight fleet decarbonization."""

from .dataset import Dataset, load_dataset
from .infrastructure import InfraConfig, infra_capex, infra_tco
from .scheduling import FleetInstance, Schedule, Vehicle, min_stations, utilization
from .sensitivity import run_sensitivity, tornado_table
from .system import breakeven_year, project, system_tco
from .vehicle import CostBreakdown, VehicleSpec, spec_for, vehicle_price, vehicle_tco

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "load_dataset",
    "InfraConfig",
    "infra_capex",
    "infra_tco",
    "FleetInstance",
    "Schedule",
    "Vehicle",
    "min_stations",
    "utilization",
    "run_sensitivity",
    "tornado_table",
    "breakeven_year",
    "project",
    "system_tco",
    "CostBreakdown",
    "VehicleSpec",
    "spec_for",
    "vehicle_price",
    "vehicle_tco",
]
