"""Dataset loading, validation, canonical serialization, and hashing.

The cost dataset is a JSON document with explicit units in field names
(e.g. ``battery_per_kwh``). Currency values are parsed as exact decimals
so the canonical serialization, and therefore the pinned dataset hash,
never drifts through float round-tripping. Every numeric field must be
covered by a ``sources`` annotation (paper, assumption, or user).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from decimal import Decimal
from importlib import resources
from pathlib import Path
from typing import Any, Iterator, Mapping

from .errors import DatasetError, DatasetIncompleteError
from .finance import FinancialParams

SCHEMA_VERSION = 1

VEHICLE_CLASSES = ("box_truck", "day_cab", "sleeper")
POWERTRAINS = ("D-ICE", "H2-ICE", "NG-ICE", "BEV", "FCEV", "NZEV-H2", "NZEV-NG", "NZEV-D")
INFRA_TYPES = ("diesel", "dcfc", "mcs", "h2", "ng")
ENERGY_CARRIERS = ("diesel_gal", "electricity_kwh", "h2_kg", "ng_kg")
SOURCE_TAGS = ("paper", "assumption", "user")

_PRICE_SERIES = (
    "diesel_per_gal",
    "electricity_per_kwh",
    "h2_per_kg",
    "ng_per_kg",
    "carbon_per_kg_co2",
)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, Decimal)) and not isinstance(value, bool)


def _walk(node: Any, path: str = "") -> Iterator[tuple[str, Any]]:
    if isinstance(node, dict):
        for key, value in node.items():
            sub = f"{path}.{key}" if path else str(key)
            yield from _walk(value, sub)
    elif isinstance(node, list):
        for i, value in enumerate(node):
            yield from _walk(value, f"{path}[{i}]")
    else:
        yield path, node


def _to_float(node: Any) -> Any:
    if isinstance(node, dict):
        return {k: _to_float(v) for k, v in node.items()}
    if isinstance(node, list):
        return [_to_float(v) for v in node]
    if isinstance(node, Decimal):
        return float(node)
    return node


def _canonical(node: Any) -> str:
    """Deterministic JSON text: sorted keys, decimals rendered verbatim."""
    if isinstance(node, dict):
        inner = ",".join(f"{json.dumps(str(k))}:{_canonical(v)}" for k, v in sorted(node.items()))
        return "{" + inner + "}"
    if isinstance(node, list):
        return "[" + ",".join(_canonical(v) for v in node) + "]"
    if isinstance(node, Decimal):
        return str(node)
    return json.dumps(node)


@dataclass(frozen=True)
class Dataset:
    """Validated, immutable dataset snapshot.

    ``raw`` holds plain floats for computation; ``exact`` preserves the
    decimal-parsed tree for canonical serialization and hashing.
    """

    raw: Mapping[str, Any]
    exact: Mapping[str, Any]
    warnings: tuple[str, ...] = field(default_factory=tuple)

    # -- identity ---------------------------------------------------------

    def canonical_text(self) -> str:
        return _canonical(self.exact)

    def dataset_hash(self) -> str:
        return hashlib.sha256(self.canonical_text().encode("utf-8")).hexdigest()

    # -- common accessors --------------------------------------------------

    @property
    def base_year(self) -> int:
        return int(self.raw["meta"]["base_year"])

    @property
    def financial(self) -> FinancialParams:
        f = self.raw["financial"]
        return FinancialParams(
            discount_rate=f["discount_rate_frac"],
            interest_rate=f["interest_rate_frac"],
            loan_term_years=int(f["loan_term_years"]),
            down_payment_ratio=f["down_payment_frac"],
            analysis_period_years=int(f["analysis_period_years"]),
        )

    def advancement_multiplier(self, level: str) -> float:
        try:
            return self.raw["advancement_levels"][level]
        except KeyError:
            raise DatasetIncompleteError(f"unknown advancement level: {level}")

    def energy_price(self, series: str, year: int) -> float:
        """Price for a carrier in a given year; the last year extends flat."""
        try:
            table = self.raw["energy_prices_usd"][series]
        except KeyError:
            raise DatasetIncompleteError(f"missing price series: {series}")
        years = sorted(int(y) for y in table)
        if year < years[0]:
            raise DatasetIncompleteError(f"price series {series} starts at {years[0]}, asked {year}")
        clamped = min(year, years[-1])
        return table[str(clamped)]

    def vehicle_spec_fields(self, vehicle_class: str, powertrain: str) -> dict:
        try:
            return self.raw["vehicle_specs"][vehicle_class][powertrain]
        except KeyError:
            raise DatasetIncompleteError(f"no vehicle spec for ({vehicle_class}, {powertrain})")

    def intensity(self, vehicle_class: str, powertrain: str) -> dict[str, float]:
        try:
            return dict(self.raw["energy"]["intensities_per_mile"][vehicle_class][powertrain])
        except KeyError:
            raise DatasetIncompleteError(f"no energy intensity for ({vehicle_class}, {powertrain})")

    def incentive(self, year: int, vehicle_class: str, powertrain: str) -> float:
        inc = self.raw["incentives"]
        if not (int(inc["first_year"]) <= year <= int(inc["last_year"])):
            return 0.0
        return inc["amounts_usd"].get(powertrain, {}).get(vehicle_class, 0.0)

    def infra_type(self, infra: str) -> dict:
        try:
            return self.raw["infrastructure"]["types"][infra]
        except KeyError:
            raise DatasetIncompleteError(f"unknown infrastructure type: {infra}")

    def with_raw(self, new_raw: Mapping[str, Any]) -> "Dataset":
        """Snapshot with the same provenance but perturbed numeric values.

        Used by the sensitivity runner; the exact tree is rebuilt from the
        floats so hashing stays consistent with what is computed.
        """
        return Dataset(raw=new_raw, exact=_floats_to_exact(new_raw), warnings=self.warnings)


def _floats_to_exact(node: Any) -> Any:
    if isinstance(node, dict):
        return {k: _floats_to_exact(v) for k, v in node.items()}
    if isinstance(node, list):
        return [_floats_to_exact(v) for v in node]
    if isinstance(node, float):
        return Decimal(repr(node))
    return node


# -- validation -------------------------------------------------------------

_TOP_LEVEL_KEYS = {
    "meta",
    "financial",
    "advancement_levels",
    "incentives",
    "unit_costs_usd",
    "unit_cost_ranges_usd",
    "learning_rates_frac_per_year",
    "component_margins",
    "class_scale",
    "base_component_costs_usd",
    "power_electronics_usd",
    "hybrid_genset_usd",
    "engine_premium",
    "aftertreatment_usd",
    "electric_drive_kw",
    "vehicle_specs",
    "operations",
    "energy",
    "energy_prices_usd",
    "battery_replacement",
    "replacement_labor_uplift_frac",
    "residual_value",
    "infrastructure",
    "system",
    "fleet_preset",
    "sources",
}

_REQUIRED_KEYS = _TOP_LEVEL_KEYS - {"unit_cost_ranges_usd"}


def _require(tree: Mapping, dotted: str, problems: list[tuple[str, str]]):
    node: Any = tree
    for part in dotted.split("."):
        if not isinstance(node, Mapping) or part not in node:
            problems.append((dotted, "missing required field"))
            return None
        node = node[part]
    return node


def validate_tree(tree: Mapping[str, Any]) -> tuple[list[tuple[str, str]], list[str]]:
    """Return (problems, warnings) for a decimal-parsed dataset tree."""
    problems: list[tuple[str, str]] = []
    warnings: list[str] = []

    for key in sorted(_REQUIRED_KEYS - set(tree)):
        problems.append((key, "missing required section"))
    for key in sorted(set(tree) - _TOP_LEVEL_KEYS):
        warnings.append(f"unknown top-level field ignored: {key}")
    if problems:
        return problems, warnings

    version = tree["meta"].get("schema_version")
    if version != SCHEMA_VERSION:
        problems.append(("meta.schema_version", f"expected {SCHEMA_VERSION}, found {version}"))

    fin = tree["financial"]
    for name, lo, hi in (
        ("discount_rate_frac", 0, 1),
        ("interest_rate_frac", 0, 1),
        ("down_payment_frac", 0, 1),
    ):
        v = fin.get(name)
        if v is None:
            problems.append((f"financial.{name}", "missing required field"))
        elif not (Decimal(lo) <= v <= Decimal(hi)):
            problems.append((f"financial.{name}", f"out of range [{lo}, {hi}]: {v}"))
    for name in ("loan_term_years", "analysis_period_years"):
        v = fin.get(name)
        if v is None or v < 1:
            problems.append((f"financial.{name}", f"must be >= 1, found {v}"))

    # No negative prices, costs, rates anywhere in the numeric tree except
    # explicitly signed fields (none today).
    for path, value in _walk(tree):
        if _is_number(value) and value < 0:
            problems.append((path, f"negative value not allowed: {value}"))

    for vc in VEHICLE_CLASSES:
        specs = tree["vehicle_specs"].get(vc)
        if specs is None:
            problems.append((f"vehicle_specs.{vc}", "missing vehicle class"))
            continue
        for pt in POWERTRAINS:
            spec = specs.get(pt)
            if spec is None:
                problems.append((f"vehicle_specs.{vc}.{pt}", "missing powertrain"))
                continue
            for fld in ("battery_kwh", "fuel_tank", "fuel_cell_kw"):
                if fld not in spec:
                    problems.append((f"vehicle_specs.{vc}.{pt}.{fld}", "missing required field"))
            if pt == "BEV" and spec.get("fuel_tank", 0) != 0:
                problems.append((f"vehicle_specs.{vc}.{pt}.fuel_tank", "BEV must have no fuel tank"))
            if pt in ("D-ICE", "H2-ICE", "NG-ICE"):
                if spec.get("battery_kwh", 0) != 0 or spec.get("fuel_cell_kw", 0) != 0:
                    problems.append(
                        (f"vehicle_specs.{vc}.{pt}", "engine-only powertrain cannot carry battery or fuel cell")
                    )

    for name, series in tree["energy_prices_usd"].items():
        if name not in _PRICE_SERIES:
            warnings.append(f"unknown price series ignored: energy_prices_usd.{name}")
            continue
        if not series:
            problems.append((f"energy_prices_usd.{name}", "empty series"))
        for year in series:
            try:
                int(year)
            except ValueError:
                problems.append((f"energy_prices_usd.{name}.{year}", "year keys must be integers"))
    for name in _PRICE_SERIES:
        if name not in tree["energy_prices_usd"]:
            problems.append((f"energy_prices_usd.{name}", "missing price series"))

    for rate_path, rate in _walk(tree["learning_rates_frac_per_year"]):
        if not (0 <= rate < 1):
            problems.append((f"learning_rates_frac_per_year.{rate_path}", f"rate out of [0, 1): {rate}"))

    infra = tree["infrastructure"]
    if "utility_tariff" not in infra:
        problems.append(("infrastructure.utility_tariff", "missing required field"))
    for it in INFRA_TYPES:
        t = infra.get("types", {}).get(it)
        if t is None:
            problems.append((f"infrastructure.types.{it}", "missing infrastructure type"))
            continue
        for fld in ("rated_power_kw", "system_life_years", "key_equipment_life_years",
                    "transfer_efficiency_frac", "equipment", "development", "om"):
            if fld not in t:
                problems.append((f"infrastructure.types.{it}.{fld}", "missing required field"))
        eff = t.get("transfer_efficiency_frac")
        if eff is not None and not (0 < eff <= 1):
            problems.append((f"infrastructure.types.{it}.transfer_efficiency_frac", f"must be in (0, 1]: {eff}"))

    # Source annotations: every numeric leaf outside `sources` must match an
    # exact path or a prefix wildcard ("section.*").
    sources = tree.get("sources", {})
    for spath, tag in sources.items():
        if tag not in SOURCE_TAGS:
            problems.append((f"sources.{spath}", f"unknown source tag: {tag}"))
    exact_paths = {p for p in sources if not p.endswith(".*")}
    prefixes = tuple(p[:-2] + "." for p in sources if p.endswith(".*"))
    for path, value in _walk({k: v for k, v in tree.items() if k != "sources"}):
        if not _is_number(value):
            continue
        if path in exact_paths:
            continue
        clean = path.replace("[", ".").replace("]", "")
        if any(clean.startswith(pref) or path.startswith(pref) for pref in prefixes):
            continue
        problems.append((path, "numeric field lacks a source annotation"))

    return problems, warnings


def load_tree(text: str) -> Mapping[str, Any]:
    return json.loads(text, parse_float=Decimal)


def load_dataset(path: str | Path | None = None) -> Dataset:
    """Load and validate a dataset file; None loads the bundled default."""
    if path is None:
        text = resources.files("fleettco.data").joinpath("default.json").read_text("utf-8")
    else:
        p = Path(path)
        if not p.exists():
            raise DatasetError(f"dataset file not found: {p}")
        text = p.read_text("utf-8")
    try:
        exact = load_tree(text)
    except json.JSONDecodeError as e:
        raise DatasetError(f"dataset does not parse as JSON: {e}") from e
    problems, warnings = validate_tree(exact)
    if problems:
        raise DatasetError("dataset validation failed", problems=problems)
    return Dataset(raw=_to_float(exact), exact=exact, warnings=tuple(warnings))


def serialize_dataset(dataset: Dataset) -> str:
    return dataset.canonical_text()


def load_dataset_text(text: str) -> Dataset:
    exact = load_tree(text)
    problems, warnings = validate_tree(exact)
    if problems:
        raise DatasetError("dataset validation failed", problems=problems)
    return Dataset(raw=_to_float(exact), exact=exact, warnings=tuple(warnings))
