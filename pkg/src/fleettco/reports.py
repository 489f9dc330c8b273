"""Delimited report writers and the matplotlib figures rendered beside them.

Delimited outputs are comma-separated, UTF-8, LF line endings, header row
first. Per-mile dollars print with 4 decimals and whole-life dollars with
none; structured JSON keeps full precision. PNG metadata is stripped so
repeated runs produce identical bytes.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .infrastructure import InfraCostBreakdown
from .scheduling import SCHEDULE_FIELDS, Schedule, schedule_rows
from .sensitivity import SensitivityResult
from .system import ProjectionRow, SystemTcoResult
from .vehicle import COST_COMPONENTS, CostBreakdown

_PNG_KWARGS = {"dpi": 120, "metadata": {"Software": None}}


def money(x: float) -> str:
    return f"{x:.0f}"


def per_mile(x: float) -> str:
    return f"{x:.4f}"


def write_csv(path: str | Path, header: list[str], rows: list[list[str]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


# -- row builders -------------------------------------------------------------

VEHICLE_TCO_HEADER = ["vehicle_class", "powertrain", "component", "discounted_usd", "usd_per_mile"]


def vehicle_tco_rows(breakdown: CostBreakdown) -> list[list[str]]:
    rows = [
        [
            breakdown.vehicle_class,
            breakdown.powertrain,
            component,
            money(breakdown.totals[component]),
            per_mile(breakdown.levelized[component]),
        ]
        for component in COST_COMPONENTS
    ]
    rows.append(
        [
            breakdown.vehicle_class,
            breakdown.powertrain,
            "total",
            money(breakdown.total),
            per_mile(breakdown.levelized_total),
        ]
    )
    return rows


INFRA_TCO_HEADER = ["infra_type", "num_stations", "component", "discounted_usd"]


def infra_tco_rows(breakdown: InfraCostBreakdown) -> list[list[str]]:
    rows = [
        [breakdown.infra_type, str(breakdown.num_stations), c, money(breakdown.totals[c])]
        for c in breakdown.totals
    ]
    rows.append(
        [breakdown.infra_type, str(breakdown.num_stations), "total", money(breakdown.total)]
    )
    return rows


CAPEX_HEADER = ["infra_type", "item", "kind", "cost_usd", "share"]


def capex_rows(breakdown: InfraCostBreakdown) -> list[list[str]]:
    return [
        [breakdown.infra_type, i.item_id, i.kind, money(i.cost), f"{i.share:.4f}"]
        for i in breakdown.capex.items
    ]


SYSTEM_TCO_HEADER = [
    "variant",
    "year",
    "no_infra_usd_per_mile",
    "infra_adder_usd_per_mile",
    "with_infra_usd_per_mile",
    "stations",
]


def system_tco_rows(result: SystemTcoResult) -> list[list[str]]:
    stations = ";".join(f"{p.infra_type}={p.station_count}" for p in result.plans)
    return [
        [
            result.variant,
            str(result.year),
            per_mile(result.levelized_no_infra),
            per_mile(result.infra_adder_per_mile),
            per_mile(result.levelized_with_infra),
            stations,
        ]
    ]


PROJECTION_HEADER = [
    "variant",
    "year",
    "tco_no_infra",
    "tco_with_infra",
    "no_infra_low",
    "no_infra_high",
    "with_infra_low",
    "with_infra_high",
    "at_or_below_baseline",
]


def projection_rows(rows: list[ProjectionRow]) -> list[list[str]]:
    return [
        [
            r.variant,
            str(r.year),
            per_mile(r.levelized_no_infra),
            per_mile(r.levelized_with_infra),
            per_mile(r.no_infra_band[0]),
            per_mile(r.no_infra_band[1]),
            per_mile(r.with_infra_band[0]),
            per_mile(r.with_infra_band[1]),
            "1" if r.at_or_below_baseline else "0",
        ]
        for r in rows
    ]


SENSITIVITY_HEADER = ["variant", "factor", "category", "baseline", "perturbed", "pct_change"]


def sensitivity_rows(results: list[SensitivityResult]) -> list[list[str]]:
    return [
        [
            r.variant,
            r.factor,
            r.category,
            per_mile(r.baseline_per_mile),
            per_mile(r.perturbed_per_mile),
            f"{r.relative_change * 100:.4f}",
        ]
        for r in results
    ]


BREAKEVEN_HEADER = ["year", "alternative", "baseline", "at_or_below"]


def breakeven_rows(years, alt_series, base_series) -> list[list[str]]:
    return [
        [
            str(y),
            per_mile(alt_series[y]),
            per_mile(base_series[y]),
            "1" if alt_series[y] <= base_series[y] else "0",
        ]
        for y in years
    ]


# -- figures ------------------------------------------------------------------


def save_cost_breakdown_figure(breakdowns: list[CostBreakdown], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    labels = [b.powertrain for b in breakdowns]
    bottom = [0.0] * len(breakdowns)
    for component in COST_COMPONENTS:
        values = [b.levelized[component] for b in breakdowns]
        ax.bar(labels, values, bottom=bottom, label=component)
        bottom = [a + v for a, v in zip(bottom, values)]
    ax.set_ylabel("levelized cost ($/mi)")
    ax.set_title(f"{breakdowns[0].vehicle_class} levelized TCO, {breakdowns[0].start_year}")
    ax.legend(fontsize=7)
    plt.setp(ax.get_xticklabels(), rotation=30, ha="right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_PNG_KWARGS)
    plt.close(fig)
    return path


def save_capex_pie_figure(breakdown: InfraCostBreakdown, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    items = [i for i in breakdown.capex.items if i.cost > 0]
    ax.pie(
        [i.cost for i in items],
        labels=[i.item_id for i in items],
        autopct="%1.0f%%",
        textprops={"fontsize": 7},
    )
    ax.set_title(
        f"{breakdown.infra_type} CapEx breakdown ({breakdown.num_stations} stations)", fontsize=10
    )
    fig.tight_layout()
    fig.savefig(path, **_PNG_KWARGS)
    plt.close(fig)
    return path


def save_projection_figure(
    rows: list[ProjectionRow], path: str | Path, baseline_variant: str = "D-ICE"
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    by_variant: dict[str, list[ProjectionRow]] = {}
    for r in rows:
        by_variant.setdefault(r.variant, []).append(r)
    for variant, series in sorted(by_variant.items()):
        series.sort(key=lambda r: r.year)
        years = [r.year for r in series]
        values = [r.levelized_with_infra for r in series]
        style = "--" if variant == baseline_variant else "-"
        ax.plot(years, values, style, marker="o", markersize=3, label=variant)
        ax.fill_between(
            years,
            [r.with_infra_band[0] for r in series],
            [r.with_infra_band[1] for r in series],
            alpha=0.12,
        )
    ax.set_xlabel("purchase year")
    ax.set_ylabel("levelized TCO with infrastructure ($/mi)")
    ax.legend(fontsize=7, ncols=2)
    fig.tight_layout()
    fig.savefig(path, **_PNG_KWARGS)
    plt.close(fig)
    return path


def save_tornado_figure(results: list[SensitivityResult], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ordered = sorted(results, key=lambda r: abs(r.relative_change))
    fig, ax = plt.subplots(figsize=(7, 0.3 * len(ordered) + 1.5))
    ax.barh(
        [r.factor for r in ordered],
        [r.relative_change * 100 for r in ordered],
        color=["#b2182b" if r.relative_change >= 0 else "#2166ac" for r in ordered],
    )
    ax.axvline(0, color="black", linewidth=0.8)
    ax.set_xlabel("system TCO change (%)")
    ax.set_title(f"{results[0].variant}: one-at-a-time factor sweep", fontsize=10)
    ax.tick_params(labelsize=7)
    fig.tight_layout()
    fig.savefig(path, **_PNG_KWARGS)
    plt.close(fig)
    return path


def save_schedule_figure(schedule: Schedule, path: str | Path, title: str = "") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(8, 0.4 * max(schedule.station_count, 1) + 1.5))
    for a in schedule.assignments:
        ax.broken_barh([(a.start_h, a.end_h - a.start_h)], (a.station - 0.35, 0.7))
    ax.set_xlabel("hour of depot day")
    ax.set_ylabel("station")
    ax.set_yticks(range(schedule.station_count))
    ax.set_xlim(0, 24)
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, **_PNG_KWARGS)
    plt.close(fig)
    return path


def save_breakeven_figure(
    years, alt_series, base_series, parity_year, labels: tuple[str, str], path: str | Path
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(years, [alt_series[y] for y in years], marker="o", markersize=3, label=labels[0])
    ax.plot(years, [base_series[y] for y in years], "--", marker="s", markersize=3, label=labels[1])
    if parity_year is not None:
        ax.axvline(parity_year, color="green", linewidth=1.0)
        ax.annotate(
            f"parity {parity_year}",
            xy=(parity_year, alt_series[parity_year]),
            xytext=(4, 10),
            textcoords="offset points",
            fontsize=8,
            color="green",
        )
    ax.set_xlabel("purchase year")
    ax.set_ylabel("levelized TCO ($/mi)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_PNG_KWARGS)
    plt.close(fig)
    return path


def render_table(header: list[str], rows: list[list[str]]) -> str:
    """Aligned text table for stdout."""
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(header, widths)),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
    return "\n".join(lines)
