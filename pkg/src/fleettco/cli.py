"""Command-line interface: analysis commands, report files, service mode.

Every analysis command writes delimited output plus rendered figures into
the output directory and prints a summary table; ``--format structured``
additionally emits the canonical JSON payload. Exit codes: 0 success,
2 dataset or input errors, 3 infeasible scheduling scenarios.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import payloads, reports
from .dataset import INFRA_TYPES, POWERTRAINS, VEHICLE_CLASSES, Dataset, load_dataset
from .errors import DatasetError, InfeasibleScheduleError, InvalidInputError
from .fleet import calibration_fleet_params, generate_fleet
from .infrastructure import InfraConfig, infra_tco
from .scheduling import (
    INSTANCE_FIELDS,
    SCHEDULE_FIELDS,
    min_stations,
    read_instance,
    schedule_rows,
    utilization,
    write_instance,
)
from .sensitivity import run_sensitivity, tornado_table
from .system import breakeven_year, project, station_plans, system_tco, variant_names
from .vehicle import spec_for, vehicle_tco

EXIT_DATASET_ERROR = 2
EXIT_INFEASIBLE = 3


def _load(ctx) -> Dataset:
    try:
        return load_dataset(ctx.obj.get("dataset_path"))
    except DatasetError as e:
        click.echo(f"dataset error: {e}", err=True)
        sys.exit(EXIT_DATASET_ERROR)


def _guard(fn):
    try:
        fn()
    except InfeasibleScheduleError as e:
        click.echo(f"infeasible: {e}", err=True)
        sys.exit(EXIT_INFEASIBLE)
    except (DatasetError, InvalidInputError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_DATASET_ERROR)


def _emit(out: Path, name: str, header, rows, fmt: str, payload: dict | None = None) -> None:
    csv_path = reports.write_csv(out / f"{name}.csv", header, rows)
    if fmt == "delimited":
        click.echo(csv_path.read_text("utf-8"), nl=False)
    elif fmt == "structured" and payload is not None:
        text = payloads.encode(payload)
        (out / f"{name}.json").write_text(text + "\n", encoding="utf-8")
        click.echo(text)
    else:
        click.echo(reports.render_table(header, rows))


_format_option = click.option(
    "--format", "fmt", type=click.Choice(["table", "delimited", "structured"]), default="table"
)
_out_option = click.option("--out", type=click.Path(file_okay=False), default="out")
_year_option = click.option("--year", type=int, default=None, help="purchase year (default: dataset base year)")


@click.group()
@click.option("--dataset", "dataset_path", type=click.Path(exists=False), default=None,
              help="dataset JSON (default: bundled)")
@click.pass_context
def main(ctx, dataset_path):
    """Fleet decarbonization TCO toolkit."""
    ctx.obj = {"dataset_path": dataset_path}


@main.command("vehicle-tco")
@click.option("--vehicle-class", type=click.Choice(VEHICLE_CLASSES), default="day_cab")
@click.option("--powertrain", type=click.Choice(POWERTRAINS), default=None,
              help="one powertrain (default: all eight)")
@_year_option
@_format_option
@_out_option
@click.pass_context
def vehicle_tco_cmd(ctx, vehicle_class, powertrain, year, fmt, out):
    """Six-component cost breakdown for one vehicle class."""
    dataset = _load(ctx)

    def run():
        pts = [powertrain] if powertrain else list(POWERTRAINS)
        breakdowns = [
            vehicle_tco(dataset, spec_for(dataset, vehicle_class, pt), start_year=year)
            for pt in pts
        ]
        rows = [row for b in breakdowns for row in reports.vehicle_tco_rows(b)]
        out_dir = Path(out)
        reports.save_cost_breakdown_figure(breakdowns, out_dir / f"vehicle_tco_{vehicle_class}.png")
        _emit(out_dir, f"vehicle_tco_{vehicle_class}", reports.VEHICLE_TCO_HEADER, rows, fmt)

    _guard(run)


@main.command("infra-tco")
@click.option("--infra-type", type=click.Choice(INFRA_TYPES), required=True)
@click.option("--stations", type=int, default=1)
@click.option("--dispensed", type=float, default=0.0,
              help="annual dispensed quantity (gal, kg, or kWh by type)")
@_year_option
@_format_option
@_out_option
@click.pass_context
def infra_tco_cmd(ctx, infra_type, stations, dispensed, year, fmt, out):
    """Lifetime cost and CapEx breakdown for one infrastructure site."""
    dataset = _load(ctx)

    def run():
        carrier = {
            "diesel": "diesel_gal",
            "h2": "h2_kg",
            "ng": "ng_kg",
            "dcfc": "electricity_kwh",
            "mcs": "electricity_kwh",
        }[infra_type]
        b = infra_tco(
            dataset,
            InfraConfig(infra_type, stations),
            {carrier: dispensed},
            start_year=year,
        )
        out_dir = Path(out)
        reports.write_csv(
            out_dir / f"infra_capex_{infra_type}.csv", reports.CAPEX_HEADER, reports.capex_rows(b)
        )
        reports.save_capex_pie_figure(b, out_dir / f"infra_capex_{infra_type}.png")
        _emit(out_dir, f"infra_tco_{infra_type}", reports.INFRA_TCO_HEADER, reports.infra_tco_rows(b), fmt)

    _guard(run)


def _parse_overrides(pairs: tuple[str, ...]) -> dict[str, float]:
    overrides = {}
    for pair in pairs:
        if "=" not in pair:
            raise InvalidInputError(f"override must look like factor=delta: {pair}")
        key, value = pair.split("=", 1)
        overrides[key] = float(value)
    return overrides


@main.command("system-tco")
@click.option("--variant", required=True)
@click.option("--advancement", type=click.Choice(["low", "moderate", "high"]), default="moderate")
@click.option("--override", "overrides", multiple=True, help="factor=delta what-if override")
@click.option("--fleet-size", type=int, default=None, help="rescale the depot fleet")
@_year_option
@_format_option
@_out_option
@click.pass_context
def system_tco_cmd(ctx, variant, advancement, overrides, fleet_size, year, fmt, out):
    """Vehicle TCO plus the per-mile infrastructure adder for one scenario."""
    dataset = _load(ctx)

    def run():
        from .sensitivity import perturb_dataset

        ds = dataset
        for factor, delta in _parse_overrides(overrides).items():
            ds = perturb_dataset(ds, factor, delta)
        result = system_tco(ds, variant, year, advancement=advancement, fleet_size=fleet_size)
        out_dir = Path(out)
        for b in result.infra:
            reports.save_capex_pie_figure(b, out_dir / f"system_capex_{variant}_{b.infra_type}.png")
        _emit(
            out_dir,
            f"system_tco_{variant}",
            reports.SYSTEM_TCO_HEADER,
            reports.system_tco_rows(result),
            fmt,
            payload=payloads.system_tco_payload(ds, result),
        )

    _guard(run)


@main.command("schedule")
@click.option("--variant", default=None, help="solve the calibration fleet for a variant")
@click.option("--instance", "instance_path", type=click.Path(exists=True), default=None,
              help="vehicle instance CSV (id, arrival_h, dwell_h, required_h)")
@click.option("--station-kind", type=click.Choice(["fuel", "charge"]), default=None)
@_format_option
@_out_option
@click.pass_context
def schedule_cmd(ctx, variant, instance_path, station_kind, fmt, out):
    """Minimum stations and a feasible depot schedule."""
    dataset = _load(ctx)

    def run():
        out_dir = Path(out)
        jobs = []
        if instance_path:
            jobs.append(("instance", read_instance(instance_path)))
        elif variant:
            kinds = [station_kind] if station_kind else None
            if kinds is None:
                pairing = dataset.raw["system"]["infra_pairing"].get(variant)
                if pairing is None:
                    raise InvalidInputError(f"unknown variant: {variant}")
                kinds = ["charge" if t in ("dcfc", "mcs") else "fuel" for t in pairing]
            for kind in kinds:
                inst = generate_fleet(calibration_fleet_params(dataset, variant, kind))
                jobs.append((f"{variant}_{kind}", inst))
        else:
            raise InvalidInputError("pass --variant or --instance")
        for tag, inst in jobs:
            sched = min_stations(inst)
            util = utilization(sched, inst.max_operational_h) if sched.station_count else 0.0
            click.echo(f"{tag}: {sched.station_count} stations, utilization {util * 100:.1f}%")
            write_instance(out_dir / f"schedule_{tag}_instance.csv", inst)
            reports.write_csv(
                out_dir / f"schedule_{tag}.csv", SCHEDULE_FIELDS, schedule_rows(sched)
            )
            if sched.station_count:
                reports.save_schedule_figure(
                    sched, out_dir / f"schedule_{tag}.png", title=tag
                )

    _guard(run)


@main.command("project")
@click.option("--variants", default=None, help="comma-separated variants (default: all)")
@click.option("--years", default="2025,2030,2035,2040", help="comma-separated purchase years")
@_format_option
@_out_option
@click.pass_context
def project_cmd(ctx, variants, years, fmt, out):
    """Levelized TCO projections with low/high advancement bands."""
    dataset = _load(ctx)

    def run():
        vlist = variants.split(",") if variants else None
        ylist = [int(y) for y in years.split(",")]
        rows = project(dataset, vlist, ylist)
        out_dir = Path(out)
        reports.save_projection_figure(rows, out_dir / "projection.png")
        _emit(
            out_dir,
            "projection",
            reports.PROJECTION_HEADER,
            reports.projection_rows(rows),
            fmt,
            payload=payloads.project_payload(dataset, rows),
        )

    _guard(run)


@main.command("sensitivity")
@click.option("--variant", required=True)
@click.option("--delta", type=float, default=0.10)
@click.option("--factors", default=None, help="comma-separated factor ids (default: all)")
@_year_option
@_format_option
@_out_option
@click.pass_context
def sensitivity_cmd(ctx, variant, delta, factors, year, fmt, out):
    """One-at-a-time factor sweep ranked by impact."""
    dataset = _load(ctx)

    def run():
        flist = factors.split(",") if factors else None
        results = tornado_table(run_sensitivity(dataset, variant, year, flist, delta))
        out_dir = Path(out)
        reports.save_tornado_figure(results, out_dir / f"sensitivity_{variant}.png")
        _emit(
            out_dir,
            f"sensitivity_{variant}",
            reports.SENSITIVITY_HEADER,
            reports.sensitivity_rows(results),
            fmt,
            payload=payloads.sensitivity_payload(dataset, results),
        )

    _guard(run)


@main.command("breakeven")
@click.option("--variant", required=True)
@click.option("--baseline", default=None, help="comparison variant (default: dataset baseline)")
@click.option("--start", type=int, default=2023)
@click.option("--end", type=int, default=2040)
@click.option("--vehicle-only", is_flag=True, help="exclude the infrastructure adder")
@_format_option
@_out_option
@click.pass_context
def breakeven_cmd(ctx, variant, baseline, start, end, vehicle_only, fmt, out):
    """First year the variant reaches parity with the baseline."""
    dataset = _load(ctx)

    def run():
        base_variant = baseline or dataset.raw["system"]["baseline_variant"]
        years = list(range(start, end + 1))
        alt, base = {}, {}
        for y in years:
            ra = system_tco(dataset, variant, y)
            rb = system_tco(dataset, base_variant, y)
            alt[y] = ra.levelized_no_infra if vehicle_only else ra.levelized_with_infra
            base[y] = rb.levelized_no_infra if vehicle_only else rb.levelized_with_infra
        parity = breakeven_year(alt, base, years)
        out_dir = Path(out)
        reports.save_breakeven_figure(
            years, alt, base, parity, (variant, base_variant), out_dir / f"breakeven_{variant}.png"
        )
        click.echo(f"breakeven year: {parity if parity is not None else 'none'}")
        _emit(
            out_dir,
            f"breakeven_{variant}",
            reports.BREAKEVEN_HEADER,
            reports.breakeven_rows(years, alt, base),
            fmt,
            payload=payloads.breakeven_payload(
                dataset, variant, base_variant, years, alt, base, parity, not vehicle_only
            ),
        )

    _guard(run)


@main.command("serve")
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
@click.pass_context
def serve_cmd(ctx, host, port):
    """Run the read-only HTTP/JSON analysis service."""
    import uvicorn

    from .service import create_app

    dataset = _load(ctx)
    uvicorn.run(create_app(dataset), host=host, port=port)


if __name__ == "__main__":
    main()
