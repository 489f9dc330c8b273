/**
 * Pure view-model builders. The UI performs no cost arithmetic: every
 * number shown is a service response field, formatted for display. Ranking
 * order and relative changes arrive pre-computed from the service.
 */

import type {
  BreakevenPayload,
  ProjectPayload,
  SensitivityPayload,
  SystemTcoPayload,
} from "./types.js";

export function perMile(value: number): string {
  return `$${value.toFixed(4)}/mi`;
}

export function percent(fraction: number): string {
  const pct = fraction * 100;
  return `${pct >= 0 ? "+" : ""}${pct.toFixed(2)}%`;
}

export interface BreakevenView {
  years: number[];
  alternative: number[];
  baseline: number[];
  alternativeLabel: string;
  baselineLabel: string;
  parityYear: number | null;
  parityText: string;
  withInfrastructure: boolean;
}

export function breakevenView(payload: BreakevenPayload): BreakevenView {
  return {
    years: payload.years,
    alternative: payload.series.alternative,
    baseline: payload.series.baseline,
    alternativeLabel: payload.variant,
    baselineLabel: payload.baseline,
    parityYear: payload.breakeven_year,
    parityText:
      payload.breakeven_year === null
        ? "no parity in range"
        : `parity in ${payload.breakeven_year}`,
    withInfrastructure: payload.with_infrastructure,
  };
}

export interface PanelRow {
  label: string;
  value: string;
}

export function adderPanel(payload: SystemTcoPayload): PanelRow[] {
  const lev = payload.levelized_usd_per_mile;
  const rows: PanelRow[] = [
    { label: "vehicle TCO (no infrastructure)", value: perMile(lev.no_infrastructure) },
    { label: "infrastructure adder", value: perMile(lev.infrastructure_adder) },
    { label: "system TCO (with infrastructure)", value: perMile(lev.with_infrastructure) },
  ];
  for (const station of payload.stations) {
    rows.push({
      label: `${station.infra_type} stations`,
      value: `${station.count} @ ${(station.utilization * 100).toFixed(1)}% utilization`,
    });
  }
  return rows;
}

export function breakdownPanel(payload: SystemTcoPayload): PanelRow[] {
  return Object.entries(payload.vehicle.levelized_usd_per_mile).map(([component, value]) => ({
    label: component,
    value: perMile(value),
  }));
}

export interface DeltaRow {
  factor: string;
  category: string;
  baseline: string;
  perturbed: string;
  change: string;
  changeFraction: number;
}

/** What-if delta panel rows; relative_change comes from the service. */
export function whatIfDeltaPanel(payload: SensitivityPayload): DeltaRow[] {
  return payload.results.map((r) => ({
    factor: r.factor,
    category: r.category,
    baseline: perMile(r.baseline_usd_per_mile),
    perturbed: perMile(r.perturbed_usd_per_mile),
    change: percent(r.relative_change),
    changeFraction: r.relative_change,
  }));
}

export interface TornadoRow {
  factor: string;
  changeFraction: number;
  changeText: string;
}

/** The service returns results already ranked by impact; keep that order. */
export function tornadoView(payload: SensitivityPayload): TornadoRow[] {
  return payload.results.map((r) => ({
    factor: r.factor,
    changeFraction: r.relative_change,
    changeText: percent(r.relative_change),
  }));
}

export interface ProjectionSeriesView {
  variant: string;
  years: number[];
  withInfrastructure: number[];
  noInfrastructure: number[];
}

export function projectionView(payload: ProjectPayload): ProjectionSeriesView[] {
  const byVariant = new Map<string, ProjectionSeriesView>();
  for (const row of payload.rows) {
    let series = byVariant.get(row.variant);
    if (!series) {
      series = { variant: row.variant, years: [], withInfrastructure: [], noInfrastructure: [] };
      byVariant.set(row.variant, series);
    }
    series.years.push(row.year);
    series.withInfrastructure.push(row.with_infrastructure);
    series.noInfrastructure.push(row.no_infrastructure);
  }
  return [...byVariant.values()];
}
