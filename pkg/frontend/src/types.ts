/** Service payload shapes, mirrored one-to-one from the analysis API. */

export interface VariantInfo {
  id: string;
  powertrain: string;
  vehicle_class: string;
  infrastructure: string[];
}

export interface FactorInfo {
  id: string;
  category: string;
  description: string;
}

export interface VariantsPayload {
  dataset_hash: string;
  base_year: number;
  fleet_size: number;
  fleet_class: string;
  baseline_variant: string;
  advancement_levels: string[];
  variants: VariantInfo[];
  factors: FactorInfo[];
}

export interface LevelizedBlock {
  no_infrastructure: number;
  with_infrastructure: number;
  infrastructure_adder: number;
}

export interface StationInfo {
  infra_type: string;
  station_kind: string;
  count: number;
  utilization: number;
}

export interface CapexItemInfo {
  id: string;
  kind: string;
  cost_usd: number;
  share: number;
}

export interface InfraInfo {
  infra_type: string;
  num_stations: number;
  construction_years: number;
  capex_usd: number;
  discounted_total_usd: number;
  capex_items: CapexItemInfo[];
}

export interface SystemTcoPayload {
  dataset_hash: string;
  variant: string;
  year: number;
  advancement: string;
  fleet_size: number;
  levelized_usd_per_mile: LevelizedBlock;
  vehicle: {
    gross_price_usd: number;
    net_price_usd: number;
    residual_usd: number;
    levelized_usd_per_mile: Record<string, number>;
    discounted_totals_usd: Record<string, number>;
  };
  stations: StationInfo[];
  infrastructure: InfraInfo[];
}

export interface ProjectionRowPayload {
  variant: string;
  year: number;
  no_infrastructure: number;
  with_infrastructure: number;
  no_infrastructure_band: [number, number];
  with_infrastructure_band: [number, number];
  at_or_below_baseline: boolean;
}

export interface ProjectPayload {
  dataset_hash: string;
  rows: ProjectionRowPayload[];
}

export interface SensitivityRowPayload {
  variant: string;
  factor: string;
  category: string;
  baseline_usd_per_mile: number;
  perturbed_usd_per_mile: number;
  relative_change: number;
}

export interface SensitivityPayload {
  dataset_hash: string;
  results: SensitivityRowPayload[];
}

export interface BreakevenPayload {
  dataset_hash: string;
  variant: string;
  baseline: string;
  with_infrastructure: boolean;
  breakeven_year: number | null;
  years: number[];
  series: { alternative: number[]; baseline: number[] };
}

/** Client-side what-if state; all numbers flow back to the service. */
export interface WhatIfState {
  variant: string;
  baseline: string;
  year: number;
  advancement: string;
  fleetSize: number;
  /** factor id -> fractional delta, restricted to published factor ids */
  overrides: Record<string, number>;
}
