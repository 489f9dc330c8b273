/** Contract tests: view models must render recorded service fixtures exactly. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import type {
  BreakevenPayload,
  ProjectPayload,
  SensitivityPayload,
  SystemTcoPayload,
  VariantsPayload,
} from "../src/types.js";
import {
  adderPanel,
  breakdownPanel,
  breakevenView,
  perMile,
  percent,
  projectionView,
  tornadoView,
  whatIfDeltaPanel,
} from "../src/views.js";
import { lineChart, tornadoChart } from "../src/charts.js";

const fixturesDir = join(dirname(fileURLToPath(import.meta.url)), "..", "fixtures");

function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(fixturesDir, name), "utf-8")) as T;
}

describe("breakeven view", () => {
  it("renders the fixture parity year and series values exactly", () => {
    const payload = fixture<BreakevenPayload>("breakeven_BEV700_vehicle_only.json");
    const view = breakevenView(payload);
    expect(view.parityYear).toBe(payload.breakeven_year);
    expect(view.parityText).toBe(`parity in ${payload.breakeven_year}`);
    expect(view.years).toEqual(payload.years);
    expect(view.alternative).toEqual(payload.series.alternative);
    expect(view.baseline).toEqual(payload.series.baseline);
  });

  it("marks the parity year in the rendered chart", () => {
    const payload = fixture<BreakevenPayload>("breakeven_NG-ICE_system.json");
    const view = breakevenView(payload);
    const svg = lineChart(
      [
        { name: view.alternativeLabel, years: view.years, values: view.alternative },
        { name: view.baselineLabel, years: view.years, values: view.baseline, dashed: true },
      ],
      { parityYear: view.parityYear },
    );
    expect(svg).toContain("parity-marker");
    expect(svg).toContain(`parity ${payload.breakeven_year}`);
  });

  it("identical series give parity at the first year", () => {
    const payload = fixture<BreakevenPayload>("breakeven_BEV700_vehicle_only.json");
    const identical: BreakevenPayload = {
      ...payload,
      breakeven_year: payload.years[0]!,
      series: { alternative: payload.series.baseline, baseline: payload.series.baseline },
    };
    expect(breakevenView(identical).parityYear).toBe(payload.years[0]);
  });
});

describe("adder panel", () => {
  it("renders the diesel 2023 infrastructure adder from the fixture exactly", () => {
    const payload = fixture<SystemTcoPayload>("system_tco_D-ICE_2023.json");
    const rows = adderPanel(payload);
    const adderRow = rows.find((r) => r.label === "infrastructure adder")!;
    expect(adderRow.value).toBe(perMile(payload.levelized_usd_per_mile.infrastructure_adder));
    // Reported diesel adder sits near $0.05/mi.
    expect(
      Math.abs(payload.levelized_usd_per_mile.infrastructure_adder - 0.05),
    ).toBeLessThanOrEqual(0.05);
    const stationRow = rows.find((r) => r.label === "diesel stations")!;
    expect(stationRow.value).toContain(`${payload.stations[0]!.count} @`);
  });

  it("every displayed number traces back to a payload field", () => {
    const payload = fixture<SystemTcoPayload>("system_tco_BEV700_2023.json");
    const rows = adderPanel(payload);
    const lev = payload.levelized_usd_per_mile;
    expect(rows.map((r) => r.value).slice(0, 3)).toEqual([
      perMile(lev.no_infrastructure),
      perMile(lev.infrastructure_adder),
      perMile(lev.with_infrastructure),
    ]);
    const breakdown = breakdownPanel(payload);
    for (const row of breakdown) {
      expect(row.value).toBe(perMile(payload.vehicle.levelized_usd_per_mile[row.label]!));
    }
  });
});

describe("what-if delta panel", () => {
  it("renders the +10% diesel price delta exactly as the service computed it", () => {
    const payload = fixture<SensitivityPayload>("sensitivity_D-ICE_diesel_price_10.json");
    const rows = whatIfDeltaPanel(payload);
    expect(rows).toHaveLength(1);
    const row = rows[0]!;
    const r = payload.results[0]!;
    expect(row.factor).toBe("diesel_price");
    expect(row.changeFraction).toBe(r.relative_change);
    expect(row.change).toBe(percent(r.relative_change));
    expect(row.baseline).toBe(perMile(r.baseline_usd_per_mile));
    expect(row.perturbed).toBe(perMile(r.perturbed_usd_per_mile));
    // The recorded response lands inside the reported calibration band.
    expect(r.relative_change).toBeGreaterThan(0.027);
    expect(r.relative_change).toBeLessThan(0.057);
  });
});

describe("tornado view", () => {
  it("preserves the service-provided impact ranking", () => {
    const payload = fixture<SensitivityPayload>("sensitivity_FCEV200_full.json");
    const rows = tornadoView(payload);
    expect(rows.map((r) => r.factor)).toEqual(payload.results.map((r) => r.factor));
    const magnitudes = rows.map((r) => Math.abs(r.changeFraction));
    for (let i = 1; i < magnitudes.length; i++) {
      expect(magnitudes[i]!).toBeLessThanOrEqual(magnitudes[i - 1]! + 1e-12);
    }
    const svg = tornadoChart(rows);
    for (const row of rows) {
      expect(svg).toContain(row.factor);
    }
  });
});

describe("projection view", () => {
  it("with-infrastructure stays above vehicle-only for every fixture row", () => {
    const payload = fixture<ProjectPayload>("project_BEV700_D-ICE.json");
    for (const series of projectionView(payload)) {
      series.withInfrastructure.forEach((value, i) => {
        expect(value).toBeGreaterThanOrEqual(series.noInfrastructure[i]!);
      });
    }
  });
});

describe("variants metadata", () => {
  it("publishes the factor ids that override controls are restricted to", () => {
    const payload = fixture<VariantsPayload>("variants.json");
    const ids = payload.factors.map((f) => f.id);
    expect(ids).toContain("diesel_price");
    expect(ids).toContain("battery_unit_cost");
    expect(payload.variants).toHaveLength(12);
  });
});
