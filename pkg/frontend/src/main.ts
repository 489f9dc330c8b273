/** DOM wiring: controls -> service requests -> rendered panels and charts. */

import { ApiClient, type ApiResult } from "./api.js";
import { lineChart, tornadoChart } from "./charts.js";
import { decodeShareLink, defaultState, encodeShareLink, sanitizeOverrides } from "./state.js";
import type {
  BreakevenPayload,
  SensitivityPayload,
  SystemTcoPayload,
  VariantsPayload,
  WhatIfState,
} from "./types.js";
import {
  adderPanel,
  breakdownPanel,
  breakevenView,
  tornadoView,
  whatIfDeltaPanel,
} from "./views.js";

const SLIDER_FACTORS = [
  "diesel_price",
  "electricity_price",
  "h2_price",
  "ng_price",
  "battery_unit_cost",
  "fuel_cell_unit_cost",
  "h2_tank_unit_cost",
  "electric_drive_unit_cost",
  "driver_wage",
  "annual_vmt",
];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function renderRows(target: HTMLElement, rows: { label: string; value: string }[]): void {
  target.innerHTML = rows
    .map(
      (r) =>
        `<div class="row"><span class="label">${r.label}</span><span class="value">${r.value}</span></div>`,
    )
    .join("");
}

function renderError(target: HTMLElement, message: string, retry: () => void): void {
  target.innerHTML = `<div class="error">service unreachable: ${message} <button>retry</button></div>`;
  target.querySelector("button")?.addEventListener("click", retry);
}

async function boot(): Promise<void> {
  const apiBase =
    new URLSearchParams(window.location.search).get("api") ?? "http://127.0.0.1:8000";
  const client = new ApiClient(apiBase);

  const metaResult = await client.request<VariantsPayload>("meta", "/api/variants");
  if (metaResult.kind !== "ok") {
    document.body.innerHTML = `<p class="error">Cannot reach the analysis service at ${apiBase}.
      Start it with <code>fleettco serve</code> and reload.</p>`;
    return;
  }
  const meta = metaResult.value;
  let state: WhatIfState = decodeShareLink(window.location.search, defaultState(meta));
  state.overrides = sanitizeOverrides(state.overrides, meta);

  const variantSelect = el<HTMLSelectElement>("variant");
  const baselineSelect = el<HTMLSelectElement>("baseline");
  const yearInput = el<HTMLInputElement>("year");
  const fleetInput = el<HTMLInputElement>("fleet-size");
  const advancementSelect = el<HTMLSelectElement>("advancement");
  for (const v of meta.variants) {
    variantSelect.add(new Option(v.id, v.id));
    baselineSelect.add(new Option(v.id, v.id));
  }
  for (const level of meta.advancement_levels) {
    advancementSelect.add(new Option(level, level));
  }
  el<HTMLSpanElement>("dataset-hash").textContent = meta.dataset_hash.slice(0, 12);

  const sliders = el<HTMLDivElement>("sliders");
  const publishedSliderFactors = meta.factors.filter((f) => SLIDER_FACTORS.includes(f.id));
  for (const factor of publishedSliderFactors) {
    const wrap = document.createElement("div");
    wrap.className = "slider";
    wrap.innerHTML = `<label>${factor.id} <span data-value-for="${factor.id}">+0%</span></label>
      <input type="range" min="-30" max="30" step="1" value="0" data-factor="${factor.id}"
             title="${factor.description}">`;
    sliders.appendChild(wrap);
  }

  function syncControls(): void {
    variantSelect.value = state.variant;
    baselineSelect.value = state.baseline;
    yearInput.value = String(state.year);
    fleetInput.value = String(state.fleetSize);
    advancementSelect.value = state.advancement;
    for (const input of sliders.querySelectorAll<HTMLInputElement>("input[data-factor]")) {
      const id = input.dataset.factor!;
      const delta = state.overrides[id] ?? 0;
      input.value = String(Math.round(delta * 100));
      const label = sliders.querySelector(`[data-value-for="${id}"]`);
      if (label) label.textContent = `${delta >= 0 ? "+" : ""}${Math.round(delta * 100)}%`;
    }
  }

  function pushShareLink(): void {
    const query = encodeShareLink(state);
    const suffix = apiBase ? `&api=${encodeURIComponent(apiBase)}` : "";
    window.history.replaceState(null, "", `?${query}${suffix}`);
  }

  async function refreshBreakeven(): Promise<void> {
    const panel = el<HTMLDivElement>("breakeven-chart");
    const body = {
      variant: state.variant,
      baseline: state.baseline,
      start_year: meta.base_year,
      end_year: 2040,
      fleet_size: state.fleetSize,
      overrides: state.overrides,
    };
    const withInfra = await client.request<BreakevenPayload>(
      "breakeven-with", "/api/breakeven", { ...body, with_infrastructure: true });
    const withoutInfra = await client.request<BreakevenPayload>(
      "breakeven-without", "/api/breakeven", { ...body, with_infrastructure: false });
    if (withInfra.kind === "stale" || withoutInfra.kind === "stale") return;
    if (withInfra.kind !== "ok") {
      renderError(panel, withInfra.message, refreshBreakeven);
      return;
    }
    if (withoutInfra.kind !== "ok") {
      renderError(panel, withoutInfra.message, refreshBreakeven);
      return;
    }
    const view = breakevenView(withInfra.value);
    const viewNo = breakevenView(withoutInfra.value);
    panel.innerHTML = lineChart(
      [
        { name: `${view.alternativeLabel} (with infra)`, years: view.years, values: view.alternative },
        { name: `${view.baselineLabel} (with infra)`, years: view.years, values: view.baseline, dashed: true },
        { name: `${viewNo.alternativeLabel} (vehicle only)`, years: viewNo.years, values: viewNo.alternative },
        { name: `${viewNo.baselineLabel} (vehicle only)`, years: viewNo.years, values: viewNo.baseline, dashed: true },
      ],
      { parityYear: view.parityYear, yLabel: "$/mi" },
    );
    el<HTMLSpanElement>("parity-text").textContent =
      `${view.parityText} (with infrastructure); ${viewNo.parityText} (vehicle only)`;
  }

  async function refreshSystemTco(): Promise<void> {
    const panel = el<HTMLDivElement>("adder-panel");
    const result: ApiResult<SystemTcoPayload> = await client.request("system", "/api/system-tco", {
      variant: state.variant,
      year: state.year,
      advancement: state.advancement,
      fleet_size: state.fleetSize,
      overrides: state.overrides,
    });
    if (result.kind === "stale") return;
    if (result.kind !== "ok") {
      renderError(panel, result.kind === "error" ? result.message : result.message, refreshSystemTco);
      return;
    }
    renderRows(panel, adderPanel(result.value));
    renderRows(el<HTMLDivElement>("breakdown-panel"), breakdownPanel(result.value));
  }

  async function refreshWhatIf(): Promise<void> {
    const panel = el<HTMLDivElement>("delta-panel");
    const factors = Object.keys(state.overrides).sort();
    if (factors.length === 0) {
      panel.innerHTML = `<div class="row"><span class="label">no overrides</span><span class="value">move a slider</span></div>`;
      return;
    }
    // One-factor deltas come from the sensitivity endpoint so the panel
    // shows service-computed relative changes, never local arithmetic.
    const rows: { label: string; value: string }[] = [];
    for (const factor of factors) {
      const result: ApiResult<SensitivityPayload> = await client.request(
        `whatif-${factor}`,
        "/api/sensitivity",
        { variant: state.variant, year: state.year, delta: state.overrides[factor], factors: [factor] },
      );
      if (result.kind === "stale") return;
      if (result.kind !== "ok") {
        renderError(panel, result.kind === "error" ? result.message : result.message, refreshWhatIf);
        return;
      }
      for (const row of whatIfDeltaPanel(result.value)) {
        rows.push({ label: `${row.factor} (${row.baseline} -> ${row.perturbed})`, value: row.change });
      }
    }
    renderRows(panel, rows);
  }

  async function refreshTornado(): Promise<void> {
    const panel = el<HTMLDivElement>("tornado-chart");
    const result: ApiResult<SensitivityPayload> = await client.request(
      "tornado", "/api/sensitivity", { variant: state.variant, year: state.year, delta: 0.10 });
    if (result.kind === "stale") return;
    if (result.kind !== "ok") {
      renderError(panel, result.kind === "error" ? result.message : result.message, refreshTornado);
      return;
    }
    panel.innerHTML = tornadoChart(tornadoView(result.value));
  }

  function refreshAll(): void {
    pushShareLink();
    void refreshBreakeven();
    void refreshSystemTco();
    void refreshWhatIf();
    void refreshTornado();
  }

  variantSelect.addEventListener("change", () => {
    state.variant = variantSelect.value;
    refreshAll();
  });
  baselineSelect.addEventListener("change", () => {
    state.baseline = baselineSelect.value;
    refreshAll();
  });
  yearInput.addEventListener("change", () => {
    state.year = Number(yearInput.value);
    refreshAll();
  });
  fleetInput.addEventListener("change", () => {
    const size = Number(fleetInput.value);
    if (Number.isInteger(size) && size >= 1) {
      state.fleetSize = size;
      refreshAll();
    }
  });
  advancementSelect.addEventListener("change", () => {
    state.advancement = advancementSelect.value;
    refreshAll();
  });
  sliders.addEventListener("input", (event) => {
    const input = event.target as HTMLInputElement;
    const factor = input.dataset.factor;
    if (!factor) return;
    const delta = Number(input.value) / 100;
    if (delta === 0) delete state.overrides[factor];
    else state.overrides[factor] = delta;
    state.overrides = sanitizeOverrides(state.overrides, meta);
    syncControls();
    refreshAll();
  });

  syncControls();
  refreshAll();
}

void boot();
