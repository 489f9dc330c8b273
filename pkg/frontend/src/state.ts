/** What-if state: defaults, metadata validation, lossless share links. */

import type { VariantsPayload, WhatIfState } from "./types.js";

export function defaultState(meta: VariantsPayload): WhatIfState {
  return {
    variant: meta.variants.some((v) => v.id === "BEV700") ? "BEV700" : meta.variants[0]!.id,
    baseline: meta.baseline_variant,
    year: meta.base_year,
    advancement: "moderate",
    fleetSize: meta.fleet_size,
    overrides: {},
  };
}

/** Drop override keys the service has not published as factors. */
export function sanitizeOverrides(
  overrides: Record<string, number>,
  meta: VariantsPayload,
): Record<string, number> {
  const known = new Set(meta.factors.map((f) => f.id));
  const clean: Record<string, number> = {};
  for (const [key, value] of Object.entries(overrides)) {
    if (known.has(key) && Number.isFinite(value) && value !== 0) {
      clean[key] = value;
    }
  }
  return clean;
}

/**
 * Encode the state as a URL query string. Deltas serialize via String(),
 * which round-trips every finite JS number exactly.
 */
export function encodeShareLink(state: WhatIfState): string {
  const params = new URLSearchParams();
  params.set("variant", state.variant);
  params.set("baseline", state.baseline);
  params.set("year", String(state.year));
  params.set("advancement", state.advancement);
  params.set("fleet", String(state.fleetSize));
  const keys = Object.keys(state.overrides).sort();
  if (keys.length > 0) {
    params.set("overrides", keys.map((k) => `${k}:${String(state.overrides[k])}`).join(","));
  }
  return params.toString();
}

export function decodeShareLink(query: string, fallback: WhatIfState): WhatIfState {
  const params = new URLSearchParams(query);
  const overrides: Record<string, number> = {};
  const encoded = params.get("overrides");
  if (encoded) {
    for (const pair of encoded.split(",")) {
      const idx = pair.indexOf(":");
      if (idx <= 0) continue;
      const value = Number(pair.slice(idx + 1));
      if (Number.isFinite(value)) overrides[pair.slice(0, idx)] = value;
    }
  }
  return {
    variant: params.get("variant") ?? fallback.variant,
    baseline: params.get("baseline") ?? fallback.baseline,
    year: Number(params.get("year") ?? fallback.year),
    advancement: params.get("advancement") ?? fallback.advancement,
    fleetSize: Number(params.get("fleet") ?? fallback.fleetSize),
    overrides,
  };
}
