/** Share-link round trips and override restriction to published factors. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import {
  decodeShareLink,
  defaultState,
  encodeShareLink,
  sanitizeOverrides,
} from "../src/state.js";
import type { VariantsPayload, WhatIfState } from "../src/types.js";

const fixturesDir = join(dirname(fileURLToPath(import.meta.url)), "..", "fixtures");
const meta = JSON.parse(
  readFileSync(join(fixturesDir, "variants.json"), "utf-8"),
) as VariantsPayload;

describe("share links", () => {
  it("round-trips the full state losslessly", () => {
    const state: WhatIfState = {
      variant: "FCEV200",
      baseline: "D-ICE",
      year: 2031,
      advancement: "high",
      fleetSize: 30,
      overrides: { diesel_price: 0.1, battery_unit_cost: -0.07, h2_price: 0.123456789 },
    };
    const decoded = decodeShareLink(encodeShareLink(state), defaultState(meta));
    expect(decoded).toEqual(state);
  });

  it("round-trips the default state", () => {
    const state = defaultState(meta);
    expect(decodeShareLink(encodeShareLink(state), state)).toEqual(state);
  });

  it("round-trips extreme float deltas exactly", () => {
    const state = defaultState(meta);
    state.overrides = { diesel_price: 0.30000000000000004, annual_vmt: -0.1 };
    const decoded = decodeShareLink(encodeShareLink(state), defaultState(meta));
    expect(decoded.overrides.diesel_price).toBe(0.30000000000000004);
    expect(decoded.overrides.annual_vmt).toBe(-0.1);
  });

  it("falls back to defaults for missing fields", () => {
    const fallback = defaultState(meta);
    const decoded = decodeShareLink("variant=NG-ICE", fallback);
    expect(decoded.variant).toBe("NG-ICE");
    expect(decoded.baseline).toBe(fallback.baseline);
    expect(decoded.year).toBe(fallback.year);
    expect(decoded.overrides).toEqual({});
  });
});

describe("override restriction", () => {
  it("keeps only factor ids published by the variants endpoint", () => {
    const cleaned = sanitizeOverrides(
      { diesel_price: 0.1, made_up_factor: 0.5, battery_unit_cost: -0.05 },
      meta,
    );
    expect(cleaned).toEqual({ diesel_price: 0.1, battery_unit_cost: -0.05 });
  });

  it("drops zero and non-finite deltas", () => {
    const cleaned = sanitizeOverrides({ diesel_price: 0, h2_price: Number.NaN }, meta);
    expect(cleaned).toEqual({});
  });
});

describe("default state", () => {
  it("uses the service-published baseline and fleet", () => {
    const state = defaultState(meta);
    expect(state.baseline).toBe(meta.baseline_variant);
    expect(state.fleetSize).toBe(meta.fleet_size);
    expect(meta.variants.some((v) => v.id === state.variant)).toBe(true);
  });
});
