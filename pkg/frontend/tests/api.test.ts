/** Request sequencing: stale responses are discarded, failures surface. */

import { describe, expect, it } from "vitest";

import { ApiClient, LatestWins } from "../src/api.js";

describe("LatestWins sequencer", () => {
  it("only the most recent token on a channel is current", () => {
    const seq = new LatestWins();
    const first = seq.begin("chart");
    const second = seq.begin("chart");
    expect(seq.isCurrent("chart", first)).toBe(false);
    expect(seq.isCurrent("chart", second)).toBe(true);
  });

  it("channels are independent", () => {
    const seq = new LatestWins();
    const a = seq.begin("a");
    seq.begin("b");
    expect(seq.isCurrent("a", a)).toBe(true);
  });
});

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("ApiClient", () => {
  it("marks a response stale when a newer request was issued", async () => {
    let release: (() => void) | undefined;
    const gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    let calls = 0;
    const fetchImpl = (async () => {
      calls += 1;
      if (calls === 1) {
        await gate;
        return jsonResponse({ value: "old" });
      }
      return jsonResponse({ value: "new" });
    }) as typeof fetch;

    const client = new ApiClient("http://service", fetchImpl);
    const slow = client.request<{ value: string }>("panel", "/api/x", {});
    const fast = client.request<{ value: string }>("panel", "/api/x", {});
    const fastResult = await fast;
    release!();
    const slowResult = await slow;
    expect(fastResult).toEqual({ kind: "ok", value: { value: "new" } });
    expect(slowResult.kind).toBe("stale");
  });

  it("reports unreachable services with a retry-able state", async () => {
    const fetchImpl = (async () => {
      throw new Error("connection refused");
    }) as typeof fetch;
    const client = new ApiClient("http://nowhere", fetchImpl);
    const result = await client.request("panel", "/api/variants");
    expect(result.kind).toBe("unreachable");
  });

  it("surfaces service error bodies", async () => {
    const fetchImpl = (async () =>
      jsonResponse({ error: "unknown variant: WARP9" }, 400)) as typeof fetch;
    const client = new ApiClient("http://service", fetchImpl);
    const result = await client.request("panel", "/api/system-tco", { variant: "WARP9" });
    expect(result).toEqual({ kind: "error", status: 400, message: "unknown variant: WARP9" });
  });
});
