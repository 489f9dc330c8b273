/**
 * Service client with per-channel request sequencing.
 *
 * Every request carries a monotone sequence number per channel; a response
 * is applied only if no newer request was issued on that channel in the
 * meantime, so the rendered state always matches the latest interaction.
 */

export class LatestWins {
  private issued = new Map<string, number>();

  begin(channel: string): number {
    const next = (this.issued.get(channel) ?? 0) + 1;
    this.issued.set(channel, next);
    return next;
  }

  isCurrent(channel: string, token: number): boolean {
    return this.issued.get(channel) === token;
  }
}

export type ApiResult<T> =
  | { kind: "ok"; value: T }
  | { kind: "stale" }
  | { kind: "unreachable"; message: string }
  | { kind: "error"; status: number; message: string };

export class ApiClient {
  private sequencer = new LatestWins();

  constructor(
    private baseUrl: string,
    private fetchImpl: typeof fetch = fetch,
  ) {}

  async request<T>(channel: string, path: string, body?: unknown): Promise<ApiResult<T>> {
    const token = this.sequencer.begin(channel);
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, {
        method: body === undefined ? "GET" : "POST",
        headers: body === undefined ? undefined : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      if (!this.sequencer.isCurrent(channel, token)) return { kind: "stale" };
      return { kind: "unreachable", message: err instanceof Error ? err.message : String(err) };
    }
    if (!this.sequencer.isCurrent(channel, token)) return { kind: "stale" };
    if (!response.ok) {
      let message = `${response.status}`;
      try {
        const payload = (await response.json()) as { error?: string };
        if (payload.error) message = payload.error;
      } catch {
        /* non-JSON error body */
      }
      return { kind: "error", status: response.status, message };
    }
    return { kind: "ok", value: (await response.json()) as T };
  }
}
