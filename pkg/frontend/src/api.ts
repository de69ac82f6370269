// Thin typed client for the four service endpoints.

import type { LocatePayload, MapPayload, ReadingPayload, RoutePayload, SimScanPayload } from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`${status}: ${detail}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parseOrThrow<T>(resp: Response): Promise<T> {
  if (resp.ok) {
    return (await resp.json()) as T;
  }
  let detail = resp.statusText;
  try {
    const body = await resp.json();
    detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
  } catch {
    // not JSON; keep the status text
  }
  throw new ApiError(resp.status, detail);
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  getMap(): Promise<MapPayload> {
    return this.fetchFn(`${this.base}/api/v1/map`).then((r) => parseOrThrow<MapPayload>(r));
  }

  simScan(x: number, y: number): Promise<SimScanPayload> {
    return this.fetchFn(`${this.base}/api/v1/sim/scan`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ x, y }),
    }).then((r) => parseOrThrow<SimScanPayload>(r));
  }

  locate(readings: ReadingPayload[]): Promise<LocatePayload> {
    return this.fetchFn(`${this.base}/api/v1/locate`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ readings }),
    }).then((r) => parseOrThrow<LocatePayload>(r));
  }

  route(fromId: string, toId: string): Promise<RoutePayload> {
    const params = new URLSearchParams({ from: fromId, to: toId });
    return this.fetchFn(`${this.base}/api/v1/route?${params}`).then((r) =>
      parseOrThrow<RoutePayload>(r),
    );
  }
}
