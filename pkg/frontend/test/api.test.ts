import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

function fakeFetch(status: number, body: unknown) {
  const calls: { url: string; init?: RequestInit }[] = [];
  const fetchFn = async (url: string, init?: RequestInit) => {
    calls.push({ url, init });
    return new Response(JSON.stringify(body), {
      status,
      headers: { "content-type": "application/json" },
    });
  };
  return { fetchFn, calls };
}

describe("ApiClient", () => {
  it("posts locate requests with the readings payload", async () => {
    const { fetchFn, calls } = fakeFetch(200, {
      point: { lat: 0, lon: 0, floor: 0, x: 1, y: 2 },
      method: "fingerprint",
      neighbors: [],
    });
    const client = new ApiClient("", fetchFn);
    const readings = [{ bssid: "02:00:00:00:00:01", ssid: "AP", rssi_dbm: -60 }];
    const result = await client.locate(readings);
    expect(result.point.x).toBe(1);
    expect(calls[0]?.url).toBe("/api/v1/locate");
    expect(JSON.parse(String(calls[0]?.init?.body))).toEqual({ readings });
  });

  it("encodes route endpoints as query parameters", async () => {
    const { fetchFn, calls } = fakeFetch(200, { nodes: [], total_m: 0 });
    await new ApiClient("", fetchFn).route("A", "C");
    expect(calls[0]?.url).toBe("/api/v1/route?from=A&to=C");
  });

  it("raises ApiError with the service detail on failures", async () => {
    const { fetchFn } = fakeFetch(422, { detail: "no usable signal" });
    const client = new ApiClient("", fetchFn);
    await expect(client.locate([])).rejects.toMatchObject({
      status: 422,
      detail: "no usable signal",
    });
    await expect(client.locate([])).rejects.toBeInstanceOf(ApiError);
  });

  it("requests sim scans at the dragged position", async () => {
    const { fetchFn, calls } = fakeFetch(200, {
      readings: [],
      true_position: { x: 1.5, y: 2.5 },
      scan_index: 0,
    });
    const scan = await new ApiClient("", fetchFn).simScan(1.5, 2.5);
    expect(scan.true_position).toEqual({ x: 1.5, y: 2.5 });
    expect(JSON.parse(String(calls[0]?.init?.body))).toEqual({ x: 1.5, y: 2.5 });
  });
});
