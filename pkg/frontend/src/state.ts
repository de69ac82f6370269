// Console state and its pure update functions.
//
// Every displayed number originates from a service response; the only local
// arithmetic is presentation (distance between two rendered markers, canvas
// scaling). Locate rounds are sequence-numbered so an out-of-order response
// can never overwrite a newer one.

import type { LocatePayload, MapPayload, RoutePayload, SimScanPayload, XY } from "./types.js";

export interface RouteDisplay {
  ids: string[];
  points: XY[];
  label: string;
}

export interface ConsoleState {
  map: MapPayload | null;
  banner: string | null;
  badge: string | null;
  livePos: XY | null;
  truePos: XY | null;
  estimate: XY | null;
  errorLabel: string | null;
  route: RouteDisplay | null;
  routeMessage: string | null;
  requestSeq: number;
  appliedSeq: number;
}

export function initialState(): ConsoleState {
  return {
    map: null,
    banner: null,
    badge: null,
    livePos: null,
    truePos: null,
    estimate: null,
    errorLabel: null,
    route: null,
    routeMessage: null,
    requestSeq: 0,
    appliedSeq: 0,
  };
}

export function formatMeters(m: number): string {
  return `${m.toFixed(1)} m`;
}

export function withMap(state: ConsoleState, map: MapPayload): ConsoleState {
  return { ...state, map, banner: null };
}

export function withBanner(state: ConsoleState, banner: string | null): ConsoleState {
  return { ...state, banner };
}

export function withLivePos(state: ConsoleState, pos: XY): ConsoleState {
  return { ...state, livePos: pos };
}

/** Reserve the sequence number for a new locate round. */
export function beginRound(state: ConsoleState): [ConsoleState, number] {
  const seq = state.requestSeq + 1;
  return [{ ...state, requestSeq: seq }, seq];
}

function isStale(state: ConsoleState, seq: number): boolean {
  return seq <= state.appliedSeq;
}

/** Apply a completed sim-scan + locate round; stale responses are dropped. */
export function applyLocateRound(
  state: ConsoleState,
  seq: number,
  scan: SimScanPayload,
  locate: LocatePayload,
): ConsoleState {
  if (isStale(state, seq)) {
    return state;
  }
  const truePos = scan.true_position;
  const estimate =
    locate.point.x !== null && locate.point.y !== null
      ? { x: locate.point.x, y: locate.point.y }
      : null;
  const errorLabel =
    estimate !== null
      ? formatMeters(Math.hypot(estimate.x - truePos.x, estimate.y - truePos.y))
      : null;
  return {
    ...state,
    appliedSeq: seq,
    truePos,
    estimate,
    errorLabel,
    badge: null,
    banner: null,
  };
}

/** The service answered the round with "no usable signal" (422). */
export function applyNoSignal(state: ConsoleState, seq: number): ConsoleState {
  if (isStale(state, seq)) {
    return state;
  }
  return {
    ...state,
    appliedSeq: seq,
    estimate: null,
    errorLabel: null,
    badge: "no usable signal",
  };
}

/** The round failed to reach the service at all. */
export function applyRoundFailure(state: ConsoleState, seq: number, message: string): ConsoleState {
  if (isStale(state, seq)) {
    return state;
  }
  return { ...state, appliedSeq: seq, banner: message };
}

export function applyRoute(state: ConsoleState, route: RoutePayload): ConsoleState {
  const points: XY[] = [];
  for (const node of route.nodes) {
    if (node.x !== null && node.y !== null) {
      points.push({ x: node.x, y: node.y });
    }
  }
  return {
    ...state,
    route: {
      ids: route.nodes.map((n) => n.id),
      points,
      label: formatMeters(route.total_m),
    },
    routeMessage: null,
  };
}

/** Route failure clears any previously drawn route. */
export function applyRouteError(state: ConsoleState, message: string): ConsoleState {
  return { ...state, route: null, routeMessage: message };
}

export interface CanvasSize {
  width: number;
  height: number;
}

export const CANVAS_PADDING_PX = 24;

/** Map planar meters to canvas pixels; y grows upward in world space. */
export function worldToCanvas(frame: { width_m: number; height_m: number },
                              size: CanvasSize, p: XY): XY {
  const scale = Math.min(
    (size.width - 2 * CANVAS_PADDING_PX) / frame.width_m,
    (size.height - 2 * CANVAS_PADDING_PX) / frame.height_m,
  );
  return {
    x: CANVAS_PADDING_PX + p.x * scale,
    y: size.height - CANVAS_PADDING_PX - p.y * scale,
  };
}

export function canvasToWorld(frame: { width_m: number; height_m: number },
                              size: CanvasSize, p: XY): XY {
  const scale = Math.min(
    (size.width - 2 * CANVAS_PADDING_PX) / frame.width_m,
    (size.height - 2 * CANVAS_PADDING_PX) / frame.height_m,
  );
  return {
    x: (p.x - CANVAS_PADDING_PX) / scale,
    y: (size.height - CANVAS_PADDING_PX - p.y) / scale,
  };
}

export function clampToExtent(frame: { width_m: number; height_m: number }, p: XY): XY {
  return {
    x: Math.min(Math.max(p.x, 0), frame.width_m),
    y: Math.min(Math.max(p.y, 0), frame.height_m),
  };
}
