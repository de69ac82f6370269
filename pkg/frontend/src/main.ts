// DOM wiring: drag the simulated device, request routes, keep the canvas
// in sync with the state. Requests fire on user action only.

import { ApiClient, ApiError } from "./api.js";
import {
  applyLocateRound,
  applyNoSignal,
  applyRoundFailure,
  applyRoute,
  applyRouteError,
  beginRound,
  canvasToWorld,
  clampToExtent,
  initialState,
  withBanner,
  withLivePos,
  withMap,
  type ConsoleState,
} from "./state.js";
import { render } from "./render.js";

const THROTTLE_MS = 100; // at most ten locate rounds per second while dragging

const api = new ApiClient("");
let state: ConsoleState = initialState();

const canvas = document.getElementById("floor") as HTMLCanvasElement;
const errorReadout = document.getElementById("error-readout") as HTMLSpanElement;
const badgeEl = document.getElementById("badge") as HTMLSpanElement;
const bannerEl = document.getElementById("banner") as HTMLDivElement;
const retryBtn = document.getElementById("retry") as HTMLButtonElement;
const fromSelect = document.getElementById("route-from") as HTMLSelectElement;
const toSelect = document.getElementById("route-to") as HTMLSelectElement;
const routeBtn = document.getElementById("route-go") as HTMLButtonElement;
const routeMessage = document.getElementById("route-message") as HTMLSpanElement;
const neighborsEl = document.getElementById("neighbors") as HTMLUListElement;

function setState(next: ConsoleState): void {
  state = next;
  render(state, canvas);
  errorReadout.textContent = state.errorLabel ?? "–";
  badgeEl.textContent = state.badge ?? "";
  badgeEl.style.display = state.badge ? "inline" : "none";
  bannerEl.style.display = state.banner ? "flex" : "none";
  bannerEl.querySelector("span")!.textContent = state.banner ?? "";
  routeMessage.textContent = state.routeMessage ?? (state.route ? state.route.label : "");
}

async function loadMap(): Promise<void> {
  try {
    const map = await api.getMap();
    setState(withMap(state, map));
    fromSelect.replaceChildren(...map.graph.nodes.map((n) => option(n.id)));
    toSelect.replaceChildren(...map.graph.nodes.map((n) => option(n.id)));
  } catch (err) {
    setState(withBanner(state, `service unreachable: ${describe(err)}`));
  }
}

function option(id: string): HTMLOptionElement {
  const el = document.createElement("option");
  el.value = id;
  el.textContent = id;
  return el;
}

function describe(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}

async function locateRound(x: number, y: number): Promise<void> {
  const [next, seq] = beginRound(state);
  setState(next);
  try {
    const scan = await api.simScan(x, y);
    const located = await api.locate(scan.readings);
    setState(applyLocateRound(state, seq, scan, located));
    neighborsEl.replaceChildren(
      ...located.neighbors.map((n) => {
        const li = document.createElement("li");
        li.textContent = `${n.location_id} (${n.signal_distance_db.toFixed(1)} dB)`;
        return li;
      }),
    );
  } catch (err) {
    if (err instanceof ApiError && err.status === 422) {
      setState(applyNoSignal(state, seq));
    } else {
      setState(applyRoundFailure(state, seq, `service unreachable: ${describe(err)}`));
    }
  }
}

let dragging = false;
let lastRoundAt = 0;

function pointerWorld(ev: PointerEvent): { x: number; y: number } | null {
  if (!state.map?.simulated || !state.map.scenario) {
    return null;
  }
  const rect = canvas.getBoundingClientRect();
  const pos = canvasToWorld(
    state.map.scenario.extent,
    { width: canvas.width, height: canvas.height },
    { x: ev.clientX - rect.left, y: ev.clientY - rect.top },
  );
  return clampToExtent(state.map.scenario.extent, pos);
}

canvas.addEventListener("pointerdown", (ev) => {
  const pos = pointerWorld(ev);
  if (!pos) {
    return;
  }
  dragging = true;
  canvas.setPointerCapture(ev.pointerId);
  setState(withLivePos(state, pos));
  lastRoundAt = performance.now();
  void locateRound(pos.x, pos.y);
});

canvas.addEventListener("pointermove", (ev) => {
  if (!dragging) {
    return;
  }
  const pos = pointerWorld(ev);
  if (!pos) {
    return;
  }
  setState(withLivePos(state, pos));
  const now = performance.now();
  if (now - lastRoundAt >= THROTTLE_MS) {
    lastRoundAt = now;
    void locateRound(pos.x, pos.y);
  }
});

canvas.addEventListener("pointerup", (ev) => {
  if (!dragging) {
    return;
  }
  dragging = false;
  const pos = pointerWorld(ev);
  if (pos) {
    setState(withLivePos(state, pos));
    void locateRound(pos.x, pos.y); // final position always gets a round
  }
});

routeBtn.addEventListener("click", async () => {
  try {
    const route = await api.route(fromSelect.value, toSelect.value);
    setState(applyRoute(state, route));
  } catch (err) {
    if (err instanceof ApiError) {
      setState(applyRouteError(state, err.detail));
    } else {
      setState(withBanner(state, `service unreachable: ${describe(err)}`));
    }
  }
});

retryBtn.addEventListener("click", () => {
  setState(withBanner(state, null));
  void loadMap();
});

setState(state);
void loadMap();
