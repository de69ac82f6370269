// Canvas rendering: a pure function of ConsoleState.

import type { ConsoleState } from "./state.js";
import { worldToCanvas } from "./state.js";
import type { XY } from "./types.js";

const COLORS = {
  background: "#101418",
  grid: "#1d242b",
  edge: "#3a4754",
  node: "#7d94ab",
  nodeLabel: "#aebdcc",
  transmitter: "#e8a33d",
  route: "#4fc3f7",
  trueMarker: "#53d86a",
  estimate: "#ff5c74",
  errorLine: "#c9d4e0",
};

export function render(state: ConsoleState, canvas: HTMLCanvasElement): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    return;
  }
  const size = { width: canvas.width, height: canvas.height };
  ctx.fillStyle = COLORS.background;
  ctx.fillRect(0, 0, size.width, size.height);
  if (!state.map) {
    ctx.fillStyle = COLORS.nodeLabel;
    ctx.font = "14px system-ui";
    ctx.fillText(state.banner ?? "loading floor data...", 20, 30);
    return;
  }
  const frame = state.map.frame;
  const toPx = (p: XY) => worldToCanvas(frame, size, p);

  // metric grid
  ctx.strokeStyle = COLORS.grid;
  ctx.lineWidth = 1;
  const step = state.map.scenario?.grid_m ?? 1;
  for (let x = 0; x <= frame.width_m + 1e-9; x += step) {
    const a = toPx({ x, y: 0 });
    const b = toPx({ x, y: frame.height_m });
    line(ctx, a, b);
  }
  for (let y = 0; y <= frame.height_m + 1e-9; y += step) {
    line(ctx, toPx({ x: 0, y }), toPx({ x: frame.width_m, y }));
  }

  // graph edges and nodes
  ctx.strokeStyle = COLORS.edge;
  ctx.lineWidth = 2;
  const byId = new Map(state.map.graph.nodes.map((n) => [n.id, n]));
  for (const edge of state.map.graph.edges) {
    const a = byId.get(edge.a);
    const b = byId.get(edge.b);
    if (a?.x != null && a.y != null && b?.x != null && b.y != null) {
      line(ctx, toPx({ x: a.x, y: a.y }), toPx({ x: b.x, y: b.y }));
    }
  }
  ctx.font = "11px system-ui";
  for (const node of state.map.graph.nodes) {
    if (node.x == null || node.y == null) {
      continue;
    }
    const p = toPx({ x: node.x, y: node.y });
    ctx.fillStyle = COLORS.node;
    dot(ctx, p, 4);
    ctx.fillStyle = COLORS.nodeLabel;
    ctx.fillText(node.id, p.x + 6, p.y - 6);
  }

  // route polyline
  if (state.route && state.route.points.length > 0) {
    ctx.strokeStyle = COLORS.route;
    ctx.lineWidth = 3;
    ctx.beginPath();
    state.route.points.forEach((point, i) => {
      const p = toPx(point);
      if (i === 0) {
        ctx.moveTo(p.x, p.y);
      } else {
        ctx.lineTo(p.x, p.y);
      }
    });
    ctx.stroke();
    const last = state.route.points[state.route.points.length - 1];
    if (last) {
      const p = toPx(last);
      ctx.fillStyle = COLORS.route;
      ctx.fillText(state.route.label, p.x + 8, p.y + 12);
    }
  }

  // transmitters
  if (state.map.scenario) {
    ctx.fillStyle = COLORS.transmitter;
    for (const tx of state.map.scenario.transmitters) {
      const p = toPx({ x: tx.x, y: tx.y });
      triangle(ctx, p, 7);
      ctx.fillText(tx.ap_name, p.x + 8, p.y + 4);
    }
  }

  // error line between true and estimated markers
  if (state.truePos && state.estimate) {
    ctx.strokeStyle = COLORS.errorLine;
    ctx.setLineDash([4, 4]);
    ctx.lineWidth = 1;
    line(ctx, toPx(state.truePos), toPx(state.estimate));
    ctx.setLineDash([]);
  }

  // markers: live position, last round's true echo, estimate
  const markerPos = state.livePos ?? state.truePos;
  if (markerPos) {
    ctx.fillStyle = COLORS.trueMarker;
    dot(ctx, toPx(markerPos), 6);
  }
  if (state.estimate) {
    ctx.strokeStyle = COLORS.estimate;
    ctx.lineWidth = 2;
    cross(ctx, toPx(state.estimate), 7);
  }
}

function line(ctx: CanvasRenderingContext2D, a: XY, b: XY): void {
  ctx.beginPath();
  ctx.moveTo(a.x, a.y);
  ctx.lineTo(b.x, b.y);
  ctx.stroke();
}

function dot(ctx: CanvasRenderingContext2D, p: XY, r: number): void {
  ctx.beginPath();
  ctx.arc(p.x, p.y, r, 0, 2 * Math.PI);
  ctx.fill();
}

function cross(ctx: CanvasRenderingContext2D, p: XY, r: number): void {
  ctx.beginPath();
  ctx.moveTo(p.x - r, p.y - r);
  ctx.lineTo(p.x + r, p.y + r);
  ctx.moveTo(p.x - r, p.y + r);
  ctx.lineTo(p.x + r, p.y - r);
  ctx.stroke();
}

function triangle(ctx: CanvasRenderingContext2D, p: XY, r: number): void {
  ctx.beginPath();
  ctx.moveTo(p.x, p.y - r);
  ctx.lineTo(p.x + r, p.y + r);
  ctx.lineTo(p.x - r, p.y + r);
  ctx.closePath();
  ctx.fill();
}
