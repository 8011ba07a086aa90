// Canvas rendering of the live world view.

import { UiState } from "./state.js";
import { isStale } from "./telemetry.js";

const DEFAULT_BOUNDS: [number, number, number, number] = [0, 0, 10, 10];

export function renderWorld(
  ctx: CanvasRenderingContext2D,
  state: UiState,
  nowMs: number,
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#fafafa";
  ctx.fillRect(0, 0, width, height);

  const bounds = state.world?.bounds ?? DEFAULT_BOUNDS;
  const [xmin, ymin, xmax, ymax] = bounds;
  const margin = 14;
  const scale = Math.min(
    (width - 2 * margin) / (xmax - xmin),
    (height - 2 * margin) / (ymax - ymin),
  );
  const toX = (x: number) => margin + (x - xmin) * scale;
  const toY = (y: number) => height - margin - (y - ymin) * scale; // y grows up

  ctx.strokeStyle = "#333";
  ctx.lineWidth = 1.5;
  ctx.strokeRect(toX(xmin), toY(ymax), (xmax - xmin) * scale, (ymax - ymin) * scale);

  ctx.fillStyle = "rgba(200, 60, 60, 0.45)";
  ctx.strokeStyle = "#a33";
  for (const [cx, cy, r] of state.world?.circles ?? []) {
    ctx.beginPath();
    ctx.arc(toX(cx), toY(cy), r * scale, 0, 2 * Math.PI);
    ctx.fill();
  }
  ctx.lineWidth = 3;
  for (const [x1, y1, x2, y2] of state.world?.segments ?? []) {
    ctx.beginPath();
    ctx.moveTo(toX(x1), toY(y1));
    ctx.lineTo(toX(x2), toY(y2));
    ctx.stroke();
  }

  const pose = state.telemetry.pose;
  if (pose) {
    const px = toX(pose.x);
    const py = toY(pose.y);
    const r = Math.max(6, 0.18 * scale);
    // heading triangle
    ctx.save();
    ctx.translate(px, py);
    ctx.rotate(-pose.heading); // canvas y is flipped
    ctx.fillStyle = state.telemetry.mode === "Running" ? "#2a7" : "#777";
    ctx.beginPath();
    ctx.moveTo(r * 1.6, 0);
    ctx.lineTo(-r * 0.8, r * 0.9);
    ctx.lineTo(-r * 0.8, -r * 0.9);
    ctx.closePath();
    ctx.fill();
    ctx.restore();
    // obstacle-guard indicator
    if (state.telemetry.blocked) {
      ctx.strokeStyle = "#d22";
      ctx.lineWidth = 3;
      ctx.beginPath();
      ctx.arc(px, py, r * 2.2, 0, 2 * Math.PI);
      ctx.stroke();
    }
  }

  if (isStale(state.telemetry, nowMs)) {
    ctx.fillStyle = "rgba(180, 30, 30, 0.85)";
    ctx.fillRect(0, 0, width, 26);
    ctx.fillStyle = "#fff";
    ctx.font = "13px system-ui, sans-serif";
    ctx.fillText("telemetry stale (> 2 s old)", 10, 17);
  }
}
