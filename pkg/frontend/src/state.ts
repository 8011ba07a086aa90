// UI state: everything displayed traces back to a store ack or a
// telemetry event; nothing is assumed.

import { GatewayReply, KEYS } from "./protocol.js";
import {
  Telemetry,
  WorldGeom,
  applyTelemetry,
  emptyTelemetry,
  parseWorld,
} from "./telemetry.js";

export type ConnectionStatus = "connecting" | "connected" | "disconnected";

export interface LogEntry {
  tMs: number;
  kind: "info" | "ack" | "warn" | "error";
  text: string;
}

export interface UiState {
  status: ConnectionStatus;
  override: boolean; // last acknowledged Override value
  overridePending: boolean;
  speed: number; // slider position (an input, not a claim about the bot)
  lastAck: { key: string; seq: number } | null;
  telemetry: Telemetry;
  world: WorldGeom | null;
  trace: string[]; // telemetry/row values, byte-identical log rows
  log: LogEntry[];
}

export function initialState(): UiState {
  return {
    status: "disconnected",
    override: false,
    overridePending: false,
    speed: 128,
    lastAck: null,
    telemetry: emptyTelemetry(),
    world: null,
    trace: [],
    log: [],
  };
}

export function pushLog(state: UiState, kind: LogEntry["kind"], text: string, nowMs: number): void {
  state.log.push({ tMs: nowMs, kind, text });
  if (state.log.length > 200) state.log.splice(0, state.log.length - 200);
}

export function setStatus(state: UiState, status: ConnectionStatus, nowMs: number): void {
  if (state.status !== status) {
    state.status = status;
    pushLog(state, status === "connected" ? "info" : "warn", `connection ${status}`, nowMs);
  }
  if (status !== "connected") {
    state.overridePending = false;
  }
}

/** Track which key each outgoing set targets so acks can be attributed. */
export interface PendingSet {
  key: string;
  value: string;
}

export function applyReply(
  state: UiState,
  reply: GatewayReply,
  pending: PendingSet[],
  nowMs: number,
): void {
  switch (reply.op) {
    case "ok": {
      const match = pending.findIndex((p) => p.key === reply.key);
      const sent = match >= 0 ? pending.splice(match, 1)[0] : null;
      state.lastAck = { key: reply.key, seq: reply.seq };
      pushLog(state, "ack", `${reply.key} acknowledged (seq ${reply.seq})`, nowMs);
      if (sent && sent.key === KEYS.override) {
        state.override = sent.value === "1";
        state.overridePending = false;
      }
      break;
    }
    case "err":
      pending.length = 0;
      state.overridePending = false;
      pushLog(state, "error", `store rejected request: ${reply.reason}`, nowMs);
      break;
    case "event":
      if (reply.key === "telemetry/row") {
        state.trace.push(reply.value);
        if (state.trace.length > 5000) state.trace.splice(0, state.trace.length - 5000);
      } else if (reply.key === "telemetry/world") {
        state.world = parseWorld(reply.value) ?? state.world;
      } else if (reply.key.startsWith(KEYS.telemetryPrefix)) {
        applyTelemetry(state.telemetry, reply.key, reply.value, nowMs);
      }
      break;
    case "value":
      // replies to explicit gets; the world snapshot is the only one used
      if (reply.key === "telemetry/world") {
        state.world = parseWorld(reply.value) ?? state.world;
      }
      break;
    case "absent":
      break;
  }
}

export function commandsEnabled(state: UiState): boolean {
  return state.status === "connected";
}
