// Gateway wire protocol: one JSON object per message, mirroring the
// relay's line protocol (see ../docs/protocol.md in the repo root).

export type Command = "Stop" | "Left" | "Right" | "Start" | "Forward";

export const COMMANDS: Command[] = ["Stop", "Left", "Right", "Start", "Forward"];

export const KEYS = {
  signals: "Signals",
  speed: "Speed",
  override: "Override",
  manualSignal: "ManualSignal",
  telemetryPrefix: "telemetry/",
} as const;

export interface GatewayRequest {
  op: "set" | "get" | "sub";
  key: string;
  value?: string;
}

export type GatewayReply =
  | { op: "ok"; key: string; seq: number }
  | { op: "value"; key: string; value: string; seq: number }
  | { op: "absent"; key: string }
  | { op: "event"; key: string; value: string; seq: number }
  | { op: "err"; reason: string };

export function parseReply(raw: string): GatewayReply | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const msg = data as Record<string, unknown>;
  switch (msg.op) {
    case "ok":
      if (typeof msg.key === "string" && typeof msg.seq === "number") {
        return { op: "ok", key: msg.key, seq: msg.seq };
      }
      return null;
    case "value":
    case "event":
      if (
        typeof msg.key === "string" &&
        typeof msg.value === "string" &&
        typeof msg.seq === "number"
      ) {
        return { op: msg.op, key: msg.key, value: msg.value, seq: msg.seq };
      }
      return null;
    case "absent":
      return typeof msg.key === "string" ? { op: "absent", key: msg.key } : null;
    case "err":
      return typeof msg.reason === "string" ? { op: "err", reason: msg.reason } : null;
    default:
      return null;
  }
}

export function encodeRequest(req: GatewayRequest): string {
  return JSON.stringify(req);
}

// the slider is the only speed source; it can never produce an
// out-of-range value for the store
export function clampSpeed(v: number): number {
  if (!Number.isFinite(v)) return 0;
  return Math.min(255, Math.max(0, Math.round(v)));
}

export function isCommand(value: string): value is Command {
  return (COMMANDS as string[]).includes(value);
}
