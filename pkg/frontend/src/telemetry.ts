// Telemetry feed parsing and the pose-trace replay check.

export interface Pose {
  x: number;
  y: number;
  heading: number;
}

export interface WorldGeom {
  bounds: [number, number, number, number];
  circles: [number, number, number][];
  segments: [number, number, number, number][];
}

export interface Telemetry {
  pose: Pose | null;
  speed: number | null;
  mode: string | null;
  blocked: boolean | null;
  reading: string | null;
  lastUpdateMs: number | null; // wall clock of the latest event
}

export function emptyTelemetry(): Telemetry {
  return { pose: null, speed: null, mode: null, blocked: null, reading: null, lastUpdateMs: null };
}

export function parseWorld(blob: string): WorldGeom | null {
  try {
    const data = JSON.parse(blob) as { b?: number[]; c?: number[][]; s?: number[][] };
    if (!Array.isArray(data.b) || data.b.length !== 4) return null;
    return {
      bounds: data.b as [number, number, number, number],
      circles: (data.c ?? []) as [number, number, number][],
      segments: (data.s ?? []) as [number, number, number, number][],
    };
  } catch {
    return null;
  }
}

/** Apply one telemetry/* event; unknown keys are ignored. */
export function applyTelemetry(
  telemetry: Telemetry,
  key: string,
  value: string,
  nowMs: number,
): void {
  switch (key) {
    case "telemetry/pose": {
      const [x, y, heading] = value.split(" ").map(Number);
      if ([x, y, heading].every(Number.isFinite)) {
        telemetry.pose = { x, y, heading };
      }
      break;
    }
    case "telemetry/speed": {
      const speed = Number(value);
      if (Number.isFinite(speed)) telemetry.speed = speed;
      break;
    }
    case "telemetry/mode":
      telemetry.mode = value;
      break;
    case "telemetry/blocked":
      telemetry.blocked = value === "1";
      break;
    case "telemetry/reading":
      telemetry.reading = value;
      break;
    default:
      return; // not a field we track; don't bump freshness
  }
  telemetry.lastUpdateMs = nowMs;
}

export function isStale(telemetry: Telemetry, nowMs: number, limitMs = 2000): boolean {
  return telemetry.lastUpdateMs !== null && nowMs - telemetry.lastUpdateMs > limitMs;
}

/**
 * Replay check: every received telemetry/row must appear byte-for-byte
 * in the run's trajectory log, in order (the feed samples the log).
 */
export function traceMatchesLog(trace: string[], logText: string): boolean {
  const rows = logText.split("\n");
  let i = 0;
  for (const wanted of trace) {
    while (i < rows.length && rows[i] !== wanted) i++;
    if (i === rows.length) return false;
    i++;
  }
  return true;
}
