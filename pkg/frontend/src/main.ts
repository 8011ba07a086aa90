// DOM wiring: controls on the left, live world view on the right.
// Every command is an explicit click; nothing auto-repeats.

import { COMMANDS, Command, KEYS, clampSpeed } from "./protocol.js";
import { GatewaySession, SocketFactory, SocketLike } from "./socket.js";
import { PendingSet, applyReply, commandsEnabled, initialState, pushLog, setStatus } from "./state.js";
import { renderWorld } from "./render.js";

const state = initialState();
const pending: PendingSet[] = [];
let session: GatewaySession | null = null;

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const statusEl = $("status");
const seqEl = $("last-ack");
const logEl = $("log");
const canvas = $("world") as unknown as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const overrideEl = $("override") as unknown as HTMLInputElement;
const speedEl = $("speed") as unknown as HTMLInputElement;
const speedValueEl = $("speed-value");
const urlEl = $("gateway-url") as unknown as HTMLInputElement;

function sendSet(key: string, value: string): void {
  if (!session) return;
  if (session.send({ op: "set", key, value })) {
    pending.push({ key, value });
  }
}

function sendCommand(cmd: Command): void {
  if (!state.override) {
    pushLog(state, "warn", `not in control: enable override before sending ${cmd}`, Date.now());
    return;
  }
  sendSet(KEYS.manualSignal, cmd);
}

// adapt the browser WebSocket to the injectable SocketLike surface
const browserSocket: SocketFactory = (url) => {
  const ws = new WebSocket(url);
  const adapter: SocketLike = {
    send: (data) => ws.send(data),
    close: () => ws.close(),
    onopen: null,
    onclose: null,
    onerror: null,
    onmessage: null,
  };
  ws.onopen = () => adapter.onopen?.();
  ws.onclose = () => adapter.onclose?.();
  ws.onerror = () => adapter.onerror?.();
  ws.onmessage = (ev) => adapter.onmessage?.({ data: ev.data });
  return adapter;
};

function connect(): void {
  session?.close();
  session = new GatewaySession(
    urlEl.value,
    {
      onStatus: (s) => setStatus(state, s, Date.now()),
      onReply: (reply) => applyReply(state, reply, pending, Date.now()),
      onDiscard: (req) =>
        pushLog(state, "warn", `disconnected: discarded ${req.op} ${req.key}`, Date.now()),
    },
    browserSocket,
  );
  session.connect();
}

$("connect").addEventListener("click", connect);

for (const cmd of COMMANDS) {
  $(`cmd-${cmd.toLowerCase()}`).addEventListener("click", () => sendCommand(cmd as Command));
}

overrideEl.addEventListener("change", () => {
  state.overridePending = true;
  sendSet(KEYS.override, overrideEl.checked ? "1" : "0");
});

speedEl.addEventListener("input", () => {
  state.speed = clampSpeed(Number(speedEl.value));
  speedValueEl.textContent = String(state.speed);
});
speedEl.addEventListener("change", () => {
  sendSet(KEYS.speed, String(clampSpeed(Number(speedEl.value))));
});

function refresh(): void {
  const now = Date.now();
  statusEl.textContent = state.status;
  statusEl.className = `pill ${state.status}`;
  seqEl.textContent = state.lastAck ? `${state.lastAck.key} #${state.lastAck.seq}` : "-";
  const enabled = commandsEnabled(state);
  for (const cmd of COMMANDS) {
    ($(`cmd-${cmd.toLowerCase()}`) as unknown as HTMLButtonElement).disabled = !enabled;
  }
  overrideEl.disabled = state.status !== "connected" || state.overridePending;
  if (!state.overridePending) overrideEl.checked = state.override;

  const t = state.telemetry;
  $("t-mode").textContent = t.mode ?? "-";
  $("t-speed").textContent = t.speed === null ? "-" : String(t.speed);
  $("t-reading").textContent = t.reading ?? "-";
  $("t-pose").textContent = t.pose
    ? `${t.pose.x.toFixed(2)}, ${t.pose.y.toFixed(2)} @ ${t.pose.heading.toFixed(2)} rad`
    : "-";

  const items = state.log.slice(-12).reverse();
  logEl.innerHTML = items
    .map((e) => `<li class="${e.kind}">${new Date(e.tMs).toLocaleTimeString()} ${e.text}</li>`)
    .join("");

  renderWorld(ctx, state, now, canvas.width, canvas.height);
  requestAnimationFrame(refresh);
}

requestAnimationFrame(refresh);
