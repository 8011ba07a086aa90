// Reconnecting gateway session. Commands issued while disconnected are
// discarded (never queued for late delivery -- a stale Stop or Forward
// arriving seconds later is worse than none).

import { GatewayReply, GatewayRequest, encodeRequest, parseReply } from "./protocol.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onclose: (() => void) | null;
  onerror: (() => void) | null;
  onmessage: ((event: { data: unknown }) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface SessionHandlers {
  onStatus(status: "connecting" | "connected" | "disconnected"): void;
  onReply(reply: GatewayReply): void;
  onDiscard(req: GatewayRequest): void;
}

const BACKOFF_MS = [500, 1000, 2000, 4000, 8000];

export class GatewaySession {
  private socket: SocketLike | null = null;
  private connected = false;
  private attempts = 0;
  private closed = false;
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly url: string,
    private readonly handlers: SessionHandlers,
    private readonly factory: SocketFactory,
    private readonly subscriptions: string[] = ["telemetry/"],
  ) {}

  connect(): void {
    this.closed = false;
    this.open();
  }

  private open(): void {
    this.handlers.onStatus("connecting");
    let socket: SocketLike;
    try {
      socket = this.factory(this.url);
    } catch {
      this.scheduleReconnect();
      return;
    }
    this.socket = socket;
    socket.onopen = () => {
      this.connected = true;
      this.attempts = 0;
      this.handlers.onStatus("connected");
      // re-establish the telemetry feed on every (re)connect
      for (const key of this.subscriptions) {
        socket.send(encodeRequest({ op: "sub", key }));
      }
      socket.send(encodeRequest({ op: "get", key: "telemetry/world" }));
    };
    socket.onmessage = (event) => {
      const reply = parseReply(String(event.data));
      if (reply) this.handlers.onReply(reply);
    };
    socket.onerror = () => {
      // onclose follows; nothing to do here beyond surfacing state
    };
    socket.onclose = () => {
      this.connected = false;
      this.socket = null;
      this.handlers.onStatus("disconnected");
      this.scheduleReconnect();
    };
  }

  private scheduleReconnect(): void {
    if (this.closed) return;
    const delay = BACKOFF_MS[Math.min(this.attempts, BACKOFF_MS.length - 1)];
    this.attempts += 1;
    this.reconnectTimer = setTimeout(() => this.open(), delay);
  }

  /** Send now or drop now; returns whether the request went out. */
  send(req: GatewayRequest): boolean {
    if (!this.connected || this.socket === null) {
      this.handlers.onDiscard(req);
      return false;
    }
    this.socket.send(encodeRequest(req));
    return true;
  }

  close(): void {
    this.closed = true;
    if (this.reconnectTimer !== null) clearTimeout(this.reconnectTimer);
    this.socket?.close();
    this.socket = null;
    this.connected = false;
  }

  get isConnected(): boolean {
    return this.connected;
  }
}
