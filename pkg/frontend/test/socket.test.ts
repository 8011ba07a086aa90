import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { GatewayReply, GatewayRequest } from "../src/protocol.js";
import { GatewaySession, SocketLike } from "../src/socket.js";

class FakeSocket implements SocketLike {
  sent: string[] = [];
  closed = false;
  onopen: (() => void) | null = null;
  onclose: (() => void) | null = null;
  onerror: (() => void) | null = null;
  onmessage: ((event: { data: unknown }) => void) | null = null;

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
    this.onclose?.();
  }
}

function harness() {
  const sockets: FakeSocket[] = [];
  const statuses: string[] = [];
  const replies: GatewayReply[] = [];
  const discarded: GatewayRequest[] = [];
  const session = new GatewaySession(
    "ws://test",
    {
      onStatus: (s) => statuses.push(s),
      onReply: (r) => replies.push(r),
      onDiscard: (req) => discarded.push(req),
    },
    () => {
      const s = new FakeSocket();
      sockets.push(s);
      return s;
    },
  );
  return { session, sockets, statuses, replies, discarded };
}

describe("GatewaySession", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("surfaces the connect lifecycle", () => {
    const h = harness();
    h.session.connect();
    expect(h.statuses).toEqual(["connecting"]);
    h.sockets[0].onopen?.();
    expect(h.statuses).toEqual(["connecting", "connected"]);
    expect(h.session.isConnected).toBe(true);
  });

  it("subscribes to telemetry and fetches the world on every open", () => {
    const h = harness();
    h.session.connect();
    h.sockets[0].onopen?.();
    expect(h.sockets[0].sent.map((s) => JSON.parse(s))).toEqual([
      { op: "sub", key: "telemetry/" },
      { op: "get", key: "telemetry/world" },
    ]);
  });

  it("discards commands while disconnected instead of queueing", () => {
    const h = harness();
    h.session.connect(); // connecting, not yet open
    const ok = h.session.send({ op: "set", key: "ManualSignal", value: "Stop" });
    expect(ok).toBe(false);
    expect(h.discarded).toHaveLength(1);
    h.sockets[0].onopen?.();
    // nothing leaked out after connecting
    const sentOps = h.sockets[0].sent.map((s) => JSON.parse(s).op);
    expect(sentOps).not.toContain("set");
  });

  it("reconnects with backoff and resubscribes", () => {
    const h = harness();
    h.session.connect();
    h.sockets[0].onopen?.();
    h.sockets[0].onclose?.(); // drop
    expect(h.statuses.at(-1)).toBe("disconnected");
    expect(h.sockets).toHaveLength(1);
    vi.advanceTimersByTime(499);
    expect(h.sockets).toHaveLength(1);
    vi.advanceTimersByTime(1); // first retry after 500 ms
    expect(h.sockets).toHaveLength(2);
    h.sockets[1].onclose?.(); // retry fails
    vi.advanceTimersByTime(1000); // second retry after 1000 ms
    expect(h.sockets).toHaveLength(3);
    h.sockets[2].onopen?.();
    expect(JSON.parse(h.sockets[2].sent[0])).toEqual({ op: "sub", key: "telemetry/" });
    expect(h.session.isConnected).toBe(true);
  });

  it("parses replies and drops noise", () => {
    const h = harness();
    h.session.connect();
    h.sockets[0].onopen?.();
    h.sockets[0].onmessage?.({ data: '{"op":"ok","key":"Speed","seq":2}' });
    h.sockets[0].onmessage?.({ data: "garbage" });
    expect(h.replies).toEqual([{ op: "ok", key: "Speed", seq: 2 }]);
  });

  it("close() stops reconnecting", () => {
    const h = harness();
    h.session.connect();
    h.sockets[0].onopen?.();
    h.session.close();
    vi.advanceTimersByTime(60_000);
    expect(h.sockets).toHaveLength(1);
    expect(h.session.isConnected).toBe(false);
  });
});
