"""Browser gateway: the relay verbs over a WebSocket, one JSON object per
protocol line.

Client -> gateway:   {"op": "set", "key": K, "value": V}
                     {"op": "get", "key": K}
                     {"op": "sub", "key": K}        # K may end in "/" (prefix)
Gateway -> client:   {"op": "ok", "key": K, "seq": N}
                     {"op": "value", "key": K, "value": V, "seq": N}
                     {"op": "absent", "key": K}
                     {"op": "event", "key": K, "value": V, "seq": N}
                     {"op": "err", "reason": R}

Subscribing to "telemetry/" yields the live bot feed published by the
simulator. Schema details in docs/protocol.md.
"""

from __future__ import annotations

import asyncio
import json

from websockets.asyncio.server import serve

from gazebot.errors import ProtocolError
from gazebot.relay.store import KeyValueStore


def _handle_message(store, msg: dict, queue, subs, loop) -> dict:
    op = msg.get("op")
    key = msg.get("key")
    if not isinstance(key, str) or not key:
        return {"op": "err", "reason": "missing key"}
    if op == "set":
        value = msg.get("value")
        if not isinstance(value, str):
            return {"op": "err", "reason": "missing value"}
        try:
            seq = store.set(key, value)
        except ProtocolError as e:
            return {"op": "err", "reason": str(e)}
        return {"op": "ok", "key": key, "seq": seq}
    if op == "get":
        rec = store.get(key)
        if rec is None:
            return {"op": "absent", "key": key}
        return {"op": "value", "key": rec.key, "value": rec.value, "seq": rec.seq}
    if op == "sub":

        def on_event(record, _q=queue, _loop=loop):
            _loop.call_soon_threadsafe(
                _q.put_nowait,
                {"op": "event", "key": record.key, "value": record.value, "seq": record.seq},
            )

        try:
            store.subscribe(key, on_event)
        except ProtocolError as e:
            return {"op": "err", "reason": str(e)}
        subs.append((key, on_event))
        return {"op": "ok", "key": key, "seq": 0}
    return {"op": "err", "reason": f"unknown op {op!r}"}


class Gateway:
    def __init__(self, store: KeyValueStore, host: str = "127.0.0.1", port: int = 0):
        self.store = store
        self.host = host
        self.port = port
        self._server = None

    async def start(self) -> int:
        self._server = await serve(self._handle, self.host, self.port)
        self.port = next(iter(self._server.sockets)).getsockname()[1]
        return self.port

    async def stop(self) -> None:
        if self._server is not None:
            self._server.close()
            await self._server.wait_closed()
            self._server = None

    async def _sender_loop(self, queue: asyncio.Queue, websocket):
        try:
            while True:
                payload = await queue.get()
                if payload is None:  # flush sentinel
                    return
                await websocket.send(json.dumps(payload))
        except asyncio.CancelledError:
            pass
        except Exception:
            pass  # connection went away; receiver loop ends the session

    async def _handle(self, websocket):
        loop = asyncio.get_running_loop()
        queue: asyncio.Queue = asyncio.Queue()
        subs: list = []
        sender = asyncio.create_task(self._sender_loop(queue, websocket))
        try:
            async for message in websocket:
                try:
                    msg = json.loads(message)
                    if not isinstance(msg, dict):
                        raise ValueError("not an object")
                except ValueError:
                    await queue.put({"op": "err", "reason": "malformed json"})
                    continue
                await queue.put(_handle_message(self.store, msg, queue, subs, loop))
        finally:
            for key, cb in subs:
                self.store.unsubscribe(key, cb)
            queue.put_nowait(None)  # flush what was earned, then stop
            try:
                await asyncio.wait_for(sender, timeout=2)
            except (asyncio.TimeoutError, asyncio.CancelledError):
                sender.cancel()
