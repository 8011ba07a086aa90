"""Line-oriented TCP front end for the key-value store.

Wire protocol (UTF-8, one newline-terminated message per line):

    SET <key> <value>   ->  OK <seq>
    GET <key>           ->  VALUE <key> <seq> <value>  |  ABSENT <key>
    SUB <key>           ->  OK 0, then asynchronous EVENT <key> <seq> <value>
    anything else       ->  ERR <reason>

Values may contain spaces (the SET parser splits at most twice). A key
ending in "/" subscribes to that prefix. Replies and events for one
connection flow through a single queue, so each subscriber sees its
events in seq order with no duplicates or gaps.
"""

from __future__ import annotations

import asyncio
import threading

from gazebot.errors import ProtocolError
from gazebot.relay.store import KeyValueStore


def _execute(store, text, queue, subs, loop):
    parts = text.split(" ", 2)
    op = parts[0]
    if op == "SET":
        if len(parts) < 3:
            return "ERR SET needs a key and a value"
        try:
            seq = store.set(parts[1], parts[2])
        except ProtocolError as e:
            return f"ERR {e}"
        return f"OK {seq}"
    if op == "GET":
        if len(parts) != 2:
            return "ERR GET needs exactly one key"
        rec = store.get(parts[1])
        if rec is None:
            return f"ABSENT {parts[1]}"
        return f"VALUE {rec.key} {rec.seq} {rec.value}"
    if op == "SUB":
        if len(parts) != 2:
            return "ERR SUB needs exactly one key"
        key = parts[1]

        def on_event(record, _q=queue, _loop=loop):
            _loop.call_soon_threadsafe(
                _q.put_nowait, f"EVENT {record.key} {record.seq} {record.value}"
            )

        try:
            store.subscribe(key, on_event)
        except ProtocolError as e:
            return f"ERR {e}"
        subs.append((key, on_event))
        return "OK 0"
    return f"ERR unknown op {op!r}"


class RelayServer:
    def __init__(self, store: KeyValueStore, host: str = "127.0.0.1", port: int = 0):
        self.store = store
        self.host = host
        self.port = port
        self._server: asyncio.Server | None = None

    async def start(self) -> int:
        self._server = await asyncio.start_server(self._handle, self.host, self.port)
        self.port = self._server.sockets[0].getsockname()[1]
        return self.port

    async def stop(self) -> None:
        if self._server is not None:
            self._server.close()
            await self._server.wait_closed()
            self._server = None

    async def _writer_loop(self, queue: asyncio.Queue, writer: asyncio.StreamWriter):
        try:
            while True:
                line = await queue.get()
                if line is None:  # flush sentinel
                    return
                writer.write(line.encode("utf-8") + b"\n")
                await writer.drain()
        except (ConnectionError, asyncio.CancelledError):
            pass

    async def _handle(self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter):
        loop = asyncio.get_running_loop()
        queue: asyncio.Queue = asyncio.Queue()
        subs: list = []
        writer_task = asyncio.create_task(self._writer_loop(queue, writer))
        try:
            while True:
                try:
                    raw = await reader.readline()
                except (ConnectionError, asyncio.LimitOverrunError):
                    break
                if not raw:
                    break
                try:
                    text = raw.decode("utf-8").rstrip("\r\n")
                except UnicodeDecodeError:
                    await queue.put("ERR invalid utf-8")
                    continue
                if not text:
                    await queue.put("ERR empty line")
                    continue
                await queue.put(_execute(self.store, text, queue, subs, loop))
        finally:
            for key, cb in subs:
                self.store.unsubscribe(key, cb)
            queue.put_nowait(None)  # flush replies already earned, then stop
            try:
                await asyncio.wait_for(writer_task, timeout=2)
            except (asyncio.TimeoutError, asyncio.CancelledError):
                writer_task.cancel()
            try:
                writer.close()
                await writer.wait_closed()
            except (ConnectionError, OSError):
                pass


class RelayServerThread:
    """Run a RelayServer on a dedicated asyncio loop thread.

    Used by tests and by CLI paths that need the relay alongside
    synchronous code. start() blocks until the port is bound.
    """

    def __init__(self, store: KeyValueStore, host: str = "127.0.0.1", port: int = 0):
        self.server = RelayServer(store, host, port)
        self.loop = asyncio.new_event_loop()
        self._thread = threading.Thread(target=self._run, daemon=True)
        self._started = threading.Event()

    def _run(self):
        asyncio.set_event_loop(self.loop)
        self.loop.run_until_complete(self.server.start())
        self._started.set()
        self.loop.run_forever()
        self.loop.run_until_complete(self.server.stop())
        self.loop.close()

    def start(self) -> "RelayServerThread":
        self._thread.start()
        if not self._started.wait(timeout=10):
            raise RuntimeError("relay server failed to start")
        return self

    @property
    def port(self) -> int:
        return self.server.port

    def stop(self) -> None:
        self.loop.call_soon_threadsafe(self.loop.stop)
        self._thread.join(timeout=10)
