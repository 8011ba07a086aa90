"""Blocking single-connection relay client.

One socket carries both command replies and subscription events; reply
reads park any interleaved EVENT lines on an internal queue that
next_event() drains first.
"""

from __future__ import annotations

import socket
import time
from collections import deque
from typing import Optional

from gazebot.errors import ProtocolError
from gazebot.relay.store import RelayRecord


class RelayClient:
    def __init__(self, host: str, port: int, timeout: float = 5.0):
        self._sock = socket.create_connection((host, port), timeout=timeout)
        self._file = self._sock.makefile("rb")
        self._timeout = timeout
        self._pending_events: deque[RelayRecord] = deque()

    # -- wire helpers ---------------------------------------------------

    def _send(self, line: str) -> None:
        self._sock.sendall(line.encode("utf-8") + b"\n")

    def _read_line(self) -> str:
        raw = self._file.readline()
        if not raw:
            raise ConnectionError("relay connection closed")
        return raw.decode("utf-8").rstrip("\r\n")

    @staticmethod
    def _parse_event(line: str) -> RelayRecord:
        _, key, seq, value = line.split(" ", 3)
        return RelayRecord(key, value, int(seq), time.monotonic() * 1000.0)

    def _read_reply(self) -> str:
        while True:
            line = self._read_line()
            if line.startswith("EVENT "):
                self._pending_events.append(self._parse_event(line))
                continue
            if line.startswith("ERR "):
                raise ProtocolError(line[4:])
            return line

    # -- operations -----------------------------------------------------

    def set(self, key: str, value: str) -> int:
        self._send(f"SET {key} {value}")
        reply = self._read_reply()
        if not reply.startswith("OK "):
            raise ProtocolError(f"unexpected reply to SET: {reply}")
        return int(reply[3:])

    def get(self, key: str) -> Optional[RelayRecord]:
        self._send(f"GET {key}")
        reply = self._read_reply()
        if reply.startswith("ABSENT "):
            return None
        if reply.startswith("VALUE "):
            _, rkey, seq, value = reply.split(" ", 3)
            return RelayRecord(rkey, value, int(seq), time.monotonic() * 1000.0)
        raise ProtocolError(f"unexpected reply to GET: {reply}")

    def subscribe(self, key: str) -> None:
        self._send(f"SUB {key}")
        reply = self._read_reply()
        if reply != "OK 0":
            raise ProtocolError(f"unexpected reply to SUB: {reply}")

    def next_event(self, timeout: Optional[float] = None) -> Optional[RelayRecord]:
        """Next subscription event, or None when the timeout lapses."""
        if self._pending_events:
            return self._pending_events.popleft()
        self._sock.settimeout(timeout if timeout is not None else self._timeout)
        try:
            line = self._read_line()
        except socket.timeout:
            return None
        finally:
            self._sock.settimeout(self._timeout)
        if line.startswith("EVENT "):
            return self._parse_event(line)
        if line.startswith("ERR "):
            raise ProtocolError(line[4:])
        raise ProtocolError(f"unexpected line while waiting for events: {line}")

    def send_raw(self, line: str) -> str:
        """One raw request line -> its reply line, ERR included (for protocol tests)."""
        self._send(line)
        while True:
            reply = self._read_line()
            if reply.startswith("EVENT "):
                self._pending_events.append(self._parse_event(reply))
                continue
            return reply

    def close(self) -> None:
        try:
            self._file.close()
            self._sock.close()
        except OSError:
            pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
