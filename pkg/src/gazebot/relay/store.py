"""In-memory last-writer-wins store with per-key sequence numbers.

All writes to a key serialize through one lock, so every observer sees
the same seq order. Subscriber callbacks run under that lock and must
not block; the TCP server and gateway hand events off to per-connection
queues immediately.

Keys ending in "/" subscribe to a prefix (used for the telemetry feed).
"""

from __future__ import annotations

import threading
import time
from typing import Callable, NamedTuple, Optional

from gazebot.errors import ProtocolError

MAX_VALUE_BYTES = 256


class RelayRecord(NamedTuple):
    key: str
    value: str
    seq: int
    timestamp_ms: float


def validate_key(key: str) -> None:
    if not key:
        raise ProtocolError("empty key")
    if any(ch in key for ch in (" ", "\n", "\r", "\t")):
        raise ProtocolError("key must not contain whitespace")


def validate_value(value: str) -> None:
    if len(value.encode("utf-8")) > MAX_VALUE_BYTES:
        raise ProtocolError(f"value exceeds {MAX_VALUE_BYTES} bytes")
    if "\n" in value or "\r" in value:
        raise ProtocolError("value must not contain newlines")


class KeyValueStore:
    def __init__(self, clock: Optional[Callable[[], float]] = None, log_path=None):
        self._records: dict[str, RelayRecord] = {}
        self._subs: dict[str, list[Callable[[RelayRecord], None]]] = {}
        self._prefix_subs: list[tuple[str, Callable[[RelayRecord], None]]] = []
        self._lock = threading.Lock()
        self._t0 = time.monotonic()
        self._clock = clock if clock is not None else self._wall_ms
        self._log = open(log_path, "a", encoding="utf-8") if log_path else None

    def _wall_ms(self) -> float:
        return (time.monotonic() - self._t0) * 1000.0

    def set(self, key: str, value: str) -> int:
        validate_key(key)
        validate_value(value)
        with self._lock:
            prev = self._records.get(key)
            seq = (prev.seq + 1) if prev else 1
            record = RelayRecord(key, value, seq, self._clock())
            self._records[key] = record
            if self._log:
                self._log.write(f"{record.timestamp_ms:.3f}\tSET\t{key}\t{seq}\t{value}\n")
                self._log.flush()
            for cb in self._subs.get(key, ()):
                cb(record)
            for prefix, cb in self._prefix_subs:
                if key.startswith(prefix):
                    cb(record)
        return seq

    def get(self, key: str) -> Optional[RelayRecord]:
        with self._lock:
            return self._records.get(key)

    def snapshot(self, keys) -> dict[str, str]:
        """Current values of the given keys; absent keys are omitted."""
        with self._lock:
            return {k: self._records[k].value for k in keys if k in self._records}

    def subscribe(self, key: str, callback: Callable[[RelayRecord], None]) -> None:
        """Deliver every subsequent set on key (or prefix "x/") in seq order."""
        validate_key(key)
        with self._lock:
            if key.endswith("/"):
                self._prefix_subs.append((key, callback))
            else:
                self._subs.setdefault(key, []).append(callback)

    def unsubscribe(self, key: str, callback) -> None:
        with self._lock:
            if key.endswith("/"):
                self._prefix_subs = [
                    (p, cb) for p, cb in self._prefix_subs if not (p == key and cb is callback)
                ]
            elif key in self._subs and callback in self._subs[key]:
                self._subs[key].remove(callback)

    def close(self) -> None:
        if self._log:
            self._log.close()
            self._log = None
