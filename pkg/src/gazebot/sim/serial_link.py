"""4-byte framed serial link between the poller and the drive controller.

Frame layout: header 0xAA, command byte, speed byte, checksum byte,
where checksum = header XOR command XOR speed. Unknown command bytes and
checksum mismatches are decode errors.
"""

from __future__ import annotations

from collections import deque

from gazebot.debounce import Command
from gazebot.errors import InputError

HEADER = 0xAA

COMMAND_BYTES = {
    Command.STOP: 0x01,
    Command.LEFT: 0x02,
    Command.RIGHT: 0x03,
    Command.START: 0x04,
    Command.FORWARD: 0x05,
}
BYTE_COMMANDS = {v: k for k, v in COMMAND_BYTES.items()}


def serial_encode(cmd: Command, speed: int) -> bytes:
    if not 0 <= speed <= 255:
        raise InputError(f"speed {speed} outside 0..255")
    c = COMMAND_BYTES[Command(cmd)]
    return bytes([HEADER, c, speed, HEADER ^ c ^ speed])


def serial_decode(frame: bytes) -> tuple[Command, int]:
    if len(frame) != 4:
        raise InputError(f"frame must be 4 bytes, got {len(frame)}")
    header, c, speed, checksum = frame
    if header != HEADER:
        raise InputError(f"bad header byte 0x{header:02X}")
    if checksum != (header ^ c ^ speed):
        raise InputError("checksum mismatch")
    if c not in BYTE_COMMANDS:
        raise InputError(f"unknown command byte 0x{c:02X}")
    return BYTE_COMMANDS[c], speed


class SerialLink:
    """Latency-modeled one-way byte link with a bounded pending queue.

    A full queue drops the oldest pending frame (the newest command is
    the one that matters) and counts the drop.
    """

    def __init__(self, clock, latency_us: int, capacity: int = 8):
        self.clock = clock
        self.latency_us = int(latency_us)
        self.capacity = capacity
        self._pending: deque[tuple[int, bytes]] = deque()
        self.dropped = 0

    def send(self, frame: bytes) -> None:
        if len(self._pending) >= self.capacity:
            self._pending.popleft()
            self.dropped += 1
        self._pending.append((self.clock.now_us + self.latency_us, frame))

    def receive_ready(self) -> list[bytes]:
        """Frames whose transfer completed by now, in arrival order."""
        out = []
        while self._pending and self._pending[0][0] <= self.clock.now_us:
            out.append(self._pending.popleft()[1])
        return out
