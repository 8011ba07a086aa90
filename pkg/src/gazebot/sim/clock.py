"""Virtual clock with an event heap, integer microseconds.

Everything in the simulation schedules through one clock, so a run is a
pure function of its inputs: no wall time, no thread timing.
"""

from __future__ import annotations

import heapq
from typing import Callable


class VirtualClock:
    def __init__(self):
        self.now_us: int = 0
        self._heap: list[tuple[int, int, Callable[[], None]]] = []
        self._seq = 0  # FIFO tie-break for same-time events

    @property
    def now_ms(self) -> float:
        return self.now_us / 1000.0

    def schedule(self, delay_us: int, callback: Callable[[], None]) -> None:
        if delay_us < 0:
            raise ValueError("cannot schedule into the past")
        self._seq += 1
        heapq.heappush(self._heap, (self.now_us + int(delay_us), self._seq, callback))

    def schedule_ms(self, delay_ms: float, callback: Callable[[], None]) -> None:
        self.schedule(round(delay_ms * 1000), callback)

    def run_until(self, t_us: int) -> None:
        """Execute every event due up to and including t_us."""
        while self._heap and self._heap[0][0] <= t_us:
            when, _, callback = heapq.heappop(self._heap)
            self.now_us = when
            callback()
        self.now_us = max(self.now_us, t_us)

    def run_for_ms(self, ms: float) -> None:
        self.run_until(self.now_us + round(ms * 1000))

    def pending(self) -> int:
        return len(self._heap)
