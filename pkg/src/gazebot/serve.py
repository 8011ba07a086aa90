"""Long-running session: relay server + browser gateway + a live
simulation whose virtual clock tracks wall time.

The simulated bot takes its commands from the shared store exactly like
the scripted runner, so anything that writes the well-known keys (the
override UI through the gateway, a classifier process through TCP, or a
test client) steers it live. Telemetry is published back under
"telemetry/" at the configured rate.
"""

from __future__ import annotations

import asyncio
import threading
import time
from pathlib import Path
from typing import Optional

from gazebot.config import RunConfig
from gazebot.relay.gateway import Gateway
from gazebot.relay.server import RelayServer
from gazebot.relay.store import KeyValueStore
from gazebot.sim.bot import BotState
from gazebot.sim.clock import VirtualClock
from gazebot.sim.runner import TRAJECTORY_HEADER, ControlChain
from gazebot.sim.scenario import Scenario


class ServeSession:
    def __init__(
        self,
        config: Optional[RunConfig] = None,
        scenario: Optional[Scenario] = None,
        host: str = "127.0.0.1",
        relay_port: int = 0,
        gateway_port: int = 0,
        log_path=None,
        out_dir=None,
        time_scale: float = 1.0,
    ):
        self.config = config if config is not None else RunConfig()
        self.scenario = scenario if scenario is not None else Scenario()
        self.host = host
        self.time_scale = time_scale
        self.out_dir = Path(out_dir) if out_dir else None

        self.clock = VirtualClock()
        self.store = KeyValueStore(clock=lambda: self.clock.now_ms, log_path=log_path)
        x0, y0, h0 = self.scenario.bot_start
        self.bot = BotState(x=x0, y=y0, heading=h0)
        self.chain = ControlChain(
            self.clock, self.store, self.scenario.world, self.bot, self.config
        )

        self.relay = RelayServer(self.store, host, relay_port)
        self.gateway = Gateway(self.store, host, gateway_port)
        self.loop = asyncio.new_event_loop()
        self._net_thread = threading.Thread(target=self._run_loop, daemon=True)
        self._sim_thread = threading.Thread(target=self._run_sim, daemon=True)
        self._ready = threading.Event()
        self._stop = threading.Event()

    # -- lifecycle --------------------------------------------------------

    def _run_loop(self):
        asyncio.set_event_loop(self.loop)
        self.loop.run_until_complete(self.relay.start())
        self.loop.run_until_complete(self.gateway.start())
        self._ready.set()
        self.loop.run_forever()
        self.loop.run_until_complete(self.gateway.stop())
        self.loop.run_until_complete(self.relay.stop())
        self.loop.close()

    def _run_sim(self):
        tick_s = self.config.tick_ms / 1000.0 / self.time_scale
        next_wall = time.monotonic()
        self.chain.start()
        while not self._stop.is_set():
            self.clock.run_for_ms(self.config.tick_ms)
            next_wall += tick_s
            delay = next_wall - time.monotonic()
            if delay > 0:
                time.sleep(delay)
            else:
                next_wall = time.monotonic()  # fell behind; don't spiral

    def start(self) -> "ServeSession":
        self._net_thread.start()
        if not self._ready.wait(timeout=10):
            raise RuntimeError("serve session failed to start")
        self._sim_thread.start()
        return self

    def stop(self) -> None:
        self._stop.set()
        self._sim_thread.join(timeout=10)
        self.loop.call_soon_threadsafe(self.loop.stop)
        self._net_thread.join(timeout=10)
        if self.out_dir is not None:
            self.out_dir.mkdir(parents=True, exist_ok=True)
            (self.out_dir / "trajectory.tsv").write_text(self.trajectory_tsv())
        self.store.close()  # flushes the append log

    # -- inspection --------------------------------------------------------

    @property
    def relay_port(self) -> int:
        return self.relay.port

    @property
    def gateway_url(self) -> str:
        return f"ws://{self.host}:{self.gateway.port}"

    def trajectory_tsv(self) -> str:
        return "\n".join([TRAJECTORY_HEADER, *self.chain.trajectory]) + "\n"
