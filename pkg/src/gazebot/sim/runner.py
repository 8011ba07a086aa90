"""End-to-end scenario execution: scripted gaze stream -> debouncer ->
relay -> poller -> serial link -> drive controller -> world, all on one
virtual clock, with trajectory, command and latency capture."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional

from gazebot.classes import GazeClass
from gazebot.config import RunConfig
from gazebot.debounce import Command, Debouncer
from gazebot.relay.commands import WellKnownKeys
from gazebot.relay.store import KeyValueStore
from gazebot.sim.bot import BotState
from gazebot.sim.clock import VirtualClock
from gazebot.sim.firmware import DriveController, RelayPoller
from gazebot.sim.scenario import Scenario
from gazebot.sim.serial_link import SerialLink
from gazebot.sim.world import World

POLLED_KEYS = (
    WellKnownKeys.SIGNALS,
    WellKnownKeys.SPEED,
    WellKnownKeys.OVERRIDE,
    WellKnownKeys.MANUAL_SIGNAL,
)

TRAJECTORY_HEADER = "t_ms\tx\ty\theading\tspeed\tmode\tblocked"


def format_trajectory_row(t_ms, x, y, heading, speed, mode, blocked) -> str:
    return (
        f"{t_ms:.1f}\t{x:.6f}\t{y:.6f}\t{heading:.6f}\t{speed}\t"
        f"{mode.value}\t{int(blocked)}"
    )


class ControlChain:
    """Relay poller, serial link, drive controller and telemetry publisher
    wired onto one clock. Both the scenario runner and the live serve
    session use this, so their trajectory rows are byte-identical."""

    def __init__(
        self,
        clock: VirtualClock,
        store: KeyValueStore,
        world: World,
        bot: BotState,
        config: RunConfig,
        store_view: Optional[Callable[[], Optional[dict]]] = None,
        on_apply: Optional[Callable[[Command, int], None]] = None,
        diagnostics: Optional[list] = None,
    ):
        self.clock = clock
        self.store = store
        self.world = world
        self.bot = bot
        self.config = config
        self.trajectory: list[str] = []
        self.diagnostics = diagnostics if diagnostics is not None else []
        self.link = SerialLink(clock, round(config.serial_ms * 1000), config.link_capacity)
        self.poller = RelayPoller(
            clock,
            store_view if store_view is not None else (lambda: store.snapshot(POLLED_KEYS)),
            self.link,
            poll_us=round(config.poll_ms * 1000),
            failsafe_us=round(config.failsafe_ms * 1000),
            diagnostics=self.diagnostics,
        )
        self.controller = DriveController(
            clock,
            bot,
            world,
            self.link,
            tick_us=round(config.tick_ms * 1000),
            ramp_rate=config.ramp_rate,
            threshold_cm=config.threshold_cm,
            v_max=config.v_max,
            omega_deg_s=config.omega_deg_s,
            max_range_m=config.max_range_m,
            sensor_mode=config.sensor_mode,
            on_apply=on_apply,
            on_tick=self._on_tick,
            diagnostics=self.diagnostics,
        )

    def _on_tick(self, state: BotState) -> None:
        self.trajectory.append(
            format_trajectory_row(
                self.clock.now_ms,
                state.x,
                state.y,
                state.heading,
                state.speed,
                state.mode,
                state.obstacle_blocked,
            )
        )

    def _publish_telemetry(self) -> None:
        bot = self.bot
        self.store.set("telemetry/pose", f"{bot.x:.6f} {bot.y:.6f} {bot.heading:.6f}")
        self.store.set("telemetry/speed", str(bot.speed))
        self.store.set("telemetry/mode", bot.mode.value)
        self.store.set("telemetry/blocked", str(int(bot.obstacle_blocked)))
        reading = self.controller.last_reading
        self.store.set(
            "telemetry/reading",
            "TIMEOUT" if reading is None or reading.timed_out else f"{reading.distance_cm:.1f}",
        )
        if self.trajectory:
            self.store.set("telemetry/row", self.trajectory[-1])
        self.clock.schedule_ms(1000.0 / self.config.telemetry_hz, self._publish_telemetry)

    def start(self) -> None:
        # one-time world geometry for renderers (compact, fits the value cap)
        world_blob = json.dumps(
            {
                "b": list(self.world.bounds),
                "c": [[c.cx, c.cy, c.r] for c in self.world.circles],
                "s": [[s.x1, s.y1, s.x2, s.y2] for s in self.world.segments],
            },
            separators=(",", ":"),
        )
        if len(world_blob.encode()) <= 256:
            self.store.set("telemetry/world", world_blob)
        self.poller.start()
        self.controller.start()
        self.clock.schedule_ms(1000.0 / self.config.telemetry_hz, self._publish_telemetry)


@dataclass
class SimResult:
    trajectory: list[str] = field(default_factory=list)
    emissions: list[tuple[float, str]] = field(default_factory=list)
    applies: list[tuple[float, str]] = field(default_factory=list)
    latencies_ms: list[float] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)
    dropped_frames: int = 0
    final_state: Optional[BotState] = None
    config: dict = field(default_factory=dict)

    def trajectory_tsv(self) -> str:
        return "\n".join([TRAJECTORY_HEADER, *self.trajectory]) + "\n"

    def commands_tsv(self) -> str:
        rows = [(t, "emit", c) for t, c in self.emissions]
        rows += [(t, "apply", c) for t, c in self.applies]
        rows.sort(key=lambda r: (r[0], 0 if r[1] == "emit" else 1))
        lines = ["t_ms\tstage\tcommand"] + [f"{t:.1f}\t{s}\t{c}" for t, s, c in rows]
        return "\n".join(lines) + "\n"

    def median_latency_ms(self) -> Optional[float]:
        if not self.latencies_ms:
            return None
        vals = sorted(self.latencies_ms)
        n = len(vals)
        mid = n // 2
        return vals[mid] if n % 2 else (vals[mid - 1] + vals[mid]) / 2.0

    def displacement(self) -> float:
        if self.final_state is None or not self.trajectory:
            return 0.0
        first = self.trajectory[0].split("\t")
        dx = self.final_state.x - float(first[1])
        dy = self.final_state.y - float(first[2])
        return (dx * dx + dy * dy) ** 0.5


def run_scenario(
    scenario: Scenario, config: RunConfig, store: Optional[KeyValueStore] = None
) -> SimResult:
    """Run a scenario to its horizon; deterministic for identical inputs."""
    config = config.with_overrides(**scenario.config_overrides)
    result = SimResult(config=config.to_dict())

    clock = VirtualClock()
    if store is None:
        store = KeyValueStore(clock=lambda: clock.now_ms)
    x0, y0, h0 = scenario.bot_start
    bot = BotState(x=x0, y=y0, heading=h0)

    # scripted relay writes
    for t_ms, key, value in scenario.relay_script:
        clock.schedule_ms(t_ms, lambda k=key, v=value: store.set(k, v))

    # emit -> motor-target latency, matched per command in FIFO order
    unmatched: list[tuple[float, str]] = []

    def record_emission(cmd: Command) -> None:
        item = (clock.now_ms, cmd.label)
        result.emissions.append(item)
        unmatched.append(item)

    # scripted gaze stream through the debouncer
    debouncer = Debouncer(n_frames=config.n_frames)
    stream: list[GazeClass] = []
    for gaze, count in scenario.gaze_script:
        stream.extend([gaze] * count)

    def push_frame(i: int) -> None:
        cmd = debouncer.push(stream[i])
        if cmd is not None:
            record_emission(cmd)
            store.set(WellKnownKeys.SIGNALS, cmd.label)
        if i + 1 < len(stream):
            clock.schedule_ms(config.frame_period_ms, lambda: push_frame(i + 1))

    if stream:
        clock.schedule_ms(config.frame_period_ms, lambda: push_frame(0))

    # relay view with scripted outage windows
    def store_view() -> Optional[dict]:
        t = clock.now_ms
        for t0, t1 in scenario.relay_outages:
            if t0 <= t < t1:
                return None
        return store.snapshot(POLLED_KEYS)

    def on_apply(cmd: Command, speed: int) -> None:
        now = clock.now_ms
        result.applies.append((now, cmd.label))
        for j, (t_emit, label) in enumerate(unmatched):
            if label == cmd.label:
                result.latencies_ms.append(now - t_emit)
                del unmatched[j]
                break

    chain = ControlChain(
        clock,
        store,
        scenario.world,
        bot,
        config,
        store_view=store_view,
        on_apply=on_apply,
        diagnostics=result.diagnostics,
    )
    result.trajectory = chain.trajectory
    chain.start()

    clock.run_until(round(scenario.duration_ms * 1000))

    result.dropped_frames = chain.link.dropped
    result.final_state = bot
    return result
