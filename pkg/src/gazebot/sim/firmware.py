"""Firmware roles on the virtual clock.

RelayPoller plays the Wi-Fi module: every poll interval it snapshots the
relay, arbitrates a command, and pushes a serial frame down the link;
when the relay stays unreachable past the failsafe window it pushes
(Stop, 0) instead.

DriveController plays the motor side: it consumes frames each tick,
ramps the speed toward its target, steps the kinematics, and keeps a
continuous ultrasonic ping cycle running that feeds the obstacle guard
the instant each echo lands.
"""

from __future__ import annotations

from typing import Callable, Optional

from gazebot.debounce import Command
from gazebot.errors import InputError
from gazebot.relay.commands import select_command
from gazebot.sim.bot import (
    BotState,
    Mode,
    apply_command,
    motor_ramp,
    obstacle_guard,
    ramp_target,
    step,
)
from gazebot.sim.clock import VirtualClock
from gazebot.sim.serial_link import SerialLink, serial_decode, serial_encode
from gazebot.sim.ultrasonic import TIMEOUT_US, TRIGGER_US, ultrasonic_measure
from gazebot.sim.world import World


class RelayPoller:
    def __init__(
        self,
        clock: VirtualClock,
        store_view: Callable[[], Optional[dict]],
        link: SerialLink,
        poll_us: int,
        failsafe_us: int,
        diagnostics: Optional[list] = None,
    ):
        self.clock = clock
        self.store_view = store_view
        self.link = link
        self.poll_us = poll_us
        self.failsafe_us = failsafe_us
        self.diagnostics = diagnostics if diagnostics is not None else []
        self._last_success_us = 0

    def start(self) -> None:
        self.clock.schedule(self.poll_us, self.poll_cycle)

    def poll_cycle(self) -> None:
        view = self.store_view()
        if view is None:
            if self.clock.now_us - self._last_success_us >= self.failsafe_us:
                self.link.send(serial_encode(Command.STOP, 0))
                self.diagnostics.append(f"{self.clock.now_ms:.1f}ms failsafe stop")
        else:
            self._last_success_us = self.clock.now_us
            cmd, speed, diags = select_command(view)
            self.diagnostics.extend(f"{self.clock.now_ms:.1f}ms {d}" for d in diags)
            self.link.send(serial_encode(cmd, speed))
        self.clock.schedule(self.poll_us, self.poll_cycle)


class DriveController:
    def __init__(
        self,
        clock: VirtualClock,
        bot: BotState,
        world: World,
        link: SerialLink,
        tick_us: int,
        ramp_rate: int = 15,
        threshold_cm: float = 30.0,
        v_max: float = 1.0,
        omega_deg_s: float = 90.0,
        max_range_m: float = 4.0,
        sensor_mode: str = "beam",
        on_apply: Optional[Callable[[Command, int], None]] = None,
        on_tick: Optional[Callable[[BotState], None]] = None,
        diagnostics: Optional[list] = None,
    ):
        self.clock = clock
        self.bot = bot
        self.world = world
        self.link = link
        self.tick_us = tick_us
        self.ramp_rate = ramp_rate
        self.threshold_cm = threshold_cm
        self.v_max = v_max
        self.omega_deg_s = omega_deg_s
        self.max_range_m = max_range_m
        self.sensor_mode = sensor_mode
        self.on_apply = on_apply
        self.on_tick = on_tick
        self.diagnostics = diagnostics if diagnostics is not None else []
        self.last_reading = None

    def start(self) -> None:
        self._trigger_ping()
        self.clock.schedule(self.tick_us, self.tick)

    # -- ultrasonic cycle: trigger, wait for the echo, guard, re-arm -----

    def _trigger_ping(self) -> None:
        self.clock.schedule(round(TRIGGER_US), self._ping_sent)

    def _ping_sent(self) -> None:
        reading = ultrasonic_measure(
            self.world,
            self.bot.x,
            self.bot.y,
            self.bot.heading,
            max_range_m=self.max_range_m,
            mode=self.sensor_mode,
        )
        wait_us = reading.echo_us if not reading.timed_out else TIMEOUT_US
        self.clock.schedule(round(wait_us), lambda: self._echo_landed(reading))

    def _echo_landed(self, reading) -> None:
        self.last_reading = reading
        obstacle_guard(self.bot, reading, self.threshold_cm)
        self._trigger_ping()

    # -- drive tick -------------------------------------------------------

    def tick(self) -> None:
        for frame in self.link.receive_ready():
            try:
                cmd, speed = serial_decode(frame)
            except InputError as e:
                self.diagnostics.append(f"{self.clock.now_ms:.1f}ms bad frame: {e}")
                continue
            if apply_command(self.bot, cmd, speed) and self.on_apply:
                self.on_apply(cmd, speed)
        if self.bot.mode == Mode.RUNNING:
            self.bot.speed = motor_ramp(self.bot.speed, ramp_target(self.bot), self.ramp_rate)
        step(
            self.bot,
            self.world,
            self.tick_us / 1e6,
            v_max=self.v_max,
            omega_deg_s=self.omega_deg_s,
        )
        if self.on_tick:
            self.on_tick(self.bot)
        self.clock.schedule(self.tick_us, self.tick)
