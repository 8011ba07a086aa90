"""Bot state and drive semantics: command application, speed ramp,
obstacle guard, differential-drive kinematics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from gazebot.debounce import Command
from gazebot.errors import InputError
from gazebot.sim.ultrasonic import UltrasonicReading
from gazebot.sim.world import World


class Mode(Enum):
    STOPPED = "Stopped"
    RUNNING = "Running"


@dataclass
class BotState:
    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0  # radians, CCW from +x
    speed: int = 0  # driver units 0..255
    target_speed: int = 0
    mode: Mode = Mode.STOPPED
    active_command: Command = Command.STOP
    obstacle_blocked: bool = False

    def pose(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.heading)


def apply_command(state: BotState, cmd: Command, speed: int) -> bool:
    """Apply a decoded frame; returns True when the motor target changed.

    Start arms the drive and heads forward; Stop halts instantly
    (bypassing the ramp); steering commands only matter while running.
    """
    if not 0 <= speed <= 255:
        raise InputError(f"speed {speed} outside 0..255")
    before = (state.mode, state.active_command, state.target_speed)
    if cmd == Command.START:
        state.mode = Mode.RUNNING
        state.active_command = Command.FORWARD
        state.target_speed = speed
    elif cmd == Command.STOP:
        state.mode = Mode.STOPPED
        state.active_command = Command.STOP
        state.target_speed = 0
        state.speed = 0  # immediate, no ramp
    elif state.mode == Mode.RUNNING:
        state.active_command = cmd
        state.target_speed = speed
    # Forward/Left/Right while stopped are ignored
    return (state.mode, state.active_command, state.target_speed) != before


def motor_ramp(speed: int, target_speed: int, ramp_rate: int = 15) -> int:
    """Move speed toward target by at most ramp_rate per tick."""
    if target_speed > speed:
        return min(speed + ramp_rate, target_speed)
    if target_speed < speed:
        return max(speed - ramp_rate, target_speed)
    return speed


def obstacle_guard(
    state: BotState, reading: UltrasonicReading, threshold_cm: float = 30.0
) -> BotState:
    """Block on a sub-threshold reading (zeroing speed that instant),
    clear on anything at or beyond threshold, including timeouts."""
    near = reading.distance_cm is not None and reading.distance_cm < threshold_cm
    if near and not state.obstacle_blocked:
        state.obstacle_blocked = True
        state.speed = 0  # stops immediately, ramp bypassed
    elif not near:
        state.obstacle_blocked = False
    return state


def ramp_target(state: BotState) -> int:
    """Effective ramp target: forward drive is inhibited while blocked,
    turning in place stays available so the rider can steer away."""
    if state.obstacle_blocked and state.active_command == Command.FORWARD:
        return 0
    return state.target_speed


def step(state: BotState, world: World, dt_s: float, v_max: float = 1.0,
         omega_deg_s: float = 90.0) -> BotState:
    """Advance kinematics by dt: forward translation or pivot turns.

    Collision with an obstacle or the bounds clamps position and forces
    speed to zero.
    """
    if dt_s <= 0:
        raise InputError(f"dt must be positive, got {dt_s}")
    if state.mode != Mode.RUNNING or state.speed == 0:
        return state
    frac = state.speed / 255.0
    cmd = state.active_command
    if cmd == Command.FORWARD:
        if state.obstacle_blocked:
            return state
        nx = state.x + math.cos(state.heading) * v_max * frac * dt_s
        ny = state.y + math.sin(state.heading) * v_max * frac * dt_s
        if world.motion_blocked(state.x, state.y, nx, ny):
            state.speed = 0
            return state
        state.x, state.y = nx, ny
    elif cmd == Command.LEFT:
        state.heading += math.radians(omega_deg_s) * frac * dt_s
    elif cmd == Command.RIGHT:
        state.heading -= math.radians(omega_deg_s) * frac * dt_s
    return state
