"""Deterministic drive simulation on a virtual clock.

Relay poller (Wi-Fi module role), framed serial link, motor controller
with ramping, ultrasonic ranging, and differential-drive kinematics in
a 2D obstacle world.
"""

from gazebot.sim.clock import VirtualClock
from gazebot.sim.serial_link import SerialLink, serial_decode, serial_encode
from gazebot.sim.world import Circle, Segment, World
from gazebot.sim.ultrasonic import TIMEOUT_US, UltrasonicReading, ultrasonic_measure
from gazebot.sim.bot import BotState, Mode, apply_command, motor_ramp, obstacle_guard, step

__all__ = [
    "VirtualClock",
    "SerialLink",
    "serial_decode",
    "serial_encode",
    "Circle",
    "Segment",
    "World",
    "TIMEOUT_US",
    "UltrasonicReading",
    "ultrasonic_measure",
    "BotState",
    "Mode",
    "apply_command",
    "motor_ramp",
    "obstacle_guard",
    "step",
]
