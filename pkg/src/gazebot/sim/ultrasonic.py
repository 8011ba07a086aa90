"""Ultrasonic ranging: time-of-flight echo model with a hard 38 ms timeout.

The trigger is a 10 us event; the echo returns after 2d / 343 m/s. With
no reflector inside max_range the echo line falls on its own at exactly
38000 us and the reading carries no distance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from gazebot.sim.world import World

TIMEOUT_US = 38000.0
TRIGGER_US = 10.0
SPEED_OF_SOUND_M_S = 343.0
CM_PER_US = 0.0343  # 343 m/s expressed in cm per microsecond


@dataclass(frozen=True)
class UltrasonicReading:
    echo_us: float
    distance_cm: Optional[float]  # None on timeout

    @property
    def timed_out(self) -> bool:
        return self.distance_cm is None


TIMEOUT_READING = UltrasonicReading(TIMEOUT_US, None)


def echo_us_for_distance(d_m: float) -> float:
    return 2.0 * d_m / SPEED_OF_SOUND_M_S * 1e6


def distance_cm_from_echo(echo_us: float) -> float:
    return echo_us * CM_PER_US / 2.0


def ultrasonic_measure(
    world: World,
    x: float,
    y: float,
    heading: float,
    max_range_m: float = 4.0,
    mode: str = "ray",
) -> UltrasonicReading:
    """One ping from (x, y) along heading.

    mode "ray" casts a single line; mode "beam" returns the first echo
    from anything in the front half-plane (conservative wide lobe the
    obstacle guard runs on).
    """
    if mode == "beam":
        d = world.nearest_in_beam(x, y, heading)
    else:
        d = world.raycast(x, y, heading)
    if d > max_range_m:
        return TIMEOUT_READING
    echo = echo_us_for_distance(d)
    return UltrasonicReading(echo, distance_cm_from_echo(echo))
