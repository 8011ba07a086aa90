"""Scenario files: world, start pose, scripted inputs, config overrides.

JSON schema (all fields optional unless noted; see docs/scenarios.md):

    {
      "duration_ms": 20000,
      "world": {
        "bounds": [xmin, ymin, xmax, ymax],
        "circles": [[cx, cy, r], ...],
        "segments": [[x1, y1, x2, y2], ...]
      },
      "bot": {"x": 5.0, "y": 5.0, "heading_deg": 0.0},
      "gaze_script": [["Straight", 30], ["Left", 40], ...],
      "relay_script": [[t_ms, "key", "value"], ...],
      "relay_outages": [[t0_ms, t1_ms], ...],
      "config": { RunConfig overrides }
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from gazebot.classes import GazeClass
from gazebot.errors import InputError
from gazebot.sim.world import Circle, Segment, World

DEFAULT_BOUNDS = (0.0, 0.0, 10.0, 10.0)


@dataclass
class Scenario:
    duration_ms: float = 20000.0
    world: World = None
    bot_start: tuple[float, float, float] = (5.0, 5.0, 0.0)  # x, y, heading rad
    gaze_script: list[tuple[GazeClass, int]] = field(default_factory=list)
    relay_script: list[tuple[float, str, str]] = field(default_factory=list)
    relay_outages: list[tuple[float, float]] = field(default_factory=list)
    config_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.world is None:
            self.world = World(DEFAULT_BOUNDS, [], [])
        x, y, _ = self.bot_start
        if not self.world.in_bounds(x, y):
            raise InputError(f"bot start ({x}, {y}) outside bounds {self.world.bounds}")
        if self.world.inside_obstacle(x, y):
            raise InputError(f"bot start ({x}, {y}) inside an obstacle")


def _require(cond: bool, path: str, msg: str) -> None:
    if not cond:
        raise InputError(f"scenario {path}: {msg}")


def parse_scenario(data: dict) -> Scenario:
    _require(isinstance(data, dict), "$", "must be a JSON object")

    wdata = data.get("world", {})
    _require(isinstance(wdata, dict), "world", "must be an object")
    bounds = tuple(wdata.get("bounds", DEFAULT_BOUNDS))
    _require(len(bounds) == 4, "world.bounds", "needs [xmin, ymin, xmax, ymax]")
    circles = []
    for i, c in enumerate(wdata.get("circles", [])):
        _require(len(c) == 3 and c[2] > 0, f"world.circles[{i}]", "needs [cx, cy, r>0]")
        circles.append(Circle(*map(float, c)))
    segments = []
    for i, s in enumerate(wdata.get("segments", [])):
        _require(len(s) == 4, f"world.segments[{i}]", "needs [x1, y1, x2, y2]")
        segments.append(Segment(*map(float, s)))
    world = World(bounds, circles, segments)

    bdata = data.get("bot", {})
    _require(isinstance(bdata, dict), "bot", "must be an object")
    start = (
        float(bdata.get("x", (bounds[0] + bounds[2]) / 2)),
        float(bdata.get("y", (bounds[1] + bounds[3]) / 2)),
        math.radians(float(bdata.get("heading_deg", 0.0))),
    )

    gaze_script = []
    for i, run in enumerate(data.get("gaze_script", [])):
        _require(
            len(run) == 2 and isinstance(run[0], str),
            f"gaze_script[{i}]",
            'needs ["Class", frame_count]',
        )
        try:
            gaze = GazeClass.from_label(run[0])
        except KeyError:
            raise InputError(f"scenario gaze_script[{i}]: unknown class {run[0]!r}") from None
        count = int(run[1])
        _require(count > 0, f"gaze_script[{i}]", "frame count must be positive")
        gaze_script.append((gaze, count))

    relay_script = []
    for i, entry in enumerate(data.get("relay_script", [])):
        _require(len(entry) == 3, f"relay_script[{i}]", 'needs [t_ms, "key", "value"]')
        relay_script.append((float(entry[0]), str(entry[1]), str(entry[2])))
    relay_script.sort(key=lambda e: e[0])

    outages = []
    for i, win in enumerate(data.get("relay_outages", [])):
        _require(len(win) == 2 and win[0] < win[1], f"relay_outages[{i}]", "needs [t0, t1] with t0 < t1")
        outages.append((float(win[0]), float(win[1])))

    overrides = data.get("config", {})
    _require(isinstance(overrides, dict), "config", "must be an object")

    return Scenario(
        duration_ms=float(data.get("duration_ms", 20000.0)),
        world=world,
        bot_start=start,
        gaze_script=gaze_script,
        relay_script=relay_script,
        relay_outages=outages,
        config_overrides=overrides,
    )


def load_scenario(path) -> Scenario:
    """Parse a scenario file; malformed JSON reports the line number."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from e
    return parse_scenario(data)
