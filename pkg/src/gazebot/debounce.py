"""Per-frame class stream -> validated drive commands.

A command becomes valid only after the same class arrives on n_frames
consecutive pushes, and a command identical to the last one emitted is
suppressed (the relay only needs changes). Blinks and classifier noise
reset the run and never reach the drive chain.
"""

from __future__ import annotations

from enum import IntEnum
from typing import Optional

from gazebot.classes import GazeClass
from gazebot.errors import ConfigError


class Command(IntEnum):
    STOP = 0
    LEFT = 1
    RIGHT = 2
    START = 3
    FORWARD = 4

    @property
    def label(self) -> str:
        return self.name.capitalize()

    @classmethod
    def from_label(cls, label: str) -> "Command":
        return cls[label.upper()]


COMMAND_LABELS = [c.label for c in Command]

# eye movement -> bot movement
CLASS_TO_COMMAND = {
    GazeClass.DOWN: Command.STOP,
    GazeClass.LEFT: Command.LEFT,
    GazeClass.RIGHT: Command.RIGHT,
    GazeClass.UP: Command.START,
    GazeClass.STRAIGHT: Command.FORWARD,
}

# normative frame threshold; 20 ships as an alternative preset
DEFAULT_N_FRAMES = 30
BLINK_PRESET_N_FRAMES = 20


def map_class(c: GazeClass) -> Command:
    return CLASS_TO_COMMAND[c]


class Debouncer:
    """Single-owner state machine; callers serialize push()."""

    def __init__(self, n_frames: int = DEFAULT_N_FRAMES):
        if n_frames < 1:
            raise ConfigError(f"n_frames must be >= 1, got {n_frames}")
        self.n_frames = n_frames
        self.candidate: Optional[GazeClass] = None
        self.count = 0
        self.last_emitted: Optional[Command] = None

    def push(self, c: GazeClass) -> Optional[Command]:
        """Feed one classified frame; returns a command on the push that
        completes a run of n_frames, at most once per run."""
        if c == self.candidate:
            self.count += 1
        else:
            self.candidate = c
            self.count = 1
        if self.count == self.n_frames:
            cmd = map_class(c)
            if cmd != self.last_emitted:
                self.last_emitted = cmd
                return cmd
        return None

    def reset(self) -> None:
        self.candidate = None
        self.count = 0
        self.last_emitted = None
