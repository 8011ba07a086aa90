"""The five gaze classes and their per-class corpus distribution."""

from __future__ import annotations

from enum import IntEnum


class GazeClass(IntEnum):
    """Eye orientation; integer encoding is alphabetical and stable."""

    DOWN = 0
    LEFT = 1
    RIGHT = 2
    STRAIGHT = 3
    UP = 4

    @property
    def label(self) -> str:
        return self.name.capitalize()

    @classmethod
    def from_label(cls, label: str) -> "GazeClass":
        return cls[label.upper()]


CLASS_LABELS = [c.label for c in GazeClass]

# default corpus distribution (13233 images total)
DEFAULT_CLASS_COUNTS = {
    GazeClass.DOWN: 2045,
    GazeClass.UP: 2475,
    GazeClass.LEFT: 2858,
    GazeClass.RIGHT: 2797,
    GazeClass.STRAIGHT: 3058,
}
