"""Run configuration: seeds, control-loop timing, training knobs, paths.

Flags > config file > defaults. A run's effective config is embedded in
its outputs so any run can be reproduced from them.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from gazebot.errors import ConfigError, InputError


@dataclass
class RunConfig:
    # seeds
    corpus_seed: int = 0
    split_seed: int = 1
    net_seed: int = 2
    train_seed: int = 3
    world_seed: int = 4

    # classifier / training
    frame_size: int = 128
    epochs: int = 25
    batch: int = 32
    lr: float = 1e-3
    val_fraction: float = 0.3
    total_images: int = 0  # 0 = the standard 13233-image distribution

    # control chain
    n_frames: int = 30  # debounce threshold (20 = blink-sensitive preset)
    frame_period_ms: float = 62.5  # classifier stream at 16 FPS
    poll_ms: float = 200.0
    serial_ms: float = 50.0  # serial + processing budget
    failsafe_ms: float = 1000.0
    link_capacity: int = 8

    # drive
    tick_ms: float = 20.0
    ramp_rate: int = 15  # speed units per tick
    threshold_cm: float = 30.0
    v_max: float = 1.0  # m/s at speed 255
    omega_deg_s: float = 90.0  # pivot rate at speed 255
    max_range_m: float = 4.0
    sensor_mode: str = "beam"  # "beam" (front half-plane) or "ray"
    telemetry_hz: float = 10.0

    def __post_init__(self):
        if self.frame_size < 16 or self.frame_size % 16:
            raise ConfigError(f"frame_size must be a multiple of 16, got {self.frame_size}")
        if self.n_frames < 1:
            raise ConfigError("n_frames must be >= 1")
        if self.sensor_mode not in ("beam", "ray"):
            raise ConfigError(f"sensor_mode must be 'beam' or 'ray', got {self.sensor_mode!r}")
        for name in ("frame_period_ms", "poll_ms", "tick_ms", "failsafe_ms"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if not 0 < self.val_fraction < 1:
            raise ConfigError("val_fraction must be in (0, 1)")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as e:
            raise InputError(f"{path}:{e.lineno}: {e.msg}") from e
        if not isinstance(data, dict):
            raise InputError(f"{path}: config must be a JSON object")
        return cls.from_dict(data)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    def with_overrides(self, **kwargs) -> "RunConfig":
        data = self.to_dict()
        data.update({k: v for k, v in kwargs.items() if v is not None})
        return RunConfig.from_dict(data)


# the desk-scale preset used by the quick acceptance path:
# 2000 images, 32px frames, 5 epochs
REDUCED_PRESET = {
    "frame_size": 32,
    "epochs": 5,
    "total_images": 2000,
}
