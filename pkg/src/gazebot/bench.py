"""Single-stream prediction throughput with a per-layer time breakdown."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from gazebot.classes import GazeClass
from gazebot.dataset import synthesize_labeled_set
from gazebot.nn import Network

REFERENCE_FPS_NOTE = "reference target: 15-16 FPS (single desktop core)"


@dataclass
class BenchReport:
    frames: int
    total_s: float
    mean_fps: float
    min_fps: float
    layer_s: dict[str, float] = field(default_factory=dict)

    @property
    def layer_sum_s(self) -> float:
        return sum(self.layer_s.values())

    def to_dict(self) -> dict:
        return {
            "frames": self.frames,
            "total_s": self.total_s,
            "mean_fps": self.mean_fps,
            "min_fps": self.min_fps,
            "layer_s": self.layer_s,
            "layer_sum_s": self.layer_sum_s,
            "reference": REFERENCE_FPS_NOTE,
        }

    def render_text(self) -> str:
        lines = [
            f"frames: {self.frames}",
            f"total: {self.total_s:.3f} s",
            f"mean throughput: {self.mean_fps:.2f} FPS",
            f"slowest frame: {self.min_fps:.2f} FPS",
            REFERENCE_FPS_NOTE,
            "",
            "per-layer time:",
        ]
        for name, secs in self.layer_s.items():
            share = 100.0 * secs / self.total_s if self.total_s else 0.0
            lines.append(f"  {name:<22} {secs * 1e3 / self.frames:8.3f} ms/frame  {share:5.1f}%")
        lines.append(f"  layer sum {self.layer_sum_s:.3f} s of {self.total_s:.3f} s total")
        return "\n".join(lines) + "\n"


def bench_frames(frame_size: int, n_distinct: int = 16, seed: int = 0) -> np.ndarray:
    """A small pool of synthetic frames to cycle through while timing."""
    counts = {g: max(1, n_distinct // 5) for g in GazeClass}
    ds = synthesize_labeled_set(counts, corpus_seed=seed, frame_size=frame_size)
    return ds.frames


def run_bench(net: Network, frames: int = 500, seed: int = 0) -> BenchReport:
    """Time frame-at-a-time prediction (batch of one, like the live path)."""
    pool = bench_frames(net.input_shape[0], seed=seed)
    layer_names = [f"{i:02d}_{layer.kind}" for i, layer in enumerate(net.layers)]
    layer_s = {name: 0.0 for name in layer_names}

    # warm up caches and BLAS threads off the clock
    net.forward(pool[0][None, :, :, None].astype(net.dtype))

    worst_frame_s = 0.0
    t_start = time.perf_counter()
    for i in range(frames):
        x = pool[i % len(pool)][None, :, :, None].astype(net.dtype)
        f_start = time.perf_counter()
        for name, layer in zip(layer_names, net.layers):
            t0 = time.perf_counter()
            x = layer.forward(x)
            layer_s[name] += time.perf_counter() - t0
        worst_frame_s = max(worst_frame_s, time.perf_counter() - f_start)
    total_s = time.perf_counter() - t_start

    return BenchReport(
        frames=frames,
        total_s=total_s,
        mean_fps=frames / total_s if total_s else 0.0,
        min_fps=1.0 / worst_frame_s if worst_frame_s else 0.0,
        layer_s=layer_s,
    )


def conv_paths_agree(input_size: int = 32, seed: int = 0, n_frames: int = 2) -> bool:
    """The naive-loop conv build and the fast path predict identically."""
    from gazebot.model import build_gaze_network

    fast = build_gaze_network(seed=seed, input_size=input_size, conv_impl="fast")
    naive = build_gaze_network(seed=seed, input_size=input_size, conv_impl="naive")
    pool = bench_frames(input_size, seed=seed)[:n_frames]
    x = pool[:, :, :, None].astype(np.float32)
    return bool(np.array_equal(fast.forward(x), naive.forward(x)))
