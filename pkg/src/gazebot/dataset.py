"""Labeled frame sets: on-disk corpus loading, in-memory synthesis, splitting."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from gazebot.classes import DEFAULT_CLASS_COUNTS, GazeClass
from gazebot.errors import InputError
from gazebot.synth import StyleParams, sample_seed, synth_eye
from gazebot.vision import preprocess


@dataclass
class LabeledSet:
    """Frames (N, S, S) float32 in [0,1] with per-frame GazeClass labels."""

    frames: np.ndarray
    labels: np.ndarray
    split: str = "all"
    indices: np.ndarray = field(default=None)  # positions in the parent set

    def __post_init__(self):
        if len(self.frames) != len(self.labels):
            raise InputError(
                f"{len(self.frames)} frames vs {len(self.labels)} labels"
            )
        if self.indices is None:
            self.indices = np.arange(len(self.labels))

    def __len__(self):
        return len(self.labels)

    @property
    def frame_size(self) -> int:
        return self.frames.shape[1]

    def class_counts(self) -> dict[GazeClass, int]:
        return {g: int((self.labels == g).sum()) for g in GazeClass}


def split(
    dataset: LabeledSet, val_fraction: float = 0.3, seed: int = 0
) -> tuple[LabeledSet, LabeledSet]:
    """Seeded shuffle then split; val gets floor(n * fraction) samples.

    Every class present in the input should land in both halves; the
    permutation is re-drawn (deterministically) when a draw breaks
    that. Sets too small to ever satisfy presence fall back to the
    first seeded permutation.
    """
    if not 0.0 < val_fraction < 1.0:
        raise InputError(f"val_fraction must be in (0, 1), got {val_fraction}")
    n = len(dataset)
    if n == 0:
        raise InputError("cannot split an empty set")
    n_val = int(n * val_fraction)
    if n_val == 0 or n_val == n:
        raise InputError(f"split of {n} samples at {val_fraction} leaves an empty half")

    present = {g for g in GazeClass if (dataset.labels == g).any()}
    fallback = None
    for attempt in range(100):
        rng = np.random.default_rng([seed, attempt])
        perm = rng.permutation(n)
        val_idx, train_idx = perm[:n_val], perm[n_val:]
        if fallback is None:
            fallback = (val_idx, train_idx)
        ok = all(
            (dataset.labels[val_idx] == g).any() and (dataset.labels[train_idx] == g).any()
            for g in present
        )
        if ok:
            break
    else:
        val_idx, train_idx = fallback

    train = LabeledSet(
        dataset.frames[train_idx], dataset.labels[train_idx], "train", train_idx
    )
    val = LabeledSet(dataset.frames[val_idx], dataset.labels[val_idx], "val", val_idx)
    return train, val


def synthesize_labeled_set(
    counts: dict[GazeClass, int] | None = None,
    corpus_seed: int = 0,
    params: StyleParams = StyleParams(),
    frame_size: int = 128,
) -> LabeledSet:
    """Generate and preprocess a corpus in memory (no files)."""
    counts = dict(DEFAULT_CLASS_COUNTS) if counts is None else counts
    frames, labels = [], []
    for gaze in GazeClass:
        for i in range(counts.get(gaze, 0)):
            img = synth_eye(gaze, sample_seed(corpus_seed, gaze, i), params)
            frames.append(preprocess(img, size=frame_size))
            labels.append(int(gaze))
    if not frames:
        raise InputError("empty class counts")
    return LabeledSet(np.stack(frames), np.asarray(labels, dtype=np.int64))


def load_corpus(data_dir, frame_size: int = 128) -> LabeledSet:
    """Load data/<Class>/<index>.png files written by generate_corpus."""
    data_dir = Path(data_dir)
    frames, labels = [], []
    for gaze in GazeClass:
        cls_dir = data_dir / gaze.label
        if not cls_dir.is_dir():
            continue
        for png in sorted(cls_dir.glob("*.png")):
            img = np.asarray(Image.open(png).convert("RGB"))
            frames.append(preprocess(img, size=frame_size))
            labels.append(int(gaze))
    if not frames:
        raise InputError(f"no class directories with images under {data_dir}")
    return LabeledSet(np.stack(frames), np.asarray(labels, dtype=np.int64))


def one_hot(labels: np.ndarray, n_classes: int = 5) -> np.ndarray:
    return np.eye(n_classes, dtype=np.float32)[labels]
