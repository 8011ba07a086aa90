"""The five-class gaze network: construction, training loop, prediction."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from gazebot.classes import GazeClass
from gazebot.dataset import LabeledSet, one_hot
from gazebot.errors import ConfigError, InputError, ShapeError
from gazebot.nn import AdamState, LayerSpec, Network, adam_step, save_weights

CONV_FILTERS = (32, 64, 128, 128)
DENSE_UNITS = 256
DROPOUT_RATE = 0.4
N_CLASSES = 5


def gaze_layer_specs(
    filters=CONV_FILTERS, dense_units=DENSE_UNITS, dropout_rate=DROPOUT_RATE
) -> list[LayerSpec]:
    """Four conv/dropout/pool blocks, flatten, 256-wide dense, 5-way softmax.

    Dropout sits between each conv's ReLU and its pool, and again after
    the hidden dense layer.
    """
    specs: list[LayerSpec] = []
    for f in filters:
        specs += [
            LayerSpec("Conv2D", filters=f),
            LayerSpec("ReLU"),
            LayerSpec("Dropout", rate=dropout_rate),
            LayerSpec("MaxPool2x2"),
        ]
    specs += [
        LayerSpec("Flatten"),
        LayerSpec("Dense", units=dense_units),
        LayerSpec("ReLU"),
        LayerSpec("Dropout", rate=dropout_rate),
        LayerSpec("Dense", units=N_CLASSES),
        LayerSpec("Softmax"),
    ]
    return specs


def build_gaze_network(
    seed: int = 0, input_size: int = 128, conv_impl: str = "fast"
) -> Network:
    """Build the gaze classifier for a square single-channel input.

    input_size must survive four pool halvings (divisible by 16).
    """
    if input_size < 16 or input_size % 16:
        raise ConfigError(f"input size must be a multiple of 16, got {input_size}")
    return Network(
        gaze_layer_specs(),
        input_shape=(input_size, input_size, 1),
        seed=seed,
        conv_impl=conv_impl,
    )


def _stratified_order(labels: np.ndarray, rng) -> np.ndarray:
    """Shuffle that spreads every class evenly through the epoch."""
    keys = np.empty(len(labels), dtype=np.float64)
    for g in np.unique(labels):
        idx = np.flatnonzero(labels == g)
        idx = rng.permutation(idx)
        keys[idx] = (np.arange(len(idx)) + rng.random(len(idx))) / len(idx)
    return np.argsort(keys, kind="stable")


def train(
    net: Network,
    train_set: LabeledSet,
    epochs: int = 25,
    batch: int = 32,
    seed: int = 0,
    lr: float = 1e-3,
    checkpoint_dir=None,
    progress=None,
) -> list[float]:
    """Adam + categorical cross-entropy; returns per-epoch mean losses.

    Deterministic for fixed (net seed, train seed): batch order and
    dropout masks come from one seeded generator. A checkpoint is saved
    per epoch when checkpoint_dir is given. Aborts on non-finite loss.
    """
    if len(train_set) == 0:
        raise InputError("empty training set")
    if tuple(net.input_shape[:2]) != (train_set.frame_size, train_set.frame_size):
        raise ShapeError(
            f"network expects {net.input_shape}, frames are {train_set.frame_size}px"
        )
    params = [p for _, p in net.parameters()]
    opt = AdamState(params, lr=lr)
    rng = np.random.default_rng(seed)
    x_all = train_set.frames[..., None]
    y_all = one_hot(train_set.labels, N_CLASSES)

    history: list[float] = []
    for epoch in range(epochs):
        order = _stratified_order(train_set.labels, rng)
        total, seen = 0.0, 0
        for start in range(0, len(order), batch):
            idx = order[start : start + batch]
            net.zero_grads()
            loss, _ = net.loss_and_grad(x_all[idx], y_all[idx], rng=rng)
            if not np.isfinite(loss):
                raise FloatingPointError(
                    f"non-finite loss {loss} at epoch {epoch} sample {start}"
                )
            adam_step(opt, params)
            total += loss * len(idx)
            seen += len(idx)
        history.append(total / seen)
        if checkpoint_dir is not None:
            ckpt = Path(checkpoint_dir)
            ckpt.mkdir(parents=True, exist_ok=True)
            save_weights(net, ckpt / f"epoch_{epoch + 1:03d}.gznn")
        if progress is not None:
            progress(epoch + 1, history[-1])
    return history


def predict(net: Network, frame: np.ndarray) -> tuple[GazeClass, np.ndarray]:
    """Classify one frame; returns (argmax class, probabilities[5])."""
    frame = np.asarray(frame)
    if frame.ndim == 2:
        frame = frame[..., None]
    if tuple(frame.shape) != net.input_shape:
        raise ShapeError(f"frame {frame.shape} does not match input {net.input_shape}")
    probs = net.forward(frame[None].astype(net.dtype))[0]
    return GazeClass(int(np.argmax(probs))), probs


def predict_batch(net: Network, frames: np.ndarray, batch: int = 64) -> np.ndarray:
    """Argmax classes for (N, S, S) frames, evaluated in chunks."""
    preds = []
    x = frames[..., None]
    for start in range(0, len(x), batch):
        probs = net.forward(x[start : start + batch].astype(net.dtype))
        preds.append(np.argmax(probs, axis=1))
    return np.concatenate(preds) if preds else np.empty(0, dtype=np.int64)
