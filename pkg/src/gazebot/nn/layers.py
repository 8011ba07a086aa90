"""Layer kernels and layer classes.

Two surfaces:

* module-level functions (``conv2d_forward``, ``relu``, ...) operate on a
  single sample and are the documented numeric contracts;
* layer classes operate on batched arrays (leading N axis) and retain
  whatever the backward pass needs (activations, masks, argmax indices).

All reductions accumulate in float64 regardless of storage dtype.
"""

from __future__ import annotations

import numpy as np

from gazebot.errors import ConfigError, ShapeError, StateError
from gazebot.nn import naive


class Param:
    """A learnable tensor plus its gradient accumulator."""

    __slots__ = ("name", "value", "grad")

    def __init__(self, name: str, value: np.ndarray):
        self.name = name
        self.value = value
        self.grad = np.zeros_like(value)

    @property
    def shape(self):
        return self.value.shape


# ---------------------------------------------------------------------------
# batched kernels (float64 accumulation)

def _pad1(x: np.ndarray) -> np.ndarray:
    """Zero-pad the two spatial axes of (N, H, W, C) by one pixel."""
    n, h, w, c = x.shape
    xp = np.zeros((n, h + 2, w + 2, c), dtype=x.dtype)
    xp[:, 1 : h + 1, 1 : w + 1, :] = x
    return xp


def _im2col(xp: np.ndarray) -> np.ndarray:
    """Patch matrix of a padded batch: (N*H*W, 9*C), columns in (dy, dx, c) order."""
    n, hp, wp, c = xp.shape
    h, w = hp - 2, wp - 2
    cols = np.empty((n, h, w, 9 * c), dtype=xp.dtype)
    k = 0
    for dy in range(3):
        for dx in range(3):
            cols[..., k * c : (k + 1) * c] = xp[:, dy : dy + h, dx : dx + w, :]
            k += 1
    return cols.reshape(n * h * w, 9 * c)


def _conv2d_batch(x, w, b):
    """Same-size 3x3 convolution over (N, H, W, C); returns (out64, cols64).

    Patches are gathered in the storage dtype and upcast once (exact for
    float32 values); the reduction itself runs in float64.
    """
    n, h, wd, c = x.shape
    f = w.shape[3]
    cols = _im2col(_pad1(x)).astype(np.float64, copy=False)
    out = cols @ w.reshape(9 * c, f).astype(np.float64, copy=False)
    out += b.astype(np.float64, copy=False)
    return out.reshape(n, h, wd, f), cols


def _conv2d_backward_batch(dy, cols, w):
    n, h, wd, f = dy.shape
    c = w.shape[2]
    dyf = dy.reshape(n * h * wd, f).astype(np.float64, copy=False)
    dw = (cols.T @ dyf).reshape(3, 3, c, f)
    db = dyf.sum(axis=0)
    # scatter one window offset at a time instead of materializing the
    # full (N*H*W, 9C) patch-gradient matrix
    w64 = w.reshape(9 * c, f).astype(np.float64, copy=False)
    dxp = np.zeros((n, h + 2, wd + 2, c), dtype=np.float64)
    k = 0
    for ody in range(3):
        for odx in range(3):
            part = dyf @ w64[k * c : (k + 1) * c].T
            dxp[:, ody : ody + h, odx : odx + wd, :] += part.reshape(n, h, wd, c)
            k += 1
    return dxp[:, 1 : h + 1, 1 : wd + 1, :], dw, db


def _maxpool_batch(x):
    n, h, w, c = x.shape
    if h % 2 or w % 2:
        raise ShapeError(f"maxpool2x2 needs even spatial extents, got {h}x{w}")
    xr = (
        x.reshape(n, h // 2, 2, w // 2, 2, c)
        .transpose(0, 1, 3, 2, 4, 5)
        .reshape(n, h // 2, w // 2, 4, c)
    )
    idx = xr.argmax(axis=3)
    out = np.take_along_axis(xr, idx[:, :, :, None, :], axis=3)[:, :, :, 0, :]
    return out, idx


def _maxpool_backward_batch(dy, idx, in_shape):
    n, h, w, c = in_shape
    dz = np.zeros((n, h // 2, w // 2, 4, c), dtype=dy.dtype)
    np.put_along_axis(dz, idx[:, :, :, None, :], dy[:, :, :, None, :], axis=3)
    return (
        dz.reshape(n, h // 2, w // 2, 2, 2, c)
        .transpose(0, 1, 3, 2, 4, 5)
        .reshape(n, h, w, c)
    )


def _softmax_batch(x):
    z = x.astype(np.float64, copy=False)
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


# ---------------------------------------------------------------------------
# single-sample contracts

def conv2d_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """3x3 stride-1 convolution with zero-padded same-size output.

    x: (H, W, C), w: (3, 3, C, F), b: (F,). Output (H, W, F), stored in
    x's dtype after float64 accumulation.
    """
    if x.ndim != 3:
        raise ShapeError(f"conv input must be (H, W, C), got {x.shape}")
    if w.ndim != 4 or w.shape[0] != 3 or w.shape[1] != 3:
        raise ShapeError(f"conv weights must be (3, 3, C, F), got {w.shape}")
    if w.shape[2] != x.shape[2]:
        raise ShapeError(f"channel mismatch: input {x.shape[2]}, weights {w.shape[2]}")
    if b.shape != (w.shape[3],):
        raise ShapeError(f"bias must be ({w.shape[3]},), got {b.shape}")
    out, _ = _conv2d_batch(x[None], w, b)
    return out[0].astype(x.dtype, copy=False)


def relu(x: np.ndarray) -> np.ndarray:
    """Elementwise max(0, x)."""
    return np.maximum(x, 0)


def maxpool2x2(x: np.ndarray) -> np.ndarray:
    """Disjoint 2x2 max pooling; halves each spatial extent."""
    if x.ndim != 3:
        raise ShapeError(f"maxpool input must be (H, W, C), got {x.shape}")
    out, _ = _maxpool_batch(x[None])
    return out[0]


def dropout(x: np.ndarray, rate: float, training: bool, rng=None) -> np.ndarray:
    """Inverted dropout: identity at inference, mask+rescale in training."""
    if not 0.0 < rate < 1.0:
        raise ConfigError(f"dropout rate must be in (0, 1), got {rate}")
    if not training:
        return x
    if rng is None:
        raise StateError("dropout in training mode requires an rng")
    keep = rng.random(x.shape) >= rate
    return (x * (keep.astype(x.dtype) / np.asarray(1.0 - rate, dtype=x.dtype))).astype(
        x.dtype, copy=False
    )


def dense_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """out = x @ w + b for a single vector x of length N, w (N, M), b (M,)."""
    if x.ndim != 1 or w.ndim != 2 or x.shape[0] != w.shape[0]:
        raise ShapeError(f"dense shapes incompatible: x {x.shape}, w {w.shape}")
    if b.shape != (w.shape[1],):
        raise ShapeError(f"bias must be ({w.shape[1]},), got {b.shape}")
    out = x.astype(np.float64, copy=False) @ w.astype(np.float64, copy=False)
    out += b.astype(np.float64, copy=False)
    return out.astype(x.dtype, copy=False)


def softmax(x: np.ndarray) -> np.ndarray:
    """Max-subtracted softmax; outputs sum to 1 and are shift-invariant."""
    return _softmax_batch(np.asarray(x)).astype(np.asarray(x).dtype, copy=False)


def cross_entropy(probs: np.ndarray, target: np.ndarray) -> float:
    """-ln(probs[target]) against a one-hot target, probs clamped to >= 1e-12."""
    probs = np.asarray(probs)
    target = np.asarray(target)
    if probs.shape != target.shape:
        raise ShapeError(f"probs {probs.shape} vs target {target.shape}")
    from gazebot.errors import InputError

    ones = np.isclose(target, 1.0)
    zeros = np.isclose(target, 0.0)
    if ones.sum() != 1 or not np.all(ones | zeros):
        raise InputError("target must be one-hot")
    p = float(probs[ones][0])
    return -float(np.log(max(p, 1e-12)))


# ---------------------------------------------------------------------------
# layer classes (batched)

class Layer:
    """Base: paramless, shape-preserving by default."""

    kind = "Layer"

    def __init__(self):
        self.params: list[Param] = []

    def init_params(self, rng, dtype):
        pass

    def output_shape(self, in_shape):
        return in_shape

    def forward(self, x, training=False, rng=None):
        raise NotImplementedError

    def backward(self, dy):
        raise NotImplementedError

    def __repr__(self):
        return f"{self.kind}()"


class Conv2D(Layer):
    kind = "Conv2D"

    def __init__(self, in_channels: int, filters: int, impl: str = "fast"):
        super().__init__()
        if filters < 1:
            raise ConfigError("filter count must be >= 1")
        if impl not in ("fast", "naive"):
            raise ConfigError(f"unknown conv impl {impl!r}")
        self.in_channels = in_channels
        self.filters = filters
        self.impl = impl
        self.w = Param("w", np.zeros((3, 3, in_channels, filters), dtype=np.float32))
        self.b = Param("b", np.zeros(filters, dtype=np.float32))
        self.params = [self.w, self.b]
        self._cols = None

    def init_params(self, rng, dtype):
        # He-uniform: the layer feeds a ReLU
        fan_in = 9 * self.in_channels
        limit = np.sqrt(6.0 / fan_in)
        self.w = Param("w", rng.uniform(-limit, limit, self.w.shape).astype(dtype))
        self.b = Param("b", np.zeros(self.filters, dtype=dtype))
        self.params = [self.w, self.b]

    def output_shape(self, in_shape):
        h, w, c = in_shape
        if c != self.in_channels:
            raise ShapeError(f"conv expects {self.in_channels} channels, got {c}")
        return (h, w, self.filters)

    def forward(self, x, training=False, rng=None):
        if x.shape[3] != self.in_channels:
            raise ShapeError(f"conv expects {self.in_channels} channels, got {x.shape[3]}")
        if self.impl == "naive":
            out = np.stack(
                [naive.conv2d_naive(x[i], self.w.value, self.b.value) for i in range(x.shape[0])]
            )
            self._cols = _im2col(_pad1(x)).astype(np.float64, copy=False)
            return out
        out, self._cols = _conv2d_batch(x, self.w.value, self.b.value)
        return out.astype(x.dtype, copy=False)

    def backward(self, dy):
        if self._cols is None:
            raise StateError("conv backward before forward")
        dx, dw, db = _conv2d_backward_batch(dy, self._cols, self.w.value)
        self.w.grad += dw.astype(self.w.value.dtype, copy=False)
        self.b.grad += db.astype(self.b.value.dtype, copy=False)
        return dx.astype(dy.dtype, copy=False)

    def __repr__(self):
        return f"Conv2D({self.in_channels}->{self.filters})"


class ReLU(Layer):
    kind = "ReLU"

    def __init__(self):
        super().__init__()
        self._mask = None

    def forward(self, x, training=False, rng=None):
        self._mask = x > 0
        return np.maximum(x, 0)

    def backward(self, dy):
        if self._mask is None:
            raise StateError("relu backward before forward")
        return dy * self._mask


class MaxPool2x2(Layer):
    kind = "MaxPool2x2"

    def __init__(self):
        super().__init__()
        self._idx = None
        self._in_shape = None

    def output_shape(self, in_shape):
        h, w, c = in_shape
        if h % 2 or w % 2:
            raise ShapeError(f"maxpool2x2 needs even spatial extents, got {h}x{w}")
        return (h // 2, w // 2, c)

    def forward(self, x, training=False, rng=None):
        out, self._idx = _maxpool_batch(x)
        self._in_shape = x.shape
        return out

    def backward(self, dy):
        if self._idx is None:
            raise StateError("maxpool backward before forward")
        return _maxpool_backward_batch(dy, self._idx, self._in_shape)


class Dropout(Layer):
    kind = "Dropout"

    def __init__(self, rate: float):
        super().__init__()
        if not 0.0 < rate < 1.0:
            raise ConfigError(f"dropout rate must be in (0, 1), got {rate}")
        self.rate = rate
        self._mask = None

    def forward(self, x, training=False, rng=None):
        if not training:
            self._mask = None
            return x
        if rng is None:
            raise StateError("dropout in training mode requires an rng")
        keep = rng.random(x.shape) >= self.rate
        self._mask = keep.astype(x.dtype) / np.asarray(1.0 - self.rate, dtype=x.dtype)
        return x * self._mask

    def backward(self, dy):
        if self._mask is None:
            return dy
        return dy * self._mask

    def __repr__(self):
        return f"Dropout({self.rate})"


class Flatten(Layer):
    kind = "Flatten"

    def __init__(self):
        super().__init__()
        self._in_shape = None

    def output_shape(self, in_shape):
        n = 1
        for e in in_shape:
            n *= e
        return (n,)

    def forward(self, x, training=False, rng=None):
        self._in_shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, dy):
        if self._in_shape is None:
            raise StateError("flatten backward before forward")
        return dy.reshape(self._in_shape)


class Dense(Layer):
    kind = "Dense"

    def __init__(self, in_features: int, units: int, init: str = "he"):
        super().__init__()
        if units < 1:
            raise ConfigError("dense units must be >= 1")
        if init not in ("he", "glorot"):
            raise ConfigError(f"unknown init {init!r}")
        self.in_features = in_features
        self.units = units
        self.init = init
        self.w = Param("w", np.zeros((in_features, units), dtype=np.float32))
        self.b = Param("b", np.zeros(units, dtype=np.float32))
        self.params = [self.w, self.b]
        self._x = None

    def init_params(self, rng, dtype):
        if self.init == "he":
            limit = np.sqrt(6.0 / self.in_features)
        else:
            limit = np.sqrt(6.0 / (self.in_features + self.units))
        self.w = Param("w", rng.uniform(-limit, limit, self.w.shape).astype(dtype))
        self.b = Param("b", np.zeros(self.units, dtype=dtype))
        self.params = [self.w, self.b]

    def output_shape(self, in_shape):
        if in_shape != (self.in_features,):
            raise ShapeError(f"dense expects ({self.in_features},), got {in_shape}")
        return (self.units,)

    def forward(self, x, training=False, rng=None):
        if x.shape[1] != self.in_features:
            raise ShapeError(f"dense expects {self.in_features} features, got {x.shape[1]}")
        self._x = x
        out = x.astype(np.float64, copy=False) @ self.w.value.astype(np.float64, copy=False)
        out += self.b.value.astype(np.float64, copy=False)
        return out.astype(x.dtype, copy=False)

    def backward(self, dy):
        if self._x is None:
            raise StateError("dense backward before forward")
        x64 = self._x.astype(np.float64, copy=False)
        dy64 = dy.astype(np.float64, copy=False)
        self.w.grad += (x64.T @ dy64).astype(self.w.value.dtype, copy=False)
        self.b.grad += dy64.sum(axis=0).astype(self.b.value.dtype, copy=False)
        return (dy64 @ self.w.value.astype(np.float64, copy=False).T).astype(
            dy.dtype, copy=False
        )

    def __repr__(self):
        return f"Dense({self.in_features}->{self.units})"


class Softmax(Layer):
    """Output activation. Its gradient is always folded into the loss
    (dLogits = probs - target), so it has no standalone backward."""

    kind = "Softmax"

    def forward(self, x, training=False, rng=None):
        return _softmax_batch(x).astype(x.dtype, copy=False)

    def backward(self, dy):
        raise StateError(
            "softmax backward is combined with cross-entropy; inject probs - target below it"
        )
