"""Network container: an ordered layer stack with a fixed input extent."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from gazebot.errors import ConfigError, ShapeError, StateError
from gazebot.nn.layers import (
    Conv2D,
    Dense,
    Dropout,
    Flatten,
    Layer,
    MaxPool2x2,
    ReLU,
    Softmax,
)

KINDS = ("Conv2D", "ReLU", "MaxPool2x2", "Dropout", "Flatten", "Dense", "Softmax")


@dataclass(frozen=True)
class LayerSpec:
    """Declarative layer description; kind-specific fields are optional."""

    kind: str
    filters: Optional[int] = None
    units: Optional[int] = None
    rate: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown layer kind {self.kind!r}")


class Network:
    """Fixed layer stack built from LayerSpecs with seeded initialization.

    The input extent is pinned at construction; any other extent is
    rejected. Parameter count is fixed after construction. Identical
    (specs, input_shape, seed) give bit-identical initial weights.
    """

    def __init__(
        self,
        specs: list[LayerSpec],
        input_shape: tuple[int, int, int],
        seed: int = 0,
        dtype=np.float32,
        conv_impl: str = "fast",
    ):
        self.specs = list(specs)
        self.input_shape = tuple(input_shape)
        self.seed = seed
        self.dtype = np.dtype(dtype)
        self.conv_impl = conv_impl
        self.layers: list[Layer] = []
        self._forward_done = False
        self.last_logits: np.ndarray | None = None

        last_dense_i = max(
            (i for i, s in enumerate(self.specs) if s.kind == "Dense"), default=-1
        )
        shape = self.input_shape
        for i, spec in enumerate(self.specs):
            layer = self._build_layer(spec, shape, glorot=(i == last_dense_i))
            shape = layer.output_shape(shape)
            self.layers.append(layer)
        self.output_shape = shape

        rng = np.random.default_rng(seed)
        for layer in self.layers:
            layer.init_params(rng, self.dtype)

    def _build_layer(self, spec: LayerSpec, in_shape, glorot: bool) -> Layer:
        if spec.kind == "Conv2D":
            if len(in_shape) != 3:
                raise ShapeError(f"Conv2D needs a spatial input, got {in_shape}")
            if spec.filters is None:
                raise ConfigError("Conv2D spec needs a filter count")
            return Conv2D(in_shape[2], spec.filters, impl=self.conv_impl)
        if spec.kind == "ReLU":
            return ReLU()
        if spec.kind == "MaxPool2x2":
            return MaxPool2x2()
        if spec.kind == "Dropout":
            if spec.rate is None:
                raise ConfigError("Dropout spec needs a rate")
            return Dropout(spec.rate)
        if spec.kind == "Flatten":
            return Flatten()
        if spec.kind == "Dense":
            if len(in_shape) != 1:
                raise ShapeError(f"Dense needs a flat input, got {in_shape}")
            if spec.units is None:
                raise ConfigError("Dense spec needs a unit count")
            return Dense(in_shape[0], spec.units, init="glorot" if glorot else "he")
        if spec.kind == "Softmax":
            return Softmax()
        raise ConfigError(f"unknown layer kind {spec.kind!r}")

    # -- forward / backward -------------------------------------------------

    def forward(self, x: np.ndarray, training: bool = False, rng=None) -> np.ndarray:
        """Batched forward; x is (N,) + input_shape. Returns class probabilities."""
        x = np.asarray(x, dtype=self.dtype)
        if tuple(x.shape[1:]) != self.input_shape:
            raise ShapeError(
                f"network expects input {self.input_shape}, got {tuple(x.shape[1:])}"
            )
        for layer in self.layers:
            if layer.kind == "Softmax":
                self.last_logits = x
            x = layer.forward(x, training=training, rng=rng)
        self._forward_done = True
        return x

    def backward(self, dlogits: np.ndarray) -> np.ndarray:
        """Backpropagate from below the softmax (dLoss/dLogits) to the input.

        Parameter gradients accumulate into each layer's Param.grad.
        """
        if not self._forward_done:
            raise StateError("backward called without a preceding forward")
        layers = self.layers
        if layers and layers[-1].kind == "Softmax":
            layers = layers[:-1]
        dy = dlogits
        for layer in reversed(layers):
            dy = layer.backward(dy)
        return dy

    def mean_cross_entropy(self, targets: np.ndarray) -> float:
        """Mean batch cross-entropy from the logits of the last forward.

        Computed as logsumexp(z) - z[target], which stays exactly
        consistent with the combined softmax gradient (probs - target)
        even where probabilities underflow.
        """
        if self.last_logits is None:
            raise StateError("no logits cached; forward a softmax-terminated net first")
        z = self.last_logits.astype(np.float64, copy=False)
        m = z.max(axis=1, keepdims=True)
        lse = m[:, 0] + np.log(np.exp(z - m).sum(axis=1))
        return float((lse - (z * targets).sum(axis=1)).mean())

    def loss_and_grad(self, x: np.ndarray, targets: np.ndarray, rng=None) -> tuple[float, np.ndarray]:
        """Mean cross-entropy over a batch plus backprop (training mode).

        targets: (N, K) one-hot rows. Gradients accumulate; call
        zero_grads() between steps.
        """
        probs = self.forward(x, training=True, rng=rng)
        n = probs.shape[0]
        loss = self.mean_cross_entropy(targets)
        dlogits = ((probs - targets) / n).astype(self.dtype)
        self.backward(dlogits)
        return loss, probs

    # -- parameters ----------------------------------------------------------

    def parameters(self):
        """Flat (layer_index, Param) list in stack order."""
        out = []
        for i, layer in enumerate(self.layers):
            for p in layer.params:
                out.append((i, p))
        return out

    def param_count(self) -> int:
        return sum(p.value.size for _, p in self.parameters())

    def zero_grads(self):
        for _, p in self.parameters():
            p.grad[...] = 0

    def validate_finite(self):
        """Raise if any parameter holds NaN/Inf."""
        for i, p in self.parameters():
            if not np.all(np.isfinite(p.value)):
                raise FloatingPointError(f"non-finite values in layer {i} param {p.name}")

    def __repr__(self):
        inner = ", ".join(repr(l) for l in self.layers)
        return f"Network[{inner}]"
