"""Minimal tensor/neural-network engine: forward, backward, Adam.

Dense arrays are numpy ndarrays in row-major layout, float32 storage by
default with all reductions accumulated in float64. Spatial activations
are shaped (H, W, C); batched variants prepend N.
"""

from gazebot.nn.layers import (
    Conv2D,
    Dense,
    Dropout,
    Flatten,
    MaxPool2x2,
    ReLU,
    Softmax,
    conv2d_forward,
    cross_entropy,
    dense_forward,
    dropout,
    maxpool2x2,
    relu,
    softmax,
)
from gazebot.nn.network import LayerSpec, Network
from gazebot.nn.optim import AdamState, adam_step
from gazebot.nn.gradcheck import gradient_check
from gazebot.nn.weights_io import load_weights, save_weights

__all__ = [
    "Conv2D",
    "Dense",
    "Dropout",
    "Flatten",
    "MaxPool2x2",
    "ReLU",
    "Softmax",
    "conv2d_forward",
    "cross_entropy",
    "dense_forward",
    "dropout",
    "maxpool2x2",
    "relu",
    "softmax",
    "LayerSpec",
    "Network",
    "AdamState",
    "adam_step",
    "gradient_check",
    "load_weights",
    "save_weights",
]
