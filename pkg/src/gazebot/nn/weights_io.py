"""GZNN weight-file format.

Byte layout (all integers little-endian):

    magic        4 bytes  ASCII "GZNN"
    version      u16      currently 1
    layer count  u16
    per layer:
      kind tag   u8       Conv2D=1 ReLU=2 MaxPool2x2=3 Dropout=4
                          Flatten=5 Dense=6 Softmax=7
      n tensors  u8       0 for parameterless layers
      per tensor:
        ndim     u8
        extents  u32 x ndim
        data     f32 x prod(extents), little-endian, row-major

Storage is float32; save/load round-trips bit-exactly for float32
networks. See docs/formats.md.
"""

from __future__ import annotations

import struct

import numpy as np

from gazebot.errors import InputError, ShapeError
from gazebot.nn.network import Network

MAGIC = b"GZNN"
VERSION = 1

KIND_TAGS = {
    "Conv2D": 1,
    "ReLU": 2,
    "MaxPool2x2": 3,
    "Dropout": 4,
    "Flatten": 5,
    "Dense": 6,
    "Softmax": 7,
}
TAG_KINDS = {v: k for k, v in KIND_TAGS.items()}


def save_weights(net: Network, path) -> None:
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<HH", VERSION, len(net.layers)))
        for layer in net.layers:
            f.write(struct.pack("<BB", KIND_TAGS[layer.kind], len(layer.params)))
            for p in layer.params:
                arr = np.ascontiguousarray(p.value, dtype="<f4")
                f.write(struct.pack("<B", arr.ndim))
                f.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
                f.write(arr.tobytes())


def load_weights(net: Network, path) -> None:
    """Fill an already-built network whose architecture matches the file."""
    with open(path, "rb") as f:
        data = f.read()
    off = 0

    def take(n: int) -> bytes:
        nonlocal off
        if off + n > len(data):
            raise InputError("truncated weight file")
        chunk = data[off : off + n]
        off += n
        return chunk

    if take(4) != MAGIC:
        raise InputError("bad magic; not a GZNN weight file")
    version, n_layers = struct.unpack("<HH", take(4))
    if version != VERSION:
        raise InputError(f"unsupported weight format version {version}")
    if n_layers != len(net.layers):
        raise ShapeError(f"file has {n_layers} layers, network has {len(net.layers)}")
    for layer in net.layers:
        tag, n_tensors = struct.unpack("<BB", take(2))
        if TAG_KINDS.get(tag) != layer.kind:
            raise ShapeError(
                f"layer kind mismatch: file {TAG_KINDS.get(tag)}, network {layer.kind}"
            )
        if n_tensors != len(layer.params):
            raise ShapeError(f"{layer.kind}: file has {n_tensors} tensors")
        for p in layer.params:
            (ndim,) = struct.unpack("<B", take(1))
            shape = struct.unpack(f"<{ndim}I", take(4 * ndim))
            if shape != p.value.shape:
                raise ShapeError(f"tensor shape mismatch: file {shape}, net {p.value.shape}")
            count = int(np.prod(shape)) if shape else 1
            arr = np.frombuffer(take(4 * count), dtype="<f4").reshape(shape)
            p.value = arr.astype(net.dtype)
            p.grad = np.zeros_like(p.value)
    if off != len(data):
        raise InputError(f"{len(data) - off} trailing bytes in weight file")
