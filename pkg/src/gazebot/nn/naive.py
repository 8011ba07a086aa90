"""Loop-structured reference kernels.

Deliberately slow: scalar loops with sequential float64 accumulation, the
same arithmetic order the fast im2col path reduces in. Used as the
``impl="naive"`` convolution build and for small-scale equivalence runs.
"""

from __future__ import annotations

import numpy as np


def conv2d_naive(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """3x3 same-size convolution on one (H, W, C) sample, zero borders."""
    h, wd, c = x.shape
    f = w.shape[3]
    out = np.empty((h, wd, f), dtype=x.dtype)
    for y in range(h):
        for xx in range(wd):
            for k in range(f):
                acc = 0.0
                for dy in range(3):
                    sy = y + dy - 1
                    if sy < 0 or sy >= h:
                        continue
                    for dx in range(3):
                        sx = xx + dx - 1
                        if sx < 0 or sx >= wd:
                            continue
                        for ch in range(c):
                            acc += float(x[sy, sx, ch]) * float(w[dy, dx, ch, k])
                out[y, xx, k] = acc + float(b[k])
    return out


def maxpool2x2_naive(x: np.ndarray) -> np.ndarray:
    """Disjoint 2x2 max pooling on one (H, W, C) sample."""
    h, w, c = x.shape
    out = np.empty((h // 2, w // 2, c), dtype=x.dtype)
    for y in range(h // 2):
        for xx in range(w // 2):
            for ch in range(c):
                m = x[2 * y, 2 * xx, ch]
                for dy in range(2):
                    for dx in range(2):
                        v = x[2 * y + dy, 2 * xx + dx, ch]
                        if v > m:
                            m = v
                out[y, xx, ch] = m
    return out


def dense_naive(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """out[j] = sum_i x[i] * w[i, j] + b[j] for one vector sample."""
    n, m = w.shape
    out = np.empty(m, dtype=x.dtype)
    for j in range(m):
        acc = 0.0
        for i in range(n):
            acc += float(x[i]) * float(w[i, j])
        out[j] = acc + float(b[j])
    return out
