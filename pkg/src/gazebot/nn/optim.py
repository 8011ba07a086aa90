"""Adam optimizer with bias correction."""

from __future__ import annotations

import numpy as np

from gazebot.errors import ShapeError


class AdamState:
    """Per-parameter first/second moment estimates plus the step counter."""

    def __init__(self, params, lr=1e-3, beta1=0.9, beta2=0.999, epsilon=1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.t = 0
        self.m = [np.zeros_like(p.value, dtype=np.float64) for p in params]
        self.v = [np.zeros_like(p.value, dtype=np.float64) for p in params]


def adam_step(state: AdamState, params, grads=None) -> None:
    """One in-place Adam update over a parameter list.

    grads defaults to each Param's accumulated .grad. Moment tensors are
    float64; parameters keep their storage dtype.
    """
    if grads is None:
        grads = [p.grad for p in params]
    if len(grads) != len(state.m):
        raise ShapeError(f"expected {len(state.m)} gradients, got {len(grads)}")
    state.t += 1
    t = state.t
    b1, b2 = state.beta1, state.beta2
    corr1 = 1.0 - b1**t
    corr2 = 1.0 - b2**t
    for p, g, m, v in zip(params, grads, state.m, state.v):
        if g.shape != p.value.shape:
            raise ShapeError(f"gradient shape {g.shape} != param shape {p.value.shape}")
        g64 = g.astype(np.float64, copy=False)
        m *= b1
        m += (1.0 - b1) * g64
        v *= b2
        v += (1.0 - b2) * g64 * g64
        mhat = m / corr1
        vhat = v / corr2
        p.value -= (state.lr * mhat / (np.sqrt(vhat) + state.epsilon)).astype(
            p.value.dtype
        )
