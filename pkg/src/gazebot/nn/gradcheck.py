"""Finite-difference validation of the analytic backward pass."""

from __future__ import annotations

import numpy as np

from gazebot.nn.network import Network


def gradient_check(
    net: Network,
    x: np.ndarray,
    targets: np.ndarray,
    h: float = 1e-3,
    max_per_tensor: int = 64,
    sample_seed: int = 0,
    training: bool = False,
    mask_seed: int = 0,
) -> float:
    """Max relative error between analytic and central-difference gradients.

    Intended for small nets (< 1e4 parameters), ideally built with
    dtype=float64. When ``training`` is set, every loss evaluation reseeds
    the dropout rng with ``mask_seed`` so all evaluations share masks.

    rel = |analytic - numeric| / (|analytic| + |numeric| + 1e-12), maxed
    over up to ``max_per_tensor`` sampled entries of every parameter.
    """

    def eval_loss() -> float:
        rng = np.random.default_rng(mask_seed) if training else None
        net.forward(x, training=training, rng=rng)
        return net.mean_cross_entropy(targets)

    net.zero_grads()
    rng = np.random.default_rng(mask_seed) if training else None
    net.loss_and_grad(x, targets, rng=rng)
    analytic = [p.grad.copy() for _, p in net.parameters()]

    sampler = np.random.default_rng(sample_seed)
    worst = 0.0
    for (_, p), grad in zip(net.parameters(), analytic):
        flat_val = p.value.reshape(-1)
        flat_grad = grad.reshape(-1)
        n = flat_val.size
        idxs = (
            np.arange(n)
            if n <= max_per_tensor
            else sampler.choice(n, size=max_per_tensor, replace=False)
        )
        for i in idxs:
            orig = flat_val[i]
            flat_val[i] = orig + h
            lp = eval_loss()
            flat_val[i] = orig - h
            lm = eval_loss()
            flat_val[i] = orig
            numeric = (lp - lm) / (2.0 * h)
            a = float(flat_grad[i])
            rel = abs(a - numeric) / (abs(a) + abs(numeric) + 1e-12)
            if rel > worst:
                worst = rel
    return worst
