"""Adam optimizer state and update step."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .tensor import NumericError, Tensor


class AdamState:
    """First/second-moment buffers for a fixed parameter list."""

    def __init__(self, params: Sequence[Tensor], lr: float = 3e-4,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.params = list(params)
        self.lr = float(lr)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.eps = float(eps)
        self.step_count = 0
        self.m = [np.zeros_like(p.data) for p in self.params]
        self.v = [np.zeros_like(p.data) for p in self.params]


def adam_step(state: AdamState, grads: Sequence[np.ndarray] | None = None) -> None:
    """One bias-corrected Adam update on ``state.params``.

    Gradients default to each parameter's accumulated ``.grad``; a missing
    gradient means the parameter did not participate and is left untouched.
    Non-finite gradients abort the whole step before any parameter moves.
    """
    if grads is None:
        grads = [p.grad for p in state.params]
    if len(grads) != len(state.params):
        raise ValueError(f"got {len(grads)} gradients for {len(state.params)} parameters")
    for i, g in enumerate(grads):
        if g is not None and not np.isfinite(g).all():
            raise NumericError(f"non-finite gradient for parameter {i} "
                               f"(shape {state.params[i].shape})")

    state.step_count += 1
    t = state.step_count
    bc1 = 1.0 - state.beta1 ** t
    bc2 = 1.0 - state.beta2 ** t
    for p, g, m, v in zip(state.params, grads, state.m, state.v):
        if g is None:
            continue
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * g * g
        p.data -= state.lr * (m / bc1) / (np.sqrt(v / bc2) + state.eps)
