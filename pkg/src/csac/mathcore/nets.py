"""Fully-connected networks over the autodiff tensor type."""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from .rng import SeededRng
from .tensor import ShapeError, Tensor

ACTIVATIONS = ("gelu", "relu")


class Mlp:
    """Affine stack with a smooth hidden nonlinearity and a linear output.

    ``widths`` runs input -> hidden... -> output; weights are stored as
    (fan_in, fan_out) matrices so a batch forward is ``x @ W + b``.
    """

    def __init__(self, widths: Sequence[int], activation: str = "gelu",
                 rng: SeededRng | None = None):
        if len(widths) < 2:
            raise ShapeError("an Mlp needs at least an input and an output width")
        if any(w < 1 for w in widths):
            raise ShapeError(f"non-positive layer width in {widths}")
        if activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {activation!r}; expected one of {ACTIVATIONS}")
        self.widths = tuple(int(w) for w in widths)
        self.activation = activation
        self.weights: list[Tensor] = []
        self.biases: list[Tensor] = []
        rng = rng or SeededRng(0)
        for fan_in, fan_out in zip(self.widths[:-1], self.widths[1:]):
            # uniform fan-in scaling keeps pre-activations O(1) at any depth
            bound = 1.0 / np.sqrt(fan_in)
            self.weights.append(Tensor.param(rng.uniform(-bound, bound, (fan_in, fan_out))))
            self.biases.append(Tensor.param(np.zeros(fan_out)))

    @property
    def in_width(self) -> int:
        return self.widths[0]

    @property
    def out_width(self) -> int:
        return self.widths[-1]

    def parameters(self) -> Iterator[Tensor]:
        for w, b in zip(self.weights, self.biases):
            yield w
            yield b

    def check_finite(self) -> bool:
        return all(np.isfinite(p.data).all() for p in self.parameters())

    def copy_from(self, other: "Mlp") -> None:
        """Overwrite parameters in place with another net's values."""
        if other.widths != self.widths:
            raise ShapeError(f"width mismatch: {other.widths} vs {self.widths}")
        for dst, src in zip(self.parameters(), other.parameters()):
            dst.data[...] = src.data

    def clone(self) -> "Mlp":
        out = Mlp(self.widths, self.activation)
        out.copy_from(self)
        return out


def mlp_forward(net: Mlp, x: Tensor) -> Tensor:
    """Batched forward pass: hidden layers activated, output layer linear."""
    if x.data.ndim != 2:
        raise ShapeError(f"expected a (batch, features) input, got shape {x.shape}")
    if x.data.shape[1] != net.in_width:
        raise ShapeError(f"input width {x.data.shape[1]} != net input width {net.in_width}")
    h = x
    last = len(net.weights) - 1
    for i, (w, b) in enumerate(zip(net.weights, net.biases)):
        h = h @ w + b
        if i < last:
            h = h.gelu() if net.activation == "gelu" else h.relu()
    return h
