"""Dense float64 tensors with reverse-mode automatic differentiation.

The engine is deliberately small: the only consumers are fully-connected
policy/critic networks and their losses, so the op set covers affine maps,
smooth elementwise nonlinearities, reductions, concatenation, column slicing
and an elementwise minimum (for twin-critic clipping). Everything is
float64, row-major numpy underneath.
"""

from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.special import erf

ArrayLike = "np.ndarray | float | int | Sequence[float]"

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


class ShapeError(ValueError):
    """Operand shapes are incompatible."""


class GraphStateError(RuntimeError):
    """Backward was invoked without a recorded computation graph."""


class NumericError(ArithmeticError):
    """Non-finite values appeared where finite ones are required."""


_state = threading.local()


def grad_enabled() -> bool:
    return getattr(_state, "grad_enabled", True)


@contextmanager
def no_grad():
    """Disable graph recording on the current thread (rollout fast path)."""
    prev = grad_enabled()
    _state.grad_enabled = False
    try:
        yield
    finally:
        _state.grad_enabled = prev


def _as_array(value) -> np.ndarray:
    if isinstance(value, np.ndarray):
        return value.astype(np.float64, copy=False)
    return np.asarray(value, dtype=np.float64)


def _unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    """Reduce a broadcast gradient back to the operand's shape."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, (g, s) in enumerate(zip(grad.shape, shape)) if s == 1 and g != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape)


class Tensor:
    """A float64 array plus an optional gradient of identical shape."""

    __slots__ = ("data", "grad", "requires_grad", "_backward", "_parents")

    def __init__(self, data, requires_grad: bool = False):
        self.data = _as_array(data)
        self.grad: Optional[np.ndarray] = None
        self.requires_grad = bool(requires_grad)
        self._backward: Optional[Callable[[], None]] = None
        self._parents: tuple = ()

    # -- construction helpers -------------------------------------------------

    @classmethod
    def param(cls, data) -> "Tensor":
        return cls(data, requires_grad=True)

    @classmethod
    def zeros(cls, shape, requires_grad: bool = False) -> "Tensor":
        return cls(np.zeros(shape, dtype=np.float64), requires_grad=requires_grad)

    @property
    def shape(self) -> tuple:
        return self.data.shape

    @property
    def size(self) -> int:
        return self.data.size

    def item(self) -> float:
        return float(self.data.reshape(-1)[0])

    def numpy(self) -> np.ndarray:
        return self.data

    def zero_grad(self) -> None:
        self.grad = None

    def detach(self) -> "Tensor":
        out = Tensor(self.data)
        return out

    def accumulate_grad(self, g: np.ndarray) -> None:
        if self.grad is None:
            self.grad = g.copy()
        else:
            self.grad += g

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"

    # -- graph plumbing -------------------------------------------------------

    def _record(self, parents: tuple, backward: Callable[[], None]) -> "Tensor":
        if grad_enabled() and any(p.requires_grad or p._parents for p in parents):
            self.requires_grad = True
            self._parents = parents
            self._backward = backward
        return self

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other) -> "Tensor":
        other = other if isinstance(other, Tensor) else Tensor(other)
        out = Tensor(self.data + other.data)

        def backward():
            if self.requires_grad or self._parents:
                self.accumulate_grad(_unbroadcast(out.grad, self.data.shape))
            if other.requires_grad or other._parents:
                other.accumulate_grad(_unbroadcast(out.grad, other.data.shape))

        return out._record((self, other), backward)

    __radd__ = __add__

    def __neg__(self) -> "Tensor":
        out = Tensor(-self.data)

        def backward():
            self.accumulate_grad(-out.grad)

        return out._record((self,), backward)

    def __sub__(self, other) -> "Tensor":
        other = other if isinstance(other, Tensor) else Tensor(other)
        return self + (-other)

    def __rsub__(self, other) -> "Tensor":
        return Tensor(other) + (-self)

    def __mul__(self, other) -> "Tensor":
        other = other if isinstance(other, Tensor) else Tensor(other)
        out = Tensor(self.data * other.data)

        def backward():
            if self.requires_grad or self._parents:
                self.accumulate_grad(_unbroadcast(out.grad * other.data, self.data.shape))
            if other.requires_grad or other._parents:
                other.accumulate_grad(_unbroadcast(out.grad * self.data, other.data.shape))

        return out._record((self, other), backward)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Tensor":
        if isinstance(other, Tensor):
            raise TypeError("tensor/tensor division is not supported; multiply by a reciprocal")
        return self * (1.0 / float(other))

    def __pow__(self, exponent: float) -> "Tensor":
        c = float(exponent)
        out = Tensor(self.data ** c)

        def backward():
            self.accumulate_grad(out.grad * c * self.data ** (c - 1.0))

        return out._record((self,), backward)

    def __matmul__(self, other: "Tensor") -> "Tensor":
        if self.data.ndim != 2 or other.data.ndim != 2:
            raise ShapeError(f"matmul expects 2-D operands, got {self.shape} @ {other.shape}")
        if self.data.shape[1] != other.data.shape[0]:
            raise ShapeError(f"inner dimensions disagree: {self.shape} @ {other.shape}")
        out = Tensor(self.data @ other.data)

        def backward():
            if self.requires_grad or self._parents:
                self.accumulate_grad(out.grad @ other.data.T)
            if other.requires_grad or other._parents:
                other.accumulate_grad(self.data.T @ out.grad)

        return out._record((self, other), backward)

    # -- elementwise nonlinearities --------------------------------------------

    def exp(self) -> "Tensor":
        out = Tensor(np.exp(self.data))

        def backward():
            self.accumulate_grad(out.grad * out.data)

        return out._record((self,), backward)

    def log(self) -> "Tensor":
        out = Tensor(np.log(self.data))

        def backward():
            self.accumulate_grad(out.grad / self.data)

        return out._record((self,), backward)

    def tanh(self) -> "Tensor":
        out = Tensor(np.tanh(self.data))

        def backward():
            self.accumulate_grad(out.grad * (1.0 - out.data * out.data))

        return out._record((self,), backward)

    def relu(self) -> "Tensor":
        out = Tensor(np.maximum(self.data, 0.0))

        def backward():
            self.accumulate_grad(out.grad * (self.data > 0.0))

        return out._record((self,), backward)

    def gelu(self) -> "Tensor":
        """x * Phi(x) with the exact standard-normal CDF (erf form)."""
        cdf = 0.5 * (1.0 + erf(self.data / _SQRT2))
        out = Tensor(self.data * cdf)

        def backward():
            pdf = _INV_SQRT_2PI * np.exp(-0.5 * self.data * self.data)
            self.accumulate_grad(out.grad * (cdf + self.data * pdf))

        return out._record((self,), backward)

    def clip(self, lo: float, hi: float) -> "Tensor":
        """Clamp values; gradient passes only through the interior."""
        out = Tensor(np.clip(self.data, lo, hi))

        def backward():
            inside = (self.data > lo) & (self.data < hi)
            self.accumulate_grad(out.grad * inside)

        return out._record((self,), backward)

    # -- reductions & reshaping -------------------------------------------------

    def sum(self, axis: Optional[int] = None, keepdims: bool = False) -> "Tensor":
        out = Tensor(self.data.sum(axis=axis, keepdims=keepdims))

        def backward():
            g = out.grad
            if axis is not None and not keepdims:
                g = np.expand_dims(g, axis)
            self.accumulate_grad(np.broadcast_to(g, self.data.shape).copy())

        return out._record((self,), backward)

    def mean(self, axis: Optional[int] = None, keepdims: bool = False) -> "Tensor":
        count = self.data.size if axis is None else self.data.shape[axis]
        return self.sum(axis=axis, keepdims=keepdims) * (1.0 / count)

    def reshape(self, *shape) -> "Tensor":
        out = Tensor(self.data.reshape(*shape))

        def backward():
            self.accumulate_grad(out.grad.reshape(self.data.shape))

        return out._record((self,), backward)

    def __getitem__(self, key) -> "Tensor":
        out = Tensor(self.data[key])

        def backward():
            g = np.zeros_like(self.data)
            g[key] = out.grad
            self.accumulate_grad(g)

        return out._record((self,), backward)


def concat(tensors: Sequence[Tensor], axis: int = 1) -> Tensor:
    out = Tensor(np.concatenate([t.data for t in tensors], axis=axis))
    offsets = np.cumsum([0] + [t.data.shape[axis] for t in tensors])

    def backward():
        for t, start, stop in zip(tensors, offsets[:-1], offsets[1:]):
            if t.requires_grad or t._parents:
                index = [slice(None)] * out.data.ndim
                index[axis] = slice(start, stop)
                t.accumulate_grad(out.grad[tuple(index)])

    return out._record(tuple(tensors), backward)


def minimum(a: Tensor, b: Tensor) -> Tensor:
    """Elementwise min; the gradient follows the selected operand (ties -> a)."""
    out = Tensor(np.minimum(a.data, b.data))

    def backward():
        take_a = a.data <= b.data
        if a.requires_grad or a._parents:
            a.accumulate_grad(_unbroadcast(out.grad * take_a, a.data.shape))
        if b.requires_grad or b._parents:
            b.accumulate_grad(_unbroadcast(out.grad * ~take_a, b.data.shape))

    return out._record((a, b), backward)


def gelu(x: Tensor) -> Tensor:
    return x.gelu()


def backward(loss: Tensor) -> None:
    """Backpropagate from a scalar loss; the recorded graph is then freed.

    Parameter gradients accumulate into ``.grad``; call ``zero_grad`` on the
    parameters (or use the optimizer helpers) between independent losses.
    """
    if loss.data.size != 1:
        raise ShapeError(f"backward expects a scalar loss, got shape {loss.shape}")
    if not loss._parents:
        raise GraphStateError("backward called on a tensor with no recorded graph")

    topo: list[Tensor] = []
    visited: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(loss, False)]
    while stack:
        node, processed = stack.pop()
        if processed:
            topo.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        for parent in node._parents:
            if id(parent) not in visited:
                stack.append((parent, False))

    loss.grad = np.ones_like(loss.data)
    for node in reversed(topo):
        if node._backward is not None:
            node._backward()
    # free the graph so intermediates can be collected
    for node in topo:
        node._parents = ()
        node._backward = None


def zero_grads(params: Iterable[Tensor]) -> None:
    for p in params:
        p.grad = None
