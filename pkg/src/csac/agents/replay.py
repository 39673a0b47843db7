"""Uniform FIFO experience replay, safe for concurrent producers/consumers."""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from ..mathcore.rng import SeededRng


@dataclass(frozen=True)
class Transition:
    s: np.ndarray
    a: np.ndarray
    r: float
    s2: np.ndarray
    done: bool


@dataclass(frozen=True)
class Batch:
    s: np.ndarray      # (B, S)
    a: np.ndarray      # (B, A)
    r: np.ndarray      # (B, 1)
    s2: np.ndarray     # (B, S)
    done: np.ndarray   # (B, 1)

    def __len__(self) -> int:
        return self.s.shape[0]


class ReplayBuffer:
    """Ring store; oldest entries are overwritten, sampling is uniform
    with replacement. Push and sample hold one lock, so a sample never
    observes a torn transition."""

    def __init__(self, capacity: int, state_dim: int, action_dim: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = int(capacity)
        self._s = np.zeros((capacity, state_dim))
        self._a = np.zeros((capacity, action_dim))
        self._r = np.zeros((capacity, 1))
        self._s2 = np.zeros((capacity, state_dim))
        self._done = np.zeros((capacity, 1))
        self._cursor = 0
        self._size = 0
        self._lock = threading.Lock()

    def __len__(self) -> int:
        with self._lock:
            return self._size

    def push(self, s, a, r, s2, done) -> None:
        with self._lock:
            i = self._cursor
            self._s[i] = s
            self._a[i] = a
            self._r[i, 0] = r
            self._s2[i] = s2
            self._done[i, 0] = float(done)
            self._cursor = (i + 1) % self.capacity
            self._size = min(self._size + 1, self.capacity)

    def push_transition(self, tr: Transition) -> None:
        self.push(tr.s, tr.a, tr.r, tr.s2, tr.done)

    def sample(self, batch_size: int, rng: SeededRng) -> Batch | None:
        """Uniform sample, or None while the buffer holds fewer rows."""
        with self._lock:
            if self._size < batch_size:
                return None
            idx = rng.integers(0, self._size, batch_size)
            return Batch(s=self._s[idx].copy(), a=self._a[idx].copy(),
                         r=self._r[idx].copy(), s2=self._s2[idx].copy(),
                         done=self._done[idx].copy())

    def contents(self) -> Batch:
        """Snapshot of everything currently stored (test support)."""
        with self._lock:
            n = self._size
            order = (np.arange(n) + (self._cursor - n)) % self.capacity
            return Batch(s=self._s[order].copy(), a=self._a[order].copy(),
                         r=self._r[order].copy(), s2=self._s2[order].copy(),
                         done=self._done[order].copy())
