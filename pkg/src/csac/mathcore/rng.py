"""Deterministic random streams.

A ``SeededRng`` is a thin wrapper over numpy's PCG64 generator that records
its seed material and can spawn statistically independent children with a
stable derivation order, so every component of a run owns its own stream.
"""

from __future__ import annotations

import numpy as np


class SeededRng:
    """Counter-based generator: same seed + same call sequence = same stream."""

    def __init__(self, seed: int | np.random.SeedSequence):
        if isinstance(seed, np.random.SeedSequence):
            self.seed_seq = seed
        else:
            self.seed_seq = np.random.SeedSequence(int(seed))
        self._gen = np.random.Generator(np.random.PCG64(self.seed_seq))

    @property
    def entropy(self):
        return self.seed_seq.entropy

    def spawn(self, n: int) -> list["SeededRng"]:
        return [SeededRng(ss) for ss in self.seed_seq.spawn(n)]

    # -- draws ------------------------------------------------------------

    def uniform(self, low: float, high: float, shape=None) -> np.ndarray:
        return self._gen.uniform(low, high, shape)

    def standard_normal(self, shape=None) -> np.ndarray:
        return self._gen.standard_normal(shape)

    def normal(self, loc: float, scale: float, shape=None) -> np.ndarray:
        return self._gen.normal(loc, scale, shape)

    def poisson(self, lam, shape=None) -> np.ndarray:
        return self._gen.poisson(lam, shape)

    def integers(self, low: int, high: int, shape=None) -> np.ndarray:
        return self._gen.integers(low, high, shape)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def complex_normal(self, shape) -> np.ndarray:
        """CN(0, 1): unit-variance circularly-symmetric complex Gaussian."""
        re = self._gen.standard_normal(shape)
        im = self._gen.standard_normal(shape)
        return (re + 1j * im) / np.sqrt(2.0)
