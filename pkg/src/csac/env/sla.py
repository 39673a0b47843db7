"""Latency sample stores with order-statistic percentile queries.

The percentile of t samples is the j-th smallest with j = floor(Q*(t+1)/100)
clamped into [1, t]. Each window keeps its samples in insertion order and
additionally maintains a two-heap partition for one tracked Q so the hot
query (the per-step SLA check) is O(log t) instead of a full sort.
"""

from __future__ import annotations

import heapq
from typing import Iterable, Optional

import numpy as np


def percentile_index(q: float, t: int) -> int:
    """1-based order-statistic index for the Q-th percentile of t samples."""
    if t < 1:
        raise ValueError("percentile of an empty sample set is undefined")
    if not 0 < q < 100:
        raise ValueError(f"Q must lie in (0, 100), got {q}")
    j = int(q * (t + 1) // 100)
    return min(max(j, 1), t)


class SlaWindow:
    """Append-only per-slice delay store supporting percentile queries."""

    def __init__(self, tracked_q: Optional[float] = None):
        self.samples: list[float] = []
        self.tracked_q = tracked_q
        # _lo is a max-heap (negated) holding the j smallest samples
        self._lo: list[float] = []
        self._hi: list[float] = []

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def step_count(self) -> int:
        return len(self.samples)

    def add(self, delay: float) -> None:
        delay = float(delay)
        self.samples.append(delay)
        if self.tracked_q is None:
            return
        if self._lo and delay > -self._lo[0]:
            heapq.heappush(self._hi, delay)
        else:
            heapq.heappush(self._lo, -delay)
        j = percentile_index(self.tracked_q, len(self.samples))
        while len(self._lo) < j:
            heapq.heappush(self._lo, -heapq.heappop(self._hi))
        while len(self._lo) > j:
            heapq.heappush(self._hi, -heapq.heappop(self._lo))

    def extend(self, delays: Iterable[float]) -> None:
        for d in delays:
            self.add(d)

    def percentile(self, q: Optional[float] = None) -> Optional[float]:
        """Q-th percentile, or None when no samples have been recorded."""
        q = self.tracked_q if q is None else q
        if q is None:
            raise ValueError("no Q given and no tracked Q configured")
        if not self.samples:
            return None
        if q == self.tracked_q and self._lo:
            return -self._lo[0]
        ordered = sorted(self.samples)
        return ordered[percentile_index(q, len(ordered)) - 1]

    def percentile_curve(self, qs: Iterable[float]) -> list[float]:
        """Percentiles for many Q values with a single sort."""
        if not self.samples:
            return []
        ordered = np.sort(np.asarray(self.samples))
        return [float(ordered[percentile_index(q, ordered.size) - 1]) for q in qs]

    def reset(self) -> None:
        self.samples.clear()
        self._lo.clear()
        self._hi.clear()


def naive_percentile(values, q: float) -> float:
    """Reference implementation: sort ascending and index. Test oracle."""
    ordered = sorted(values)
    return ordered[percentile_index(q, len(ordered)) - 1]
