"""Per-slot service-request arrivals.

Each slice draws a rate from a rectified Gaussian (slow traffic variation)
and a Poisson count at that rate; the total across slices is capped at the
subscriber limit with the excess dropped uniformly at random.
"""

from __future__ import annotations

import numpy as np

from ..mathcore.rng import SeededRng
from .config import SliceSpec


def sample_arrivals(slices: tuple[SliceSpec, ...], slot_s: float, user_cap: int,
                    rng: SeededRng) -> np.ndarray:
    """Per-slice arrival counts for one slot, total capped at ``user_cap``."""
    counts = np.empty(len(slices), dtype=np.int64)
    for i, spec in enumerate(slices):
        lam = max(rng.normal(spec.mean_arrivals, spec.std_arrivals), 0.0) \
            if spec.std_arrivals > 0 else max(spec.mean_arrivals, 0.0)
        counts[i] = rng.poisson(lam * slot_s)
    total = int(counts.sum())
    if total > user_cap:
        labels = np.repeat(np.arange(len(slices)), counts)
        keep = rng.permutation(total)[:user_cap]
        counts = np.bincount(labels[keep], minlength=len(slices)).astype(np.int64)
    return counts


def rectified_gaussian_moments(mu: float, sigma: float) -> tuple[float, float]:
    """Mean and variance of max(N(mu, sigma), 0); closed form via Phi/phi."""
    if sigma == 0:
        m = max(mu, 0.0)
        return m, 0.0
    from scipy.stats import norm
    z = mu / sigma
    mean = mu * norm.cdf(z) + sigma * norm.pdf(z)
    second = (mu * mu + sigma * sigma) * norm.cdf(z) + mu * sigma * norm.pdf(z)
    return mean, second - mean * mean
