"""Reparameterized tanh-Gaussian policy head.

The policy network emits a mean and a log standard deviation per action
dimension; a sample is mean + exp(log_std) * xi with xi ~ N(0, I), squashed
through tanh into (-1, 1). The log-density accounts for the squash via the
change-of-variables correction.
"""

from __future__ import annotations

import math

import numpy as np

from .rng import SeededRng
from .tensor import Tensor

LOG_STD_MIN = -20.0
LOG_STD_MAX = 2.0
SQUASH_EPS = 1e-6

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def clamp_log_std(log_std: Tensor) -> Tensor:
    return log_std.clip(LOG_STD_MIN, LOG_STD_MAX)


def gaussian_reparam(mean: Tensor, log_std: Tensor, rng: SeededRng,
                     noise: np.ndarray | None = None) -> tuple[Tensor, np.ndarray]:
    """Draw pre-squash actions mean + exp(log_std) * xi, differentiably.

    ``noise`` overrides the draw (fixed-noise gradient checks, replayed
    samples). Returns the pre-squash tensor and the noise actually used.
    """
    log_std = clamp_log_std(log_std)
    xi = rng.standard_normal(mean.shape) if noise is None else noise
    pre = mean + log_std.exp() * Tensor(xi)
    return pre, xi


def tanh_squash_logprob(pre: Tensor, mean: Tensor, log_std: Tensor) -> tuple[Tensor, Tensor]:
    """Squash pre-activations into (-1,1) and return log pi of the result.

    log pi(a|s) = sum_d [ N(pre_d; mean_d, std_d) in log form ]
                - sum_d log(1 - tanh(pre_d)^2 + eps)
    """
    log_std = clamp_log_std(log_std)
    action = pre.tanh()
    z = (pre - mean) * (-log_std).exp()
    gauss = (z * z * -0.5 - log_std).sum(axis=1) - _HALF_LOG_2PI * mean.shape[1]
    correction = ((1.0 - action * action) + SQUASH_EPS).log().sum(axis=1)
    return action, gauss - correction
