"""Tanh-Gaussian head: sampling statistics and squash-corrected densities."""

import math

import numpy as np
import pytest

from csac.mathcore import (SQUASH_EPS, SeededRng, Tensor, backward,
                           gaussian_reparam, tanh_squash_logprob)


def test_tiny_log_std_gives_deterministic_mean():
    mean = Tensor(np.full((4, 2), 0.37))
    log_std = Tensor(np.full((4, 2), -50.0))  # clamped to -20
    pre, _ = gaussian_reparam(mean, log_std, SeededRng(0))
    np.testing.assert_allclose(pre.data, 0.37, atol=1e-7)


def test_recorded_noise_reproduces_sample():
    mean = Tensor(np.zeros((3, 2)))
    log_std = Tensor(np.full((3, 2), -0.5))
    pre1, xi = gaussian_reparam(mean, log_std, SeededRng(123))
    pre2, _ = gaussian_reparam(mean, log_std, SeededRng(999), noise=xi)
    assert np.array_equal(pre1.data, pre2.data)


def test_empirical_std_matches_log_std():
    n = 100_000
    log_std = -0.3
    mean = Tensor(np.zeros((n, 1)))
    pre, _ = gaussian_reparam(mean, Tensor(np.full((n, 1), log_std)), SeededRng(21))
    target = math.exp(log_std)
    # std of the sample std estimate ~ sigma/sqrt(2n)
    assert abs(pre.data.std() - target) < 3 * target / math.sqrt(2 * n)


def test_logprob_at_standard_normal_mode():
    d = 3
    pre = Tensor(np.zeros((1, d)))
    mean = Tensor(np.zeros((1, d)))
    log_std = Tensor(np.zeros((1, d)))
    a, logp = tanh_squash_logprob(pre, mean, log_std)
    np.testing.assert_array_equal(a.data, np.zeros((1, d)))
    expected = d * (-0.5 * math.log(2 * math.pi)) - d * math.log(1.0 + SQUASH_EPS)
    assert logp.data[0] == pytest.approx(expected, abs=1e-12)


def test_squashed_actions_stay_in_unit_box():
    rng = SeededRng(4)
    pre_v = rng.standard_normal((1000, 4)) * 20.0
    a, logp = tanh_squash_logprob(Tensor(pre_v), Tensor(np.zeros((1000, 4))),
                                  Tensor(np.zeros((1000, 4))))
    assert np.all(np.abs(a.data) <= 1.0)
    assert np.isfinite(logp.data).all()  # squash epsilon keeps the density finite
    moderate = np.abs(pre_v) <= 15.0     # below f64 tanh saturation
    assert np.all(np.abs(a.data[moderate]) < 1.0)


def test_density_integrates_to_one_on_grid():
    # change-of-variables check in 1-D: integrate exp(log pi(a)) over (-1, 1)
    mean_v, log_std_v = 0.4, -0.2
    grid = np.linspace(-1 + 1e-9, 1 - 1e-9, 400_001)
    pre_v = np.arctanh(grid)
    a, logp = tanh_squash_logprob(
        Tensor(pre_v.reshape(-1, 1)),
        Tensor(np.full((grid.size, 1), mean_v)),
        Tensor(np.full((grid.size, 1), log_std_v)),
    )
    np.testing.assert_allclose(a.data[:, 0], grid, atol=1e-12)
    mass = np.trapezoid(np.exp(logp.data), grid)
    assert mass == pytest.approx(1.0, abs=1e-3)


def test_logprob_gradients_flow_to_mean_and_log_std():
    rng = SeededRng(17)
    mean = Tensor.param(rng.standard_normal((6, 2)) * 0.1)
    log_std = Tensor.param(rng.standard_normal((6, 2)) * 0.1)
    xi = rng.standard_normal((6, 2))

    def build():
        pre, _ = gaussian_reparam(mean, log_std, rng, noise=xi)
        _, logp = tanh_squash_logprob(pre, mean, log_std)
        return logp.mean()

    backward(build())
    assert mean.grad is not None and log_std.grad is not None

    h = 1e-6
    for p in (mean, log_std):
        flat, gflat = p.data.reshape(-1), p.grad.reshape(-1)
        for i in range(0, flat.size, 3):
            orig = flat[i]
            flat[i] = orig + h
            hi = float(build().data)
            flat[i] = orig - h
            lo = float(build().data)
            flat[i] = orig
            fd = (hi - lo) / (2 * h)
            assert gflat[i] == pytest.approx(fd, rel=1e-4, abs=1e-7)
