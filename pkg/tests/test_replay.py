"""Replay buffer: FIFO overwrite, uniform sampling, bit-exact round-trips."""

import numpy as np
import pytest
from scipy.stats import chi2

from csac.agents import ReplayBuffer, Transition
from csac.mathcore import SeededRng


def tr(val, state_dim=2, action_dim=1):
    return Transition(s=np.full(state_dim, val), a=np.full(action_dim, val),
                      r=float(val), s2=np.full(state_dim, val + 0.5), done=False)


def test_fifo_overwrite_keeps_newest():
    buf = ReplayBuffer(3, 2, 1)
    for v in (1, 2, 3, 4):
        buf.push_transition(tr(v))
    assert len(buf) == 3
    kept = sorted(buf.contents().r[:, 0])
    assert kept == [2.0, 3.0, 4.0]


def test_sample_not_ready_below_batch_size():
    buf = ReplayBuffer(10, 2, 1)
    buf.push_transition(tr(1))
    assert buf.sample(2, SeededRng(0)) is None
    buf.push_transition(tr(2))
    assert buf.sample(2, SeededRng(0)) is not None


def test_round_trip_preserves_transition_bits():
    buf = ReplayBuffer(4, 3, 2)
    rng = SeededRng(3)
    s, a, s2 = rng.standard_normal(3), rng.standard_normal(2), rng.standard_normal(3)
    buf.push(s, a, 0.123456789123456789, s2, True)
    got = buf.sample(1, SeededRng(0))
    assert np.array_equal(got.s[0], s)
    assert np.array_equal(got.a[0], a)
    assert got.r[0, 0] == 0.123456789123456789
    assert np.array_equal(got.s2[0], s2)
    assert got.done[0, 0] == 1.0


def test_sampling_uniform_chi_square():
    n_slots, draws = 20, 100_000
    buf = ReplayBuffer(n_slots, 1, 1)
    for v in range(n_slots):
        buf.push_transition(tr(v, 1, 1))
    rng = SeededRng(11)
    counts = np.zeros(n_slots)
    for _ in range(draws // n_slots):
        batch = buf.sample(n_slots, rng)
        vals = batch.r[:, 0].astype(int)
        counts += np.bincount(vals, minlength=n_slots)
    expected = draws / n_slots
    stat = float(((counts - expected) ** 2 / expected).sum())
    # generous: 99.9th percentile of chi2 with n_slots-1 dof
    assert stat < chi2.ppf(0.999, n_slots - 1)


def test_sample_with_replacement_allowed():
    buf = ReplayBuffer(4, 1, 1)
    for v in range(2):
        buf.push_transition(tr(v, 1, 1))
    batch = buf.sample(2, SeededRng(1))
    assert batch is not None and len(batch) == 2


def test_capacity_one_always_latest():
    buf = ReplayBuffer(1, 1, 1)
    for v in range(5):
        buf.push_transition(tr(v, 1, 1))
    assert buf.contents().r[0, 0] == 4.0


def test_invalid_capacity_rejected():
    with pytest.raises(ValueError):
        ReplayBuffer(0, 1, 1)
