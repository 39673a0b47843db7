"""Delay decomposition, SLA penalties, and the return function."""

import itertools

import numpy as np
import pytest

from csac.env import (EnvConfig, SliceSpec, SlaWindow, Topology, UserTask,
                      compute_delay, default_config, penalty, reward,
                      split_cpu_pool)


def task(slice_idx, ap, bits, cycles_per_bit=100.0):
    t = UserTask(user=0, slice_idx=slice_idx, serving_ap=ap, size_bits=bits)
    t.bind_cycles(cycles_per_bit)
    return t


def cfg_with(pools=("A",), **topo_kw):
    topo = Topology(**topo_kw)
    slices = tuple(
        SliceSpec(sid, 1.0, 0.0, latency_bound_s=0.01,
                  cpu_threshold_cycles=0.3 * topo.cpu_max_cycles,
                  penalty_coeff=0.1)
        for sid in pools
    )
    return EnvConfig(topology=topo, slices=slices)


class TestComputeDelay:
    def test_single_task_compute_share(self):
        cfg = cfg_with()
        t = task(0, ap=0, bits=1e7)
        pool = 4e11
        compute_delay([t], np.array([pool]), cfg)
        # D1 = cycles / (pool / 1) exactly; lone user on the AP adds nothing
        assert t.delay_s == pytest.approx(100.0 * 1e7 / pool, rel=1e-12)

    def test_lone_user_has_no_queuing_delay(self):
        cfg = cfg_with()
        t = task(0, ap=3, bits=5e6)
        compute_delay([t], np.array([1e12]), cfg)
        d1 = t.required_cycles / 1e12
        assert t.delay_s == pytest.approx(d1, rel=1e-12)

    def test_three_users_on_one_ap_queuing_oracle(self):
        # burst 1e6 bits, capacity 1e8 bit/s, 2 competing flows -> 0.02 s each
        cfg = cfg_with(burst_bits=1e6, fronthaul_bps=1e8)
        tasks = [task(0, ap=1, bits=4e6) for _ in range(3)]
        pool = 1e14  # so compute delay is negligible
        compute_delay(tasks, np.array([pool]), cfg)
        for t in tasks:
            d1 = t.required_cycles / (pool / 3)
            assert t.delay_s == pytest.approx(0.02 + d1, rel=1e-9)

    def test_zero_pool_hits_delay_ceiling(self):
        cfg = cfg_with()
        t = task(0, ap=0, bits=1e7)
        info = compute_delay([t], np.array([0.0]), cfg)
        assert t.delay_s == cfg.delay_cap_s
        assert info["delay_capped_tasks"] == 1

    def test_fronthaul_violation_flagged(self):
        cfg = cfg_with(fronthaul_bps=1e6)
        t1, t2 = task(0, 0, 3e6), task(0, 0, 3e6)
        t1.rate_bps = 8e5
        t2.rate_bps = 9e5
        info = compute_delay([t1, t2], np.array([1e12]), cfg)
        assert info["fronthaul_violations"] == 1  # 1.7e6 > 1e6 on AP 0


class TestSplitCpuPool:
    def test_weighted_split_over_active_slices(self):
        slices = (SliceSpec("A", 1, 0, 0.01, 1e9, 0.1, pool_weight=1.0),
                  SliceSpec("B", 1, 0, 0.01, 1e9, 0.1, pool_weight=3.0),
                  SliceSpec("C", 1, 0, 0.01, 1e9, 0.1, pool_weight=1.0))
        pools = split_cpu_pool(8e9, slices, np.array([2, 2, 0]))
        np.testing.assert_allclose(pools, [2e9, 6e9, 0.0])

    def test_no_active_tasks_no_pool(self):
        slices = (SliceSpec("A", 1, 0, 0.01, 1e9, 0.1),)
        np.testing.assert_array_equal(split_cpu_pool(1e9, slices, np.array([0])),
                                      [0.0])


class TestPenalty:
    def make(self, n_slices=2, coeff=0.1, eta=0.01, threshold=1e9):
        slices = tuple(SliceSpec(str(i), 1, 0, eta, threshold, coeff)
                       for i in range(n_slices))
        windows = [SlaWindow(tracked_q=95) for _ in range(n_slices)]
        return slices, windows

    def test_no_violation_no_penalty(self):
        slices, windows = self.make()
        t = task(0, 0, 1e6)  # 1e8 cycles < 1e9 threshold
        windows[0].add(0.001)
        total, info = penalty([t], windows, slices, 95)
        assert total == 0.0
        assert info["cpu_violations"].sum() == 0

    def test_two_cpu_violations_sum(self):
        slices, windows = self.make(threshold=1e7)
        tasks = [task(0, 0, 1e6), task(0, 0, 1e6)]  # each needs 1e8 > 1e7
        windows[0].add(0.001)
        total, _ = penalty(tasks, windows, slices, 95)
        assert total == pytest.approx(-0.2)

    def test_percentile_violation_hits_every_task_of_slice(self):
        slices, windows = self.make(eta=0.005)
        windows[0].extend([0.02, 0.03, 0.04])  # f95 far above eta
        tasks = [task(0, 0, 1e6), task(0, 0, 1e6), task(1, 1, 1e6)]
        windows[1].add(0.001)
        total, info = penalty(tasks, windows, slices, 95)
        assert total == pytest.approx(-0.2)  # both slice-0 tasks, not slice 1
        assert info["sla_violations"][0] == 2

    def test_empty_window_is_not_a_violation(self):
        slices, windows = self.make(eta=1e-9)
        t = task(0, 0, 1e6)
        total, _ = penalty([t], windows, slices, 95)
        assert total == 0.0

    def test_exhaustive_disjunction_small_cases(self):
        # every combination of (cpu over, sla over) for up to 3 tasks, 2 slices
        for n_tasks, cpu_over, sla_over in itertools.product(
                range(1, 4), [False, True], [False, True]):
            threshold = 1e7 if cpu_over else 1e12
            eta = 1e-6 if sla_over else 10.0
            slices, windows = self.make(eta=eta, threshold=threshold)
            windows[0].add(0.5)
            tasks = [task(0, 0, 1e6) for _ in range(n_tasks)]
            total, _ = penalty(tasks, windows, slices, 95)
            expected = -0.1 * n_tasks if (cpu_over or sla_over) else 0.0
            assert total == pytest.approx(expected), (n_tasks, cpu_over, sla_over)


class TestReward:
    def test_inverse_mean_delay(self):
        assert reward(np.array([0.2, 0.3]), 0.0) == pytest.approx(4.0)

    def test_penalty_added(self):
        assert reward(np.array([0.2, 0.3]), -0.2) == pytest.approx(3.8)

    def test_halving_delays_doubles_base_term(self):
        d = np.array([0.1, 0.4, 0.25])
        assert reward(d / 2, 0.0) == pytest.approx(2 * reward(d, 0.0))

    def test_zero_delays_floored(self):
        assert reward(np.array([0.0, 0.0]), 0.0) == pytest.approx(1e6)

    def test_no_tasks_returns_penalty_only(self):
        assert reward(np.array([]), 0.0) == 0.0
        assert reward(np.array([]), -0.3) == -0.3
