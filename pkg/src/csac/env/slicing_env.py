"""The slicing control environment.

One decision step: the agent's raw action fixes per-slice transmit power and
the total CPU allocation, the slot's service requests arrive, a channel is
drawn, beamformers/rates/delays follow, SLA windows absorb the new delays,
and the reward is the inverse mean delay minus SLA penalties. Observations
are 4 blocks per slice (arrivals, mean rate, allocated CPU, mean latency),
each min-max normalized by fixed config bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..mathcore.rng import SeededRng
from .channel import beamform, compute_rates, draw_channel
from .config import EnvConfig, default_config
from .latency import (compute_delay, make_tasks, penalty, reward,
                      split_cpu_pool)
from .sla import SlaWindow
from .traffic import sample_arrivals


@dataclass
class ActionVec:
    """Raw agent output mapped onto physical allocation ranges."""

    raw: np.ndarray                 # (L+1,) in [-1, 1]
    slice_powers_w: np.ndarray      # (L,) in [0, p_max]
    cpu_total_cycles: float         # in [0, cpu_max]
    clipped_components: int


@dataclass
class StepOutcome:
    state: np.ndarray
    reward: float
    done: bool
    info: dict = field(default_factory=dict)


class SlicingEnv:
    """Single-owner simulator instance; share nothing mutable across threads."""

    def __init__(self, cfg: EnvConfig | None = None, seed: int = 0):
        self.cfg = cfg or default_config()
        self.cfg.validate()
        self._seed = seed
        self.rng = SeededRng(seed)
        self.windows = [SlaWindow(tracked_q=self.cfg.percentile_q)
                        for _ in self.cfg.slices]
        self._t = 0
        self._done = True
        self._arrivals = np.zeros(self.cfg.n_slices, dtype=np.int64)
        self._last_rates = np.zeros(self.cfg.n_slices)
        self._last_pools = np.zeros(self.cfg.n_slices)
        self._last_latency = np.zeros(self.cfg.n_slices)

    # -- API -------------------------------------------------------------

    @property
    def state_dim(self) -> int:
        return self.cfg.state_dim

    @property
    def action_dim(self) -> int:
        return self.cfg.action_dim

    def reset(self, seed: int | None = None) -> np.ndarray:
        """Start a fresh episode; SLA windows persist unless episode-scoped."""
        if seed is not None:
            self._seed = seed
            self.rng = SeededRng(seed)
        if self.cfg.window_scope == "episode":
            for w in self.windows:
                w.reset()
        self._t = 0
        self._done = False
        self._last_rates[:] = 0.0
        self._last_pools[:] = 0.0
        self._last_latency[:] = 0.0
        self._arrivals = sample_arrivals(self.cfg.slices, self.cfg.slot_s,
                                         self.cfg.topology.user_cap, self.rng)
        return self._observe()

    def map_action(self, raw_action: np.ndarray) -> ActionVec:
        raw = np.asarray(raw_action, dtype=np.float64).reshape(-1)
        if raw.size != self.action_dim:
            raise ValueError(f"action length {raw.size} != {self.action_dim}")
        clipped = int(np.sum((raw < -1.0) | (raw > 1.0)))
        raw = np.clip(raw, -1.0, 1.0)
        topo = self.cfg.topology
        powers = (raw[:-1] + 1.0) * 0.5 * topo.p_max_w
        cpu_total = (raw[-1] + 1.0) * 0.5 * topo.cpu_max_cycles
        return ActionVec(raw=raw, slice_powers_w=powers,
                         cpu_total_cycles=cpu_total, clipped_components=clipped)

    def step(self, raw_action: np.ndarray) -> StepOutcome:
        if self._done:
            raise RuntimeError("episode is done; call reset() first")
        cfg, topo = self.cfg, self.cfg.topology
        action = self.map_action(raw_action)

        counts = sample_arrivals(cfg.slices, cfg.slot_s, topo.user_cap, self.rng)
        m_total = int(counts.sum())
        pools = split_cpu_pool(action.cpu_total_cycles, cfg.slices, counts)

        info: dict = {
            "arrivals": counts.copy(),
            "cpu_total_cycles": action.cpu_total_cycles,
            "cpu_pools_cycles": pools.copy(),
            "clipped_components": action.clipped_components,
        }

        if m_total > 0:
            channel = draw_channel(topo, m_total, self.rng)
            sizes = self.rng.uniform(cfg.task_bits_min, cfg.task_bits_max, m_total)
            tasks = make_tasks(counts, channel.serving_ap, sizes, topo.cycles_per_bit)
            task_powers = np.array([action.slice_powers_w[t.slice_idx] for t in tasks])
            v = beamform(channel, task_powers, topo.beamform_noise_w)
            rates = compute_rates(channel, v, topo.bandwidth_hz, topo.noise_w)
            for t, p_w, r_bps in zip(tasks, task_powers, rates):
                t.power_w = float(p_w)
                t.rate_bps = float(r_bps)
                t.tx_time_s = t.size_bits / r_bps if r_bps > 0 else float("inf")
            delay_info = compute_delay(tasks, pools, cfg)
            # vertical-scaling view of the CPU action, relative to demand
            demand = float(sum(t.required_cycles for t in tasks))
            info["cpu_scaling_cycles"] = action.cpu_total_cycles - demand

            delays = np.array([t.delay_s for t in tasks])
            by_slice = [np.array([t.delay_s for t in tasks if t.slice_idx == i])
                        for i in range(cfg.n_slices)]
            for i, w in enumerate(self.windows):
                w.extend(by_slice[i])

            fronthaul_flag = (cfg.fronthaul_in_penalty
                              and delay_info["fronthaul_violations"] > 0)
            pen_total, pen_info = penalty(tasks, self.windows, cfg.slices,
                                          cfg.percentile_q, fronthaul_flag)
            r = reward(delays, pen_total)

            self._last_rates = np.array(
                [rates[[t.user for t in tasks if t.slice_idx == i]].mean()
                 if counts[i] else 0.0 for i in range(cfg.n_slices)])
            self._last_latency = np.array(
                [by_slice[i].mean() if counts[i] else 0.0
                 for i in range(cfg.n_slices)])
            info.update(delay_info)
            info.update(pen_info)
            info["task_delays_s"] = delays
            info["delays_by_slice_s"] = by_slice
            info["rates_bps"] = rates
            info["penalty"] = pen_total
            info["beamformer_power_err"] = float(
                np.max(np.abs(np.sum(np.abs(v) ** 2, axis=0) - task_powers))
            ) if m_total else 0.0
        else:
            pen_total = 0.0
            r = reward(np.array([]), pen_total)
            self._last_rates = np.zeros(cfg.n_slices)
            self._last_latency = np.zeros(cfg.n_slices)
            info["task_delays_s"] = np.array([])
            info["delays_by_slice_s"] = [np.array([]) for _ in range(cfg.n_slices)]
            info["percentiles_s"] = [w.percentile(cfg.percentile_q)
                                     for w in self.windows]
            info["penalty"] = 0.0
            info["cpu_scaling_cycles"] = action.cpu_total_cycles

        self._arrivals = counts
        self._last_pools = pools
        self._t += 1
        self._done = self._t >= cfg.episode_len
        return StepOutcome(state=self._observe(), reward=float(r),
                           done=self._done, info=info)

    # -- observation -------------------------------------------------------

    def _observe(self) -> np.ndarray:
        cfg, topo = self.cfg, self.cfg.topology
        blocks = np.concatenate([
            self._arrivals / topo.user_cap,
            self._last_rates / cfg.rate_norm_bps,
            self._last_pools / topo.cpu_max_cycles,
            self._last_latency / cfg.delay_cap_s,
        ])
        return np.clip(blocks, 0.0, 1.0)
