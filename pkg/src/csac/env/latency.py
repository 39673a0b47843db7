"""Per-task delays, SLA penalties, and the inverse-latency return."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import EnvConfig, SliceSpec
from .sla import SlaWindow

MIN_DELAY_S = 1e-6  # floor applied before inverting the mean delay


@dataclass
class UserTask:
    """One service request: placement, size, and its per-slot outcomes."""

    user: int
    slice_idx: int
    serving_ap: int
    size_bits: float
    required_cycles: float = field(init=False)
    power_w: float = 0.0
    rate_bps: float = 0.0
    tx_time_s: float = float("inf")
    delay_s: float = 0.0

    def __post_init__(self):
        if self.size_bits <= 0:
            raise ValueError("task size must be positive")
        self.required_cycles = 0.0  # set by bind_cycles

    def bind_cycles(self, cycles_per_bit: float) -> None:
        self.required_cycles = cycles_per_bit * self.size_bits


def make_tasks(slice_counts: np.ndarray, serving_ap: np.ndarray,
               size_bits: np.ndarray, cycles_per_bit: float) -> list[UserTask]:
    tasks = []
    user = 0
    for slice_idx, count in enumerate(slice_counts):
        for _ in range(int(count)):
            t = UserTask(user=user, slice_idx=slice_idx,
                         serving_ap=int(serving_ap[user]),
                         size_bits=float(size_bits[user]))
            t.bind_cycles(cycles_per_bit)
            tasks.append(t)
            user += 1
    return tasks


def split_cpu_pool(total_cycles: float, slices: tuple[SliceSpec, ...],
                   active_counts: np.ndarray) -> np.ndarray:
    """Share the allocated pool across slices with active tasks, by weight."""
    weights = np.array([s.pool_weight for s in slices])
    weights = weights * (np.asarray(active_counts) > 0)
    wsum = weights.sum()
    if wsum <= 0:
        return np.zeros(len(slices))
    return total_cycles * weights / wsum


def compute_delay(tasks: list[UserTask], slice_pools_cycles: np.ndarray,
                  cfg: EnvConfig) -> dict:
    """Fill each task's total delay: compute share plus fronthaul queuing.

    Compute: a slice's pool is shared equally by its active tasks, so
    D1 = required_cycles / (pool / count). Queuing: every other flow on the
    same AP link is competitive, D2 = burst * (flows - 1) / capacity. A slice
    with active tasks but zero pool hits the configured delay ceiling.
    """
    topo = cfg.topology
    counts = np.zeros(cfg.n_slices, dtype=np.int64)
    ap_users = np.zeros(topo.n_aps, dtype=np.int64)
    for t in tasks:
        counts[t.slice_idx] += 1
        ap_users[t.serving_ap] += 1

    capped = 0
    fronthaul_load = np.zeros(topo.n_aps)
    for t in tasks:
        pool = slice_pools_cycles[t.slice_idx]
        if pool <= 0:
            d1 = cfg.delay_cap_s
            capped += 1
        else:
            speed = pool / counts[t.slice_idx]
            d1 = t.required_cycles / speed
        competing = max(ap_users[t.serving_ap] - 1, 0)
        d2 = topo.burst_bits * competing / topo.fronthaul_bps
        t.delay_s = min(d1 + d2, cfg.delay_cap_s)
        fronthaul_load[t.serving_ap] += t.rate_bps

    violations = fronthaul_load > topo.fronthaul_bps
    return {
        "slice_counts": counts,
        "ap_users": ap_users,
        "fronthaul_load_bps": fronthaul_load,
        "fronthaul_violations": int(violations.sum()),
        "delay_capped_tasks": capped,
    }


def penalty(tasks: list[UserTask], windows: list[SlaWindow],
            slices: tuple[SliceSpec, ...], q: float,
            fronthaul_violated: bool = False) -> tuple[float, dict]:
    """Sum of per-task penalties under the CPU-threshold / percentile test.

    A task is penalized when its cycle demand exceeds the slice threshold or
    when the slice's Q-th delay percentile (including this step's samples)
    exceeds the latency bound; either arm fires the full per-task penalty.
    """
    total = 0.0
    cpu_viol = np.zeros(len(slices), dtype=np.int64)
    sla_viol = np.zeros(len(slices), dtype=np.int64)
    perc = [w.percentile(q) for w in windows]
    for t in tasks:
        spec = slices[t.slice_idx]
        over_cpu = t.required_cycles > spec.cpu_threshold_cycles
        p = perc[t.slice_idx]
        over_sla = p is not None and p > spec.latency_bound_s
        if over_cpu:
            cpu_viol[t.slice_idx] += 1
        if over_sla:
            sla_viol[t.slice_idx] += 1
        if over_cpu or over_sla or fronthaul_violated:
            total -= spec.penalty_coeff
    info = {"cpu_violations": cpu_viol, "sla_violations": sla_viol,
            "percentiles_s": perc}
    return total, info


def reward(delays_s: np.ndarray, penalty_total: float) -> float:
    """Inverse mean per-task delay plus the (non-positive) penalty sum."""
    if len(delays_s) == 0:
        return penalty_total
    mean_delay = float(np.mean(np.maximum(delays_s, MIN_DELAY_S)))
    return 1.0 / mean_delay + penalty_total
