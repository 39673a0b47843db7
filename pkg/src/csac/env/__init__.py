"""Slice-enabled cell-free downlink simulator with percentile latency SLAs."""

from .channel import ChannelRealization, beamform, compute_rates, draw_channel
from .config import (ConfigError, EnvConfig, SliceSpec, Topology,
                     default_config, dump_config, load_config, parse_config)
from .latency import (MIN_DELAY_S, UserTask, compute_delay, make_tasks,
                      penalty, reward, split_cpu_pool)
from .sla import SlaWindow, naive_percentile, percentile_index
from .slicing_env import ActionVec, SlicingEnv, StepOutcome
from .traffic import rectified_gaussian_moments, sample_arrivals

__all__ = [
    "ActionVec", "ChannelRealization", "ConfigError", "EnvConfig",
    "MIN_DELAY_S", "SliceSpec", "SlicingEnv", "SlaWindow", "StepOutcome",
    "Topology", "UserTask", "beamform", "compute_delay", "compute_rates",
    "default_config", "draw_channel", "dump_config", "load_config",
    "make_tasks", "naive_percentile", "parse_config", "penalty",
    "percentile_index", "rectified_gaussian_moments", "reward",
    "sample_arrivals", "split_cpu_pool",
]
