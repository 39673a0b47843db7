"""Simulator configuration: network topology, slice contracts, episode knobs.

Config files are flat INI (``key = value`` under ``[topology]``,
``[traffic]``, ``[sla]``, ``[episode]`` and one ``[slices.<id>]`` per slice).
Every run serializes its fully-resolved config back to disk for provenance.
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, field, fields, replace

import numpy as np


class ConfigError(ValueError):
    """Invalid or inconsistent configuration."""


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) * 1e-3


@dataclass(frozen=True)
class SliceSpec:
    """Per-slice traffic statistics and SLA contract."""

    slice_id: str
    mean_arrivals: float          # requests/slot, Gaussian mean
    std_arrivals: float           # requests/slot, Gaussian std
    latency_bound_s: float        # percentile SLA upper bound
    cpu_threshold_cycles: float   # per-task cycle budget before penalty
    penalty_coeff: float          # per-task penalty on violation
    pool_weight: float = 1.0      # share of the CPU pool among active slices

    def validate(self) -> None:
        if self.mean_arrivals < 0 or self.std_arrivals < 0:
            raise ConfigError(f"slice {self.slice_id}: negative traffic parameter")
        if self.latency_bound_s <= 0:
            raise ConfigError(f"slice {self.slice_id}: latency bound must be positive")
        if self.cpu_threshold_cycles <= 0:
            raise ConfigError(f"slice {self.slice_id}: CPU threshold must be positive")
        if self.penalty_coeff < 0:
            raise ConfigError(f"slice {self.slice_id}: negative penalty coefficient")
        if self.pool_weight < 0:
            raise ConfigError(f"slice {self.slice_id}: negative pool weight")


@dataclass(frozen=True)
class Topology:
    """Radio and compute plant shared by every slice."""

    n_aps: int = 10
    user_cap: int = 17
    bandwidth_hz: float = 10e6
    noise_w: float = dbm_to_watts(-102.0)
    beamform_noise_w: float = dbm_to_watts(-102.0)
    antenna_gain_dbi: float = 9.0
    shadowing_std_db: float = 8.0
    pathloss_log10: bool = False      # False follows the printed log2 law
    d_min_km: float = 0.001
    d_max_km: float = 0.6
    p_max_w: float = 1.0
    cpu_max_cycles: float = 2.5e12    # aggregate edge pool, cycles/s
    cycles_per_bit: float = 100.0
    fronthaul_bps: float = 1e9
    burst_bits: float = 1e6

    def validate(self) -> None:
        if self.n_aps < 1:
            raise ConfigError("topology: need at least one access point")
        if self.user_cap < 1:
            raise ConfigError("topology: user cap must be >= 1")
        for name in ("bandwidth_hz", "noise_w", "beamform_noise_w", "p_max_w",
                     "cpu_max_cycles", "cycles_per_bit", "fronthaul_bps", "burst_bits"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"topology: {name} must be strictly positive")
        if not 0 < self.d_min_km <= self.d_max_km:
            raise ConfigError("topology: need 0 < d_min_km <= d_max_km")

    @property
    def antenna_gain_linear(self) -> float:
        return 10.0 ** (self.antenna_gain_dbi / 10.0)

    def pathloss_db(self, d_km):
        """Distance-dependent attenuation; the log2 form is the default law."""
        d = np.maximum(np.asarray(d_km, dtype=np.float64), self.d_min_km)
        log_d = np.log10(d) if self.pathloss_log10 else np.log2(d)
        return 148.1 + 37.6 * log_d

    def ap_grid_positions(self) -> np.ndarray:
        """Informational AP layout on a grid over the service area (km)."""
        side = math.ceil(math.sqrt(self.n_aps))
        coords = (np.arange(side) + 0.5) * (self.d_max_km / side)
        xx, yy = np.meshgrid(coords, coords)
        return np.stack([xx.ravel(), yy.ravel()], axis=1)[: self.n_aps]


@dataclass(frozen=True)
class EnvConfig:
    topology: Topology = field(default_factory=Topology)
    slices: tuple[SliceSpec, ...] = ()
    slot_s: float = 1.0
    task_bits_min: float = 2e6
    task_bits_max: float = 20e6
    percentile_q: int = 95
    window_scope: str = "global"      # "global" | "episode"
    episode_len: int = 200
    delay_cap_s: float = 1.0
    rate_norm_bps: float = 1e9        # fixed normalizer for the rate state block
    fronthaul_in_penalty: bool = False

    def validate(self) -> None:
        self.topology.validate()
        if not self.slices:
            raise ConfigError("no slices configured")
        seen = set()
        for s in self.slices:
            s.validate()
            if s.slice_id in seen:
                raise ConfigError(f"duplicate slice id {s.slice_id!r}")
            seen.add(s.slice_id)
        if self.slot_s <= 0:
            raise ConfigError("traffic: slot_s must be positive")
        if not 0 < self.task_bits_min <= self.task_bits_max:
            raise ConfigError("traffic: need 0 < task_bits_min <= task_bits_max")
        if not 0 < self.percentile_q < 100:
            raise ConfigError("sla: percentile_q must lie in (0, 100)")
        if self.window_scope not in ("global", "episode"):
            raise ConfigError(f"sla: unknown window_scope {self.window_scope!r}")
        if self.episode_len < 1:
            raise ConfigError("episode: length must be >= 1")
        if self.delay_cap_s <= 0 or self.rate_norm_bps <= 0:
            raise ConfigError("episode: delay_cap_s and rate_norm_bps must be positive")

    @property
    def n_slices(self) -> int:
        return len(self.slices)

    @property
    def state_dim(self) -> int:
        return 4 * self.n_slices

    @property
    def action_dim(self) -> int:
        return self.n_slices + 1


def default_config() -> EnvConfig:
    """Desk-scale three-slice setup; slice A is the tightest, lightest one."""
    topo = Topology()
    cpu_th = 0.3 * topo.cpu_max_cycles
    slices = (
        SliceSpec("A", mean_arrivals=2.0, std_arrivals=1.0, latency_bound_s=0.010,
                  cpu_threshold_cycles=cpu_th, penalty_coeff=0.1),
        SliceSpec("B", mean_arrivals=4.0, std_arrivals=1.0, latency_bound_s=0.020,
                  cpu_threshold_cycles=cpu_th, penalty_coeff=0.1),
        SliceSpec("C", mean_arrivals=4.0, std_arrivals=1.0, latency_bound_s=0.015,
                  cpu_threshold_cycles=cpu_th, penalty_coeff=0.1),
    )
    return EnvConfig(topology=topo, slices=slices)


# -- INI round-trip -----------------------------------------------------------

_TOPOLOGY_KEYS = {f.name: f.type for f in fields(Topology)}
_BOOL_KEYS = {"pathloss_log10", "fronthaul_in_penalty"}
_INT_KEYS = {"n_aps", "user_cap", "percentile_q", "episode_len"}


def _parse_scalar(section: str, key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _BOOL_KEYS:
            lowered = raw.lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        if key in _INT_KEYS:
            return int(raw)
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: {exc}") from exc


def dump_config(cfg: EnvConfig) -> str:
    cp = configparser.ConfigParser()
    cp["topology"] = {k: repr(getattr(cfg.topology, k)) for k in _TOPOLOGY_KEYS}
    cp["traffic"] = {
        "slot_s": repr(cfg.slot_s),
        "task_bits_min": repr(cfg.task_bits_min),
        "task_bits_max": repr(cfg.task_bits_max),
    }
    cp["sla"] = {
        "percentile_q": repr(cfg.percentile_q),
        "window_scope": cfg.window_scope,
    }
    cp["episode"] = {
        "length": repr(cfg.episode_len),
        "delay_cap_s": repr(cfg.delay_cap_s),
        "rate_norm_bps": repr(cfg.rate_norm_bps),
        "fronthaul_in_penalty": repr(cfg.fronthaul_in_penalty),
    }
    for s in cfg.slices:
        cp[f"slices.{s.slice_id}"] = {
            "mean_arrivals": repr(s.mean_arrivals),
            "std_arrivals": repr(s.std_arrivals),
            "eta_s": repr(s.latency_bound_s),
            "cpu_threshold_cycles": repr(s.cpu_threshold_cycles),
            "penalty_coeff": repr(s.penalty_coeff),
            "pool_weight": repr(s.pool_weight),
        }
    out = io.StringIO()
    cp.write(out)
    return out.getvalue()


def parse_config(text: str) -> EnvConfig:
    """Parse an INI config, overlaying the defaults; raises ConfigError."""
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config syntax error: {exc}") from exc

    base = default_config()
    topo_kwargs = {}
    if cp.has_section("topology"):
        for key, raw in cp.items("topology"):
            if key not in _TOPOLOGY_KEYS:
                raise ConfigError(f"[topology] unknown key {key!r}")
            topo_kwargs[key] = _parse_scalar("topology", key, raw)
    topology = replace(base.topology, **topo_kwargs)
    if "beamform_noise_w" not in topo_kwargs and "noise_w" in topo_kwargs:
        topology = replace(topology, beamform_noise_w=topology.noise_w)

    env_kwargs: dict = {}
    if cp.has_section("traffic"):
        for key, raw in cp.items("traffic"):
            if key not in ("slot_s", "task_bits_min", "task_bits_max"):
                raise ConfigError(f"[traffic] unknown key {key!r}")
            env_kwargs[key] = _parse_scalar("traffic", key, raw)
    if cp.has_section("sla"):
        for key, raw in cp.items("sla"):
            if key == "percentile_q":
                env_kwargs[key] = _parse_scalar("sla", key, raw)
            elif key == "window_scope":
                env_kwargs[key] = raw.strip()
            else:
                raise ConfigError(f"[sla] unknown key {key!r}")
    if cp.has_section("episode"):
        mapping = {"length": "episode_len", "delay_cap_s": "delay_cap_s",
                   "rate_norm_bps": "rate_norm_bps",
                   "fronthaul_in_penalty": "fronthaul_in_penalty"}
        for key, raw in cp.items("episode"):
            if key not in mapping:
                raise ConfigError(f"[episode] unknown key {key!r}")
            field_name = mapping[key]
            ini_key = "episode_len" if key == "length" else key
            env_kwargs[field_name] = _parse_scalar("episode", ini_key, raw)

    slice_sections = [s for s in cp.sections() if s.startswith("slices.")]
    slices = base.slices
    if slice_sections:
        specs = []
        for section in slice_sections:
            slice_id = section.split(".", 1)[1]
            vals = dict(cp.items(section))
            def take(key, default=None):
                if key in vals:
                    return _parse_scalar(section, key, vals.pop(key))
                if default is None:
                    raise ConfigError(f"[{section}] missing key {key!r}")
                return default
            spec = SliceSpec(
                slice_id=slice_id,
                mean_arrivals=take("mean_arrivals"),
                std_arrivals=take("std_arrivals"),
                latency_bound_s=take("eta_s"),
                cpu_threshold_cycles=take("cpu_threshold_cycles",
                                          0.3 * topology.cpu_max_cycles),
                penalty_coeff=take("penalty_coeff", 0.1),
                pool_weight=take("pool_weight", 1.0),
            )
            if vals:
                raise ConfigError(f"[{section}] unknown keys {sorted(vals)}")
            specs.append(spec)
        slices = tuple(specs)

    cfg = replace(base, topology=topology, slices=slices, **env_kwargs)
    cfg.validate()
    return cfg


def load_config(path) -> EnvConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
