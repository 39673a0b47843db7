"""Downlink channel draws, regularized beamforming, and achievable rates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..mathcore.linalg import solve_hermitian
from ..mathcore.rng import SeededRng
from .config import Topology


@dataclass
class ChannelRealization:
    """One slot's channel state: gains, link distances, AP association."""

    gains: np.ndarray          # complex (N, M)
    distances_km: np.ndarray   # (N, M)
    serving_ap: np.ndarray     # (M,) int, argmax |h| per user
    association: np.ndarray    # (N, M) one-hot over APs

    @property
    def n_aps(self) -> int:
        return self.gains.shape[0]

    @property
    def n_users(self) -> int:
        return self.gains.shape[1]


def draw_channel(topology: Topology, n_users: int, rng: SeededRng) -> ChannelRealization:
    """Sample gains h = 10^(-L*(d)/20) * sqrt(gain * shadow) * g, g ~ CN(0,1).

    Link distances are i.i.d. uniform over the service range (clamped away
    from zero); each user is served by the AP with the strongest gain, ties
    broken toward the lowest AP index.
    """
    if n_users < 1:
        raise ValueError("draw_channel needs at least one user")
    n = topology.n_aps
    d = rng.uniform(0.0, topology.d_max_km, (n, n_users))
    d = np.maximum(d, topology.d_min_km)
    amplitude = 10.0 ** (-topology.pathloss_db(d) / 20.0)
    shadow_db = rng.normal(0.0, topology.shadowing_std_db, (n, n_users))
    shadow = 10.0 ** (shadow_db / 10.0)
    g = rng.complex_normal((n, n_users))
    h = amplitude * np.sqrt(topology.antenna_gain_linear * shadow) * g

    serving = np.argmax(np.abs(h), axis=0)
    assoc = np.zeros((n, n_users))
    assoc[serving, np.arange(n_users)] = 1.0
    return ChannelRealization(gains=h, distances_km=d, serving_ap=serving,
                              association=assoc)


def beamform(channel: ChannelRealization, powers: np.ndarray,
             noise_var: float) -> np.ndarray:
    """Regularized beamformers v_m = sqrt(p_m) w_m/||w_m||.

    w_m solves (I_N + sum_j h_j h_j^H / sigma_v^2) w = h_m; one factorization
    serves every user since only the right-hand side changes. The log2
    path-loss law can push the gain term 30+ orders of magnitude above the
    identity, where Cholesky pivots cancel; past that range the same system
    is solved through an eigendecomposition of the (PSD by construction)
    gain term instead.
    """
    if noise_var <= 0:
        raise ValueError("beamforming noise variance must be positive")
    h = channel.gains
    n = channel.n_aps
    s = (h @ h.conj().T) / noise_var
    if float(np.trace(s).real) > 1e12:
        lam, u = np.linalg.eigh(s)
        lam = np.maximum(lam, 0.0)
        w = u @ ((u.conj().T @ h) / (1.0 + lam)[:, None])
    else:
        a = np.eye(n, dtype=np.complex128) + s
        w = solve_hermitian(a, h)
    norms = np.linalg.norm(w, axis=0)
    norms = np.where(norms > 0, norms, 1.0)
    return np.sqrt(np.asarray(powers, dtype=np.float64)) * (w / norms)


def compute_rates(channel: ChannelRealization, beamformers: np.ndarray,
                  bandwidth_hz: float, noise_w: float) -> np.ndarray:
    """Shannon rate per user under inter-user interference (bit/s)."""
    cross = channel.gains.conj().T @ beamformers    # (M, M): h_m^H v_j
    power = np.abs(cross) ** 2
    signal = np.diag(power).copy()
    interference = power.sum(axis=1) - signal
    sinr = signal / (interference + noise_w)
    return bandwidth_hz * np.log2(1.0 + sinr)
