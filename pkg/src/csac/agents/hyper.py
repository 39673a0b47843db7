"""Training hyperparameters, desk scale by default."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Hyper:
    """Shared knobs for every algorithm variant.

    Desk scale keeps runs in the minutes; ``paper_scale`` switches to the
    five-layer/128-unit networks and the long horizon (hours of CPU time).
    ``reward_scale`` maps the environment's inverse-latency returns (order
    1e2) into a range Adam can track within a desk-scale budget; metrics and
    acceptance checks always report unscaled returns.
    """

    batch_size: int = 128
    hidden: tuple[int, ...] = (64, 64)
    activation: str = "gelu"
    lr_q: float = 3e-4
    lr_pi: float = 3e-4
    lr_alpha: float = 3e-4
    gamma: float = 0.9
    tau: float = 0.001
    freq: int = 2
    start_timesteps: int = 1000
    max_timesteps: int = 20_000
    replay_capacity: int = 100_000
    reward_scale: float = 0.02
    exploration_noise: float = 0.1   # deterministic-actor Gaussian noise
    fixed_alpha: float = 0.2         # entropy weight for the six-net variant
    seed: int = 0

    def validate(self) -> None:
        if self.batch_size < 1 or self.freq < 1:
            raise ValueError("batch_size and freq must be >= 1")
        if not 0 <= self.gamma < 1:
            raise ValueError("gamma must lie in [0, 1)")
        if not 0 < self.tau <= 1:
            raise ValueError("tau must lie in (0, 1]")
        if self.replay_capacity < self.batch_size:
            raise ValueError("replay capacity smaller than one batch")
        if self.max_timesteps < 1:
            raise ValueError("max_timesteps must be >= 1")
        if self.reward_scale <= 0:
            raise ValueError("reward_scale must be positive")


def paper_scale(base: Hyper | None = None) -> Hyper:
    base = base or Hyper()
    return replace(base, hidden=(128,) * 5, gamma=0.99,
                   start_timesteps=10_000, max_timesteps=250_000)
