"""Learning algorithms: the twin-clipped stochastic actor-critic, its
six-network value-variant, the deterministic baseline, and replay."""

from ..mathcore import SeededRng
from .ddpg import DdpgAgent, DdpgOpt, DdpgParams, ddpg_act, ddpg_update
from .hyper import Hyper, paper_scale
from .replay import Batch, ReplayBuffer, Transition
from .sac import (SacAgent, SacOpt, SacParams, act, polyak_update, q_forward,
                  sample_action, td_target, update_alpha, update_policy,
                  update_q)
from .sac6 import Sac6Agent, Sac6Params

ALGOS = ("csac", "sac6", "ddpg")


def make_agent(algo: str, state_dim: int, action_dim: int, hyper: Hyper,
               init_rng: SeededRng, update_rng: SeededRng):
    if algo == "csac":
        return SacAgent(state_dim, action_dim, hyper, init_rng, update_rng)
    if algo == "sac6":
        return Sac6Agent(state_dim, action_dim, hyper, init_rng, update_rng)
    if algo == "ddpg":
        return DdpgAgent(state_dim, action_dim, hyper, init_rng, update_rng)
    raise ValueError(f"unknown algorithm {algo!r}; expected one of {ALGOS}")


__all__ = [
    "ALGOS", "Batch", "DdpgAgent", "DdpgOpt", "DdpgParams", "Hyper",
    "ReplayBuffer", "Sac6Agent", "Sac6Params", "SacAgent", "SacOpt",
    "SacParams", "Transition", "act", "ddpg_act", "ddpg_update",
    "make_agent", "paper_scale", "polyak_update", "q_forward",
    "sample_action", "td_target", "update_alpha", "update_policy", "update_q",
]
