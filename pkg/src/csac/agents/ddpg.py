"""Deterministic policy-gradient baseline: actor, critic, and their targets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..mathcore import (AdamState, Mlp, NumericError, SeededRng, Tensor,
                        adam_step, backward, dump_mlp, dump_sections,
                        load_mlp, load_sections, mlp_forward, no_grad,
                        zero_grads)
from .hyper import Hyper
from .replay import Batch
from .sac import _check_loss, q_forward

CHECKPOINT_KIND = "ddpg"


class DdpgParams:
    """Four networks: actor + critic plus one Polyak target of each."""

    def __init__(self, state_dim: int, action_dim: int, hyper: Hyper,
                 init_rng: SeededRng):
        self.state_dim = state_dim
        self.action_dim = action_dim
        self.gamma = hyper.gamma
        self.tau = hyper.tau
        self.reward_scale = hyper.reward_scale
        self.noise_std = hyper.exploration_noise
        self.actor = Mlp((state_dim, *hyper.hidden, action_dim), "relu",
                         rng=init_rng)
        self.critic = Mlp((state_dim + action_dim, *hyper.hidden, 1), "relu",
                          rng=init_rng)
        self.actor_target = self.actor.clone()
        self.critic_target = self.critic.clone()

    def networks(self) -> list[Mlp]:
        return [self.actor, self.critic, self.actor_target, self.critic_target]

    def all_finite(self) -> bool:
        return all(net.check_finite() for net in self.networks())


@dataclass
class DdpgOpt:
    actor: AdamState
    critic: AdamState

    @classmethod
    def for_params(cls, params: DdpgParams, hyper: Hyper) -> "DdpgOpt":
        return cls(actor=AdamState(list(params.actor.parameters()), lr=hyper.lr_pi),
                   critic=AdamState(list(params.critic.parameters()), lr=hyper.lr_q))


def ddpg_act(params: DdpgParams, s: np.ndarray, mode: str,
             rng: SeededRng) -> np.ndarray:
    s = np.asarray(s, dtype=np.float64).reshape(1, -1)
    with no_grad():
        a = mlp_forward(params.actor, Tensor(s)).tanh().data[0]
    if mode == "explore":
        a = a + rng.normal(0.0, params.noise_std, a.shape)
    return np.clip(a, -1.0, 1.0)


def ddpg_update(params: DdpgParams, batch: Batch, opt: DdpgOpt) -> tuple[float, float]:
    """Critic toward the target-net bootstrap, actor up its own critic,
    Polyak blend on both targets."""
    with no_grad():
        s2 = Tensor(batch.s2)
        a2 = mlp_forward(params.actor_target, s2).tanh()
        q2 = q_forward(params.critic_target, s2, a2).data
        y = params.reward_scale * batch.r + params.gamma * (1.0 - batch.done) * q2

    zero_grads(params.critic.parameters())
    diff = q_forward(params.critic, Tensor(batch.s), Tensor(batch.a)) - Tensor(y)
    critic_loss = (diff * diff).mean()
    _check_loss(float(critic_loss.data), "critic loss")
    backward(critic_loss)
    adam_step(opt.critic)

    zero_grads(params.actor.parameters())
    zero_grads(params.critic.parameters())
    s = Tensor(batch.s)
    a = mlp_forward(params.actor, s).tanh()
    actor_loss = -(q_forward(params.critic, s, a).mean())
    _check_loss(float(actor_loss.data), "actor loss")
    backward(actor_loss)
    adam_step(opt.actor)

    tau = params.tau
    for live, target in ((params.actor, params.actor_target),
                         (params.critic, params.critic_target)):
        for lp, tp in zip(live.parameters(), target.parameters()):
            tp.data *= 1.0 - tau
            tp.data += tau * lp.data
    return float(critic_loss.data), float(actor_loss.data)


class DdpgAgent:
    name = "ddpg"

    def __init__(self, state_dim: int, action_dim: int, hyper: Hyper,
                 init_rng: SeededRng, update_rng: SeededRng):
        hyper.validate()
        self.hyper = hyper
        self.params = DdpgParams(state_dim, action_dim, hyper, init_rng)
        self.opt = DdpgOpt.for_params(self.params, hyper)
        self.rng = update_rng
        self.update_count = 0
        self.policy_update_count = 0

    def act(self, s: np.ndarray, explore: bool, rng: SeededRng | None = None) -> np.ndarray:
        return ddpg_act(self.params, s, "explore" if explore else "eval",
                        rng or self.rng)

    def update(self, batch: Batch) -> dict:
        self.update_count += 1
        jq, jpi = ddpg_update(self.params, batch, self.opt)
        self.policy_update_count += 1
        if not self.params.all_finite():
            raise NumericError(f"non-finite parameters after update {self.update_count}")
        return {"q_loss": jq, "pi_loss": jpi, "alpha": 0.0}

    def network_census(self) -> int:
        return len(self.params.networks())

    def checkpoint(self) -> bytes:
        p = self.params
        sections = [("actor", dump_mlp(p.actor)), ("critic", dump_mlp(p.critic)),
                    ("actor_target", dump_mlp(p.actor_target)),
                    ("critic_target", dump_mlp(p.critic_target))]
        scalars = {"gamma": p.gamma, "tau": p.tau,
                   "reward_scale": p.reward_scale,
                   "noise_std": p.noise_std,
                   "update_count": float(self.update_count)}
        return dump_sections(CHECKPOINT_KIND, sections, scalars)

    def load_checkpoint(self, blob: bytes) -> None:
        kind, sections, scalars = load_sections(blob)
        if kind != CHECKPOINT_KIND:
            raise ValueError(f"checkpoint kind {kind!r} is not {CHECKPOINT_KIND!r}")
        p = self.params
        p.actor = load_mlp(sections["actor"])
        p.critic = load_mlp(sections["critic"])
        p.actor_target = load_mlp(sections["actor_target"])
        p.critic_target = load_mlp(sections["critic_target"])
        self.update_count = int(scalars["update_count"])
        self.opt = DdpgOpt.for_params(p, self.hyper)
