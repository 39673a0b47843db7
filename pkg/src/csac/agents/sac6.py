"""Six-network stochastic actor-critic baseline with a fixed temperature.

Mirrors the five-network learner but routes the critic bootstrap through a
separate state-value network: V is regressed onto min_i Q'_i(s, a~) - alpha
log pi(a~|s) and the critics bootstrap y = r~ + gamma (1-done) V(s'), as in
the original value-network formulation. ReLU activations throughout.
"""

from __future__ import annotations

import numpy as np
from dataclasses import replace

from ..mathcore import (AdamState, Mlp, NumericError, SeededRng, Tensor,
                        adam_step, backward, dump_mlp, dump_sections,
                        load_mlp, load_sections, mlp_forward, no_grad,
                        zero_grads)
from .hyper import Hyper
from .replay import Batch
from .sac import (SacOpt, SacParams, _check_loss, polyak_update, q_forward,
                  sample_action)
from .sac import act as sac_act

CHECKPOINT_KIND = "sac6"


class Sac6Params(SacParams):
    """SacParams plus a state-value network; temperature is a constant."""

    def __init__(self, state_dim: int, action_dim: int, hyper: Hyper,
                 init_rng: SeededRng):
        super().__init__(state_dim, action_dim, replace(hyper, activation="relu"),
                         init_rng)
        self.value = Mlp((state_dim, *hyper.hidden, 1), "relu", rng=init_rng)
        self.fixed_alpha = hyper.fixed_alpha
        self.log_alpha.data[...] = np.log(hyper.fixed_alpha)

    @property
    def alpha(self) -> float:
        return self.fixed_alpha

    def networks(self) -> list[Mlp]:
        return super().networks() + [self.value]


def sac6_td_target(params: Sac6Params, batch: Batch) -> np.ndarray:
    with no_grad():
        v2 = mlp_forward(params.value, Tensor(batch.s2)).data
    return (params.reward_scale * batch.r
            + params.gamma * (1.0 - batch.done) * v2)


def update_value(params: Sac6Params, batch: Batch, opt_v: AdamState,
                 rng: SeededRng) -> float:
    """Regress V(s) onto the clipped target-critic soft value."""
    with no_grad():
        s = Tensor(batch.s)
        a, logp = sample_action(params, s, rng)
        q1t = q_forward(params.q1_target, s, a).data
        q2t = q_forward(params.q2_target, s, a).data
        target = np.minimum(q1t, q2t) - params.alpha * logp.data
    zero_grads(params.value.parameters())
    diff = mlp_forward(params.value, Tensor(batch.s)) - Tensor(target)
    loss = (diff * diff).mean()
    _check_loss(float(loss.data), "value loss")
    backward(loss)
    adam_step(opt_v)
    return float(loss.data)


class Sac6Agent:
    name = "sac6"

    def __init__(self, state_dim: int, action_dim: int, hyper: Hyper,
                 init_rng: SeededRng, update_rng: SeededRng):
        hyper.validate()
        self.hyper = hyper
        self.params = Sac6Params(state_dim, action_dim, hyper, init_rng)
        self.opt = SacOpt.for_params(self.params, hyper)
        self.opt_value = AdamState(list(self.params.value.parameters()),
                                   lr=hyper.lr_q)
        self.rng = update_rng
        self.update_count = 0
        self.policy_update_count = 0

    def act(self, s: np.ndarray, explore: bool, rng: SeededRng | None = None) -> np.ndarray:
        return sac_act(self.params, s, "explore" if explore else "eval",
                       rng or self.rng)

    def update(self, batch: Batch) -> dict:
        from .sac import update_policy  # shared policy objective
        self.update_count += 1
        y = Tensor(sac6_td_target(self.params, batch))
        losses = []
        for net, state in ((self.params.q1, self.opt.q1),
                           (self.params.q2, self.opt.q2)):
            zero_grads(net.parameters())
            diff = q_forward(net, Tensor(batch.s), Tensor(batch.a)) - y
            loss = (diff * diff).mean()
            _check_loss(float(loss.data), "critic loss")
            backward(loss)
            adam_step(state)
            losses.append(float(loss.data))
        jv = update_value(self.params, batch, self.opt_value, self.rng)
        out = {"q_loss": 0.5 * sum(losses), "value_loss": jv,
               "alpha": self.params.alpha}
        if self.update_count % self.params.freq == 0:
            jpi, logp = update_policy(self.params, batch, self.opt, self.rng)
            polyak_update(self.params)
            self.policy_update_count += 1
            out.update(pi_loss=jpi, entropy=float(-np.mean(logp)))
        if not self.params.all_finite():
            raise NumericError(f"non-finite parameters after update {self.update_count}")
        return out

    def network_census(self) -> int:
        return len(self.params.networks())

    def checkpoint(self) -> bytes:
        p = self.params
        sections = [("policy", dump_mlp(p.policy)),
                    ("q1", dump_mlp(p.q1)), ("q2", dump_mlp(p.q2)),
                    ("q1_target", dump_mlp(p.q1_target)),
                    ("q2_target", dump_mlp(p.q2_target)),
                    ("value", dump_mlp(p.value))]
        scalars = {"gamma": p.gamma, "tau": p.tau, "freq": float(p.freq),
                   "reward_scale": p.reward_scale,
                   "fixed_alpha": p.fixed_alpha,
                   "update_count": float(self.update_count),
                   "policy_update_count": float(self.policy_update_count)}
        return dump_sections(CHECKPOINT_KIND, sections, scalars)

    def load_checkpoint(self, blob: bytes) -> None:
        kind, sections, scalars = load_sections(blob)
        if kind != CHECKPOINT_KIND:
            raise ValueError(f"checkpoint kind {kind!r} is not {CHECKPOINT_KIND!r}")
        p = self.params
        p.policy = load_mlp(sections["policy"])
        p.q1 = load_mlp(sections["q1"])
        p.q2 = load_mlp(sections["q2"])
        p.q1_target = load_mlp(sections["q1_target"])
        p.q2_target = load_mlp(sections["q2_target"])
        p.value = load_mlp(sections["value"])
        self.update_count = int(scalars["update_count"])
        self.policy_update_count = int(scalars["policy_update_count"])
        self.opt = SacOpt.for_params(p, self.hyper)
        self.opt_value = AdamState(list(p.value.parameters()), lr=self.hyper.lr_q)
