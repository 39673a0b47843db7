"""Stochastic actor-critic with twin clipped critics, delayed policy/target
updates, and automatic temperature tuning.

Five networks total: one tanh-Gaussian policy, two critics, two Polyak
targets. Critic updates run every learner step; the policy, the temperature,
and the targets move only every ``freq``-th step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..mathcore import (AdamState, Mlp, NumericError, SeededRng, Tensor,
                        adam_step, backward, concat, dump_mlp, dump_sections,
                        gaussian_reparam, load_mlp, load_sections, minimum,
                        mlp_forward, no_grad, tanh_squash_logprob, zero_grads)
from .hyper import Hyper
from .replay import Batch

CHECKPOINT_KIND = "csac"


class SacParams:
    """Policy + twin critics + twin targets + log-temperature."""

    def __init__(self, state_dim: int, action_dim: int, hyper: Hyper,
                 init_rng: SeededRng):
        self.state_dim = state_dim
        self.action_dim = action_dim
        self.gamma = hyper.gamma
        self.tau = hyper.tau
        self.freq = hyper.freq
        self.reward_scale = hyper.reward_scale
        self.target_entropy = -float(action_dim)

        policy_widths = (state_dim, *hyper.hidden, 2 * action_dim)
        q_widths = (state_dim + action_dim, *hyper.hidden, 1)
        act = hyper.activation
        self.policy = Mlp(policy_widths, act, rng=init_rng)
        self.q1 = Mlp(q_widths, act, rng=init_rng)
        self.q2 = Mlp(q_widths, act, rng=init_rng)
        self.q1_target = self.q1.clone()
        self.q2_target = self.q2.clone()
        self.log_alpha = Tensor.param(np.zeros(()))

    @property
    def alpha(self) -> float:
        return float(np.exp(self.log_alpha.data))

    def networks(self) -> list[Mlp]:
        return [self.policy, self.q1, self.q2, self.q1_target, self.q2_target]

    def live_networks(self) -> list[Mlp]:
        return [self.policy, self.q1, self.q2]

    def all_finite(self) -> bool:
        return (all(net.check_finite() for net in self.networks())
                and np.isfinite(self.log_alpha.data).all())


@dataclass
class SacOpt:
    q1: AdamState
    q2: AdamState
    policy: AdamState
    alpha: AdamState

    @classmethod
    def for_params(cls, params: SacParams, hyper: Hyper) -> "SacOpt":
        return cls(
            q1=AdamState(list(params.q1.parameters()), lr=hyper.lr_q),
            q2=AdamState(list(params.q2.parameters()), lr=hyper.lr_q),
            policy=AdamState(list(params.policy.parameters()), lr=hyper.lr_pi),
            alpha=AdamState([params.log_alpha], lr=hyper.lr_alpha),
        )


def policy_heads(params: SacParams, s: Tensor) -> tuple[Tensor, Tensor]:
    """Split the policy output into mean and log-std halves."""
    out = mlp_forward(params.policy, s)
    d = params.action_dim
    return out[:, :d], out[:, d:]


def sample_action(params: SacParams, s: Tensor, rng: SeededRng,
                  noise: np.ndarray | None = None) -> tuple[Tensor, Tensor]:
    """Reparameterized tanh-Gaussian sample with its log-probability."""
    mean, log_std = policy_heads(params, s)
    pre, _ = gaussian_reparam(mean, log_std, rng, noise=noise)
    action, logp = tanh_squash_logprob(pre, mean, log_std)
    return action, logp.reshape(-1, 1)


def act(params: SacParams, s: np.ndarray, mode: str, rng: SeededRng) -> np.ndarray:
    """One action for one state: a sampled one when exploring, tanh(mean)
    when evaluating."""
    if mode not in ("explore", "eval"):
        raise ValueError(f"unknown act mode {mode!r}")
    s = np.asarray(s, dtype=np.float64).reshape(1, -1)
    if not np.isfinite(s).all():
        raise NumericError("non-finite state passed to act()")
    with no_grad():
        if mode == "eval":
            mean, _ = policy_heads(params, Tensor(s))
            return np.tanh(mean.data[0])
        action, _ = sample_action(params, Tensor(s), rng)
        return action.data[0].copy()


def q_forward(net: Mlp, s: Tensor, a: Tensor) -> Tensor:
    return mlp_forward(net, concat([s, a], axis=1))


def td_target(params: SacParams, batch: Batch, rng: SeededRng) -> np.ndarray:
    """Bootstrap target y = r~ + gamma (1-done) (min_i Q'_i(s',a') - alpha
    log pi(a'|s')), a' freshly sampled; no gradient flows through y."""
    with no_grad():
        s2 = Tensor(batch.s2)
        a2, logp2 = sample_action(params, s2, rng)
        q1t = q_forward(params.q1_target, s2, a2).data
        q2t = q_forward(params.q2_target, s2, a2).data
        soft = np.minimum(q1t, q2t) - params.alpha * logp2.data
        return (params.reward_scale * batch.r
                + params.gamma * (1.0 - batch.done) * soft)


def _check_loss(value: float, what: str) -> None:
    if not np.isfinite(value):
        raise NumericError(f"{what} diverged to a non-finite value ({value})")


def update_q(params: SacParams, batch: Batch, opt: SacOpt,
             rng: SeededRng) -> tuple[float, float]:
    """One Adam step per critic on the squared TD error."""
    y = Tensor(td_target(params, batch, rng))
    losses = []
    for net, state in ((params.q1, opt.q1), (params.q2, opt.q2)):
        zero_grads(net.parameters())
        diff = q_forward(net, Tensor(batch.s), Tensor(batch.a)) - y
        loss = (diff * diff).mean()
        _check_loss(float(loss.data), "critic loss")
        backward(loss)
        adam_step(state)
        losses.append(float(loss.data))
    return losses[0], losses[1]


def update_policy(params: SacParams, batch: Batch, opt: SacOpt,
                  rng: SeededRng) -> tuple[float, np.ndarray]:
    """Minimize E[alpha log pi(a|s) - min_i Q_i(s, a)] over policy weights.

    Actions are reparameterized so the critic's action gradient reaches the
    policy; critic parameters receive gradients but are not stepped.
    Returns the loss and the detached per-sample log-probabilities.
    """
    zero_grads(params.policy.parameters())
    zero_grads(params.q1.parameters())
    zero_grads(params.q2.parameters())
    s = Tensor(batch.s)
    a, logp = sample_action(params, s, rng)
    minq = minimum(q_forward(params.q1, s, a), q_forward(params.q2, s, a))
    loss = (logp * params.alpha - minq).mean()
    _check_loss(float(loss.data), "policy loss")
    backward(loss)
    adam_step(opt.policy)
    return float(loss.data), logp.data.copy()


def update_alpha(params: SacParams, batch: Batch, opt: SacOpt, rng: SeededRng,
                 logp: np.ndarray | None = None) -> float:
    """Minimize J(alpha) = E[-alpha (log pi(a|s) + target_entropy)]."""
    if logp is None:
        with no_grad():
            _, logp_t = sample_action(params, Tensor(batch.s), rng)
        logp = logp_t.data
    coeff = float(np.mean(logp) + params.target_entropy)
    params.log_alpha.zero_grad()
    loss = params.log_alpha.exp() * (-coeff)
    backward(loss)
    adam_step(opt.alpha)
    return float(loss.data)


def polyak_update(params: SacParams, tau: float | None = None) -> None:
    tau = params.tau if tau is None else tau
    for live, target in ((params.q1, params.q1_target),
                         (params.q2, params.q2_target)):
        for lp, tp in zip(live.parameters(), target.parameters()):
            tp.data *= 1.0 - tau
            tp.data += tau * lp.data


class SacAgent:
    """Bundles parameters, optimizers, and the delayed-update cadence."""

    name = "csac"

    def __init__(self, state_dim: int, action_dim: int, hyper: Hyper,
                 init_rng: SeededRng, update_rng: SeededRng):
        hyper.validate()
        self.hyper = hyper
        self.params = SacParams(state_dim, action_dim, hyper, init_rng)
        self.opt = SacOpt.for_params(self.params, hyper)
        self.rng = update_rng
        self.update_count = 0
        self.policy_update_count = 0

    def act(self, s: np.ndarray, explore: bool, rng: SeededRng | None = None) -> np.ndarray:
        return act(self.params, s, "explore" if explore else "eval",
                   rng or self.rng)

    def update(self, batch: Batch) -> dict:
        self.update_count += 1
        jq1, jq2 = update_q(self.params, batch, self.opt, self.rng)
        out = {"q_loss": 0.5 * (jq1 + jq2), "alpha": self.params.alpha}
        if self.update_count % self.params.freq == 0:
            jpi, logp = update_policy(self.params, batch, self.opt, self.rng)
            ja = update_alpha(self.params, batch, self.opt, self.rng, logp)
            polyak_update(self.params)
            self.policy_update_count += 1
            out.update(pi_loss=jpi, alpha_loss=ja,
                       entropy=float(-np.mean(logp)))
        if not self.params.all_finite():
            raise NumericError("non-finite parameters after update "
                               f"{self.update_count}")
        return out

    def network_census(self) -> int:
        return len(self.params.networks())

    # -- checkpointing -----------------------------------------------------

    def checkpoint(self) -> bytes:
        p = self.params
        sections = [("policy", dump_mlp(p.policy)),
                    ("q1", dump_mlp(p.q1)), ("q2", dump_mlp(p.q2)),
                    ("q1_target", dump_mlp(p.q1_target)),
                    ("q2_target", dump_mlp(p.q2_target))]
        scalars = {"log_alpha": float(p.log_alpha.data),
                   "gamma": p.gamma, "tau": p.tau, "freq": float(p.freq),
                   "reward_scale": p.reward_scale,
                   "target_entropy": p.target_entropy,
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
        p.log_alpha.data[...] = scalars["log_alpha"]
        self.update_count = int(scalars["update_count"])
        self.policy_update_count = int(scalars["policy_update_count"])
        self.opt = SacOpt.for_params(p, self.hyper)
