"""Numerical substrate: autodiff tensors, networks, optimizer, RNG, linalg."""

from .adam import AdamState, adam_step
from .linalg import random_hpd, solve_hermitian
from .nets import ACTIVATIONS, Mlp, mlp_forward
from .policy_head import (LOG_STD_MAX, LOG_STD_MIN, SQUASH_EPS, clamp_log_std,
                          gaussian_reparam, tanh_squash_logprob)
from .rng import SeededRng
from .serialize import (CheckpointError, dump_adam, dump_mlp, dump_sections,
                        load_adam_into, load_mlp, load_sections, read_file,
                        write_file)
from .tensor import (GraphStateError, NumericError, ShapeError, Tensor,
                     backward, concat, gelu, grad_enabled, minimum, no_grad,
                     zero_grads)

__all__ = [
    "ACTIVATIONS", "AdamState", "CheckpointError", "GraphStateError",
    "LOG_STD_MAX", "LOG_STD_MIN", "Mlp", "NumericError", "SQUASH_EPS",
    "SeededRng", "ShapeError", "Tensor", "adam_step", "backward",
    "clamp_log_std", "concat", "dump_adam", "dump_mlp", "dump_sections",
    "gaussian_reparam", "gelu", "grad_enabled", "load_adam_into", "load_mlp",
    "load_sections", "minimum", "mlp_forward", "no_grad", "random_hpd",
    "read_file", "solve_hermitian", "tanh_squash_logprob", "write_file",
    "zero_grads",
]
