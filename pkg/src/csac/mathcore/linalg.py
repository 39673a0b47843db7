"""Complex linear algebra for downlink beamforming."""

from __future__ import annotations

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .tensor import NumericError


def solve_hermitian(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A x = b for Hermitian positive-definite A via Cholesky.

    ``b`` may carry multiple right-hand sides as columns. Raises
    ``NumericError`` when A is not Hermitian or not positive definite.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NumericError(f"expected a square matrix, got shape {a.shape}")
    if b.shape[0] != a.shape[0]:
        raise NumericError(f"rhs length {b.shape[0]} != matrix size {a.shape[0]}")
    if not np.allclose(a, a.conj().T, rtol=1e-8, atol=1e-12):
        raise NumericError("matrix is not Hermitian")
    try:
        factor = cho_factor(a, lower=True, check_finite=False)
    except LinAlgError as exc:
        raise NumericError(f"matrix is not positive definite: {exc}") from exc
    return cho_solve(factor, b, check_finite=False)


def random_hpd(n: int, rng, diag_boost: float = 1.0) -> np.ndarray:
    """Random Hermitian positive-definite test matrix: B Bᴴ + boost·I."""
    b = rng.complex_normal((n, n))
    return b @ b.conj().T + diag_boost * np.eye(n)
