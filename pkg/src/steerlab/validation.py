"""Input validation helpers for the estimator front end."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .dynamics import NotUnitaryError
from .linalg import as_matrix, is_unitary
from .states import DensityMatrix, validate_state


def check_density_matrix(rho, dims: Sequence[int] = (2, 2, 2)) -> np.ndarray:
    """Accept a :class:`DensityMatrix` or array-like; return a validated array."""
    if isinstance(rho, DensityMatrix):
        if tuple(rho.dims) != tuple(dims):
            raise ValueError(f"state has dims {rho.dims}, expected {tuple(dims)}")
        return rho.mat
    return validate_state(rho, dims).mat


def check_unitary(u, n: int) -> np.ndarray:
    a = as_matrix(u)
    if a.shape != (n, n):
        raise ValueError(f"expected a {n} x {n} unitary, got {a.shape}")
    if not is_unitary(a):
        raise NotUnitaryError("matrix is not unitary within 1e-10")
    return a


def check_qubit_states(states) -> tuple[np.ndarray, bool]:
    """Return ``(batch, single)`` where batch has shape (n, 2, 2)."""
    a = np.asarray(states, dtype=complex)
    if a.shape == (2, 2):
        return a[None], True
    if a.ndim != 3 or a.shape[1:] != (2, 2):
        raise ValueError(f"expected a 2 x 2 matrix or a stack of them, got shape {a.shape}")
    return a, False


def check_steering_batch(x) -> np.ndarray:
    """Steering vectors as an (n, 4) array with X_0 = 1.

    Rows of length 3 are taken as (X_1, X_2, X_3) and get X_0 = 1 prepended.
    """
    a = np.atleast_2d(np.asarray(x, dtype=float))
    if a.shape[1] == 3:
        a = np.column_stack([np.ones(len(a)), a])
    if a.shape[1] != 4:
        raise ValueError(f"steering vectors need 3 or 4 components, got {a.shape[1]}")
    if np.any(np.abs(a[:, 0] - 1) > 1e-12):
        raise ValueError("steering vectors must have X_0 = 1")
    if np.any(np.einsum("ij,ij->i", a[:, 1:], a[:, 1:]) > 1 + 1e-12):
        raise ValueError("steering vectors must satisfy |X| <= 1")
    return a
