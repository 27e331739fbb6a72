"""Joint SE unitary evolution and its action on the Theta matrix."""

from __future__ import annotations

import numpy as np

from .basis import ThetaMatrix, row_permutation, su_basis
from .linalg import as_matrix, check_dims, embed, is_unitary

_SY = np.array([[0, -1j], [1j, 0]])
_YY = np.kron(_SY, _SY)


class NotUnitaryError(ValueError):
    pass


def u_coeffs(u, dims_se=(2, 2)) -> np.ndarray:
    """Coefficients of ``U (F_S^zeta x F_E^eta) U^dag`` in the product basis.

    Returns a real array ``c[zeta, eta, alpha, beta]`` with
    ``U F^zeta F^eta U^dag = sum c[zeta, eta, alpha, beta] F^alpha F^beta``.
    """
    u = as_matrix(u)
    n_s_dim, n_e_dim = dims_se
    if u.shape != (n_s_dim * n_e_dim,) * 2:
        raise ValueError(f"unitary shape {u.shape} does not match SE dims {dims_se}")
    if not is_unitary(u):
        raise NotUnitaryError("U is not unitary within 1e-10")
    fs = su_basis(n_s_dim).with_identity()
    fe = su_basis(n_e_dim).with_identity()
    prod = np.einsum("zab,ycd->zyacbd", fs, fe).reshape(len(fs), len(fe), u.shape[0], u.shape[0])
    conj = np.einsum("ij,zyjk,lk->zyil", u, prod, u.conj())
    c = np.einsum("zyij,abji->zyab", conj, prod) / (n_s_dim * n_e_dim)
    return c.real


def evolve_theta(theta: ThetaMatrix, u: np.ndarray) -> np.ndarray:
    """S-row block of the evolved Theta for coefficients ``u`` from :func:`u_coeffs`.

    Row j of the result is ``sum_{zeta, eta} u[zeta, eta, j, 0] Theta_{row(zeta, eta)}``;
    the (0, 0) term vanishes for unitary evolution.
    """
    n_s, n_e = theta.n_s, theta.n_e
    rows = theta.entries[row_permutation(n_s, n_e)]
    weights = u[:, :, 1:, 0].reshape((n_s + 1) * (n_e + 1), n_s)
    return weights.T @ rows


def evolve_full(rho, u, dims=(2, 2, 2)) -> np.ndarray:
    """``(1_R x U) rho (1_R x U)^dag``."""
    m = as_matrix(rho)
    dims = check_dims(dims, m.shape[0])
    full = embed(u, dims, [1, 2])
    out = full @ m @ full.conj().T
    return (out + out.conj().T) / 2


def v_omega(omega: float) -> np.ndarray:
    """``exp[i omega sy (x) sy]`` = cos(omega) 1 + i sin(omega) sy (x) sy."""
    return np.cos(omega) * np.eye(4) + 1j * np.sin(omega) * _YY


def bloch_closed_form(e, omega: float) -> np.ndarray:
    """Bloch vector of S after ``v_omega(omega)``, from a 16-component steered vector."""
    e = np.asarray(e, dtype=float)
    c, s = np.cos(2 * omega), np.sin(2 * omega)
    return np.array([e[1] * c - e[14] * s, e[2], e[3] * c + e[8] * s])
