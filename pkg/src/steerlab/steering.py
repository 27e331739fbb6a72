"""Steered SE states, reduced steering sets of S and their ellipsoid geometry."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import ThetaMatrix, su_basis
from .linalg import as_matrix, check_dims, embed, eigvalsh, partial_trace

STEER_PROB_FLOOR = 1e-12
RANK_RTOL = 1e-7


class ZeroProbabilityError(ValueError):
    """The steering outcome has vanishing probability."""


def check_steering_vector(x, n_r: int = 3, tol: float = 1e-12) -> np.ndarray:
    """Validate X = (1, X_1, ..., X_nR) in the X_0 = 1 gauge.

    For a qubit reference this is ``sum X_i^2 <= 1``; in general the
    operator ``X_mu F_R^mu`` must be positive semidefinite.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape != (n_r + 1,):
        raise ValueError(f"steering vector must have length {n_r + 1}, got {x.shape}")
    if abs(x[0] - 1.0) > tol:
        raise ValueError(f"steering vector must have X_0 = 1, got {x[0]}")
    if n_r == 3:
        if np.dot(x[1:], x[1:]) > 1 + tol:
            raise ValueError(f"|X| = {np.linalg.norm(x[1:]):.6f} > 1: operator not positive")
    else:
        dim = int(round(np.sqrt(n_r + 1)))
        op = np.tensordot(x, su_basis(dim).with_identity(), axes=1)
        if eigvalsh(op)[0] < -1e-9:
            raise ValueError("steering operator is not positive semidefinite")
    return x


def steering_operator(x, dim_r: int = 2) -> np.ndarray:
    """``E = X_mu F_R^mu`` as a matrix on R."""
    return np.tensordot(np.asarray(x, dtype=float), su_basis(dim_r).with_identity(), axes=1)


def steer_se(rho, x, dims=(2, 2, 2)) -> np.ndarray:
    """SE state steered by X: ``Tr_R[(E (x) 1 (x) 1) rho] / Tr[(E (x) 1 (x) 1) rho]``."""
    m = as_matrix(rho)
    dims = check_dims(dims, m.shape[0])
    x = check_steering_vector(x, dims[0] ** 2 - 1)
    op = embed(steering_operator(x, dims[0]), dims, [0])
    weighted = op @ m
    p = np.trace(weighted).real
    if p <= STEER_PROB_FLOOR:
        raise ZeroProbabilityError(f"steering probability {p:.3e} is zero")
    out = partial_trace(weighted, dims, [1, 2]) / p
    return (out + out.conj().T) / 2


def steering_probability(rho, x, dims=(2, 2, 2)) -> float:
    m = as_matrix(rho)
    op = embed(steering_operator(x, dims[0]), dims, [0])
    return float(np.trace(op @ m).real)


def reduced_steer_s(theta: ThetaMatrix, x) -> np.ndarray:
    """Generalized Bloch vector of the S state steered by X.

    Equals ``Theta_{j,mu} X_mu`` in the SLOCC gauge (a = 0); otherwise it is
    divided by the steering weight ``1 + a . X``.
    """
    x = check_steering_vector(x, theta.n_r)
    weight = 1.0 + float(theta.a @ x[1:])
    if weight <= STEER_PROB_FLOOR:
        raise ZeroProbabilityError(f"steering weight {weight:.3e} is zero")
    return theta.s_block @ x / weight


def bloch_vector(rho_s) -> np.ndarray:
    """Coefficients tr(rho F^j) of a single-system state."""
    m = as_matrix(rho_s)
    gens = su_basis(m.shape[0]).generators
    return np.einsum("ab,jba->j", m, gens).real


def state_from_bloch(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    dim = int(round(np.sqrt(r.size + 1)))
    return (np.eye(dim) + np.tensordot(r, su_basis(dim).generators, axes=1)) / dim


@dataclass(frozen=True)
class EllipsoidGeometry:
    """Affine image ``center + Q x`` of the unit ball.

    ``axes[i]`` is the unit direction of the i-th semiaxis; semiaxes are
    sorted in descending order.
    """

    center: np.ndarray
    semiaxes: np.ndarray
    axes: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return self.axes.T @ np.diag(self.semiaxes)

    def contains(self, points, tol: float = 1e-9) -> np.ndarray:
        """Membership of Bloch points, measured on the ellipsoid's own span."""
        p = np.atleast_2d(np.asarray(points, dtype=float)) - self.center
        coords = p @ self.axes.T
        live = self.semiaxes > tol
        off_span = np.abs(coords[:, ~live]).max(axis=1) if (~live).any() else np.zeros(len(p))
        q = (coords[:, live] / self.semiaxes[live]) ** 2
        return (q.sum(axis=1) <= 1 + tol) & (off_span <= tol)

    def to_dict(self) -> dict:
        return {
            "center": [float(v) for v in self.center],
            "semiaxes": [float(v) for v in self.semiaxes],
            "axes": [[float(v) for v in row] for row in self.axes],
        }


def ellipsoid_from_block(block) -> EllipsoidGeometry:
    """Ellipsoid of a 3 x 4 block ``[c | Q]`` (qubit R and S)."""
    block = np.asarray(block, dtype=float)
    if block.shape != (3, 4):
        raise ValueError(f"expected a 3 x 4 Theta block, got {block.shape}")
    u, s, _ = np.linalg.svd(block[:, 1:])
    return EllipsoidGeometry(block[:, 0].copy(), s, u.T.copy())


def steering_ellipsoid(theta: ThetaMatrix, gauge_tol: float = 1e-9) -> EllipsoidGeometry:
    """Reduced steering set of S as an ellipsoid (qubit R and S, SLOCC gauge)."""
    if theta.dims[:2] != (2, 2):
        raise ValueError("steering ellipsoids need qubit R and S")
    if np.max(np.abs(theta.a)) > gauge_tol:
        raise ValueError("Theta is not in the SLOCC gauge (a != 0); canonicalize the state first")
    return ellipsoid_from_block(theta.s_block)


def sample_x(rng: np.random.Generator, mode: str = "interior", n_r: int = 3) -> np.ndarray:
    """Random qubit steering vector: uniform in the unit ball or on the sphere."""
    if mode not in ("interior", "boundary"):
        raise ValueError(f"mode must be 'interior' or 'boundary', got {mode!r}")
    v = rng.standard_normal(n_r)
    v /= np.linalg.norm(v)
    if mode == "interior":
        v *= rng.random() ** (1.0 / n_r)
    return np.concatenate([[1.0], v])


def domain_rank(theta_or_block, rtol: float = RANK_RTOL) -> int:
    """Dimension of the reduced steering set.

    The set is the projective image ``(c + Q x) / (1 + a . x)`` of the unit
    ball, so its dimension is ``rank [[1, a], [c, Q]] - 1``. A bare block is
    taken to be in the SLOCC gauge (a = 0).
    """
    if isinstance(theta_or_block, ThetaMatrix):
        block, a = theta_or_block.s_block, theta_or_block.a
    else:
        block = np.asarray(theta_or_block, dtype=float)
        a = np.zeros(block.shape[1] - 1)
    m = np.vstack([np.concatenate([[1.0], a]), block])
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > rtol * s[0])) - 1
