"""scikit-learn style front end.

``fit`` takes a three-qubit R-S-E state; fitted attributes end in an
underscore and ``get_params``/``set_params``/``clone`` work as usual::

    tomo = ProcessTomography(omega=2.0).fit(rho)
    tomo.eigenvalues_, tomo.cp_
    tomo.transform(rho_s)          # apply the reconstructed map
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .basis import theta_from_state
from .dynamics import evolve_theta, u_coeffs, v_omega
from .states import slocc_canonicalize
from .steering import RANK_RTOL, domain_rank, steering_ellipsoid
from .tomography import CP_TOL, STANDARD_PROBES, ProbeSet, apply_map, reconstruct_map
from .validation import check_density_matrix, check_qubit_states, check_steering_batch, check_unitary


class SteeringEllipsoid(TransformerMixin, BaseEstimator):
    """Reduced steering ellipsoid of S for a three-qubit state.

    Parameters
    ----------
    canonicalize : bool
        Bring the state to the SLOCC gauge rho_R = 1/2 before fitting. The
        ellipsoid is only defined in that gauge.
    rank_rtol : float
        Relative singular-value cutoff for ``rank_``.

    Attributes
    ----------
    theta_ : ThetaMatrix
    center_, semiaxes_, axes_ : ndarray
    rank_ : int
        Dimension of the steering domain (0 to 3).
    """

    def __init__(self, canonicalize: bool = True, rank_rtol: float = RANK_RTOL):
        self.canonicalize = canonicalize
        self.rank_rtol = rank_rtol

    def fit(self, X, y=None):
        rho = check_density_matrix(X)
        if self.canonicalize:
            rho = slocc_canonicalize(rho)
        self.theta_ = theta_from_state(rho)
        geom = steering_ellipsoid(self.theta_)
        self.geometry_ = geom
        self.center_, self.semiaxes_, self.axes_ = geom.center, geom.semiaxes, geom.axes
        self.rank_ = domain_rank(self.theta_, self.rank_rtol)
        return self

    def transform(self, X):
        """Bloch vectors of S steered by each row of ``X`` (3- or 4-component)."""
        check_is_fitted(self, "theta_")
        x = check_steering_batch(X)
        return x @ self.theta_.s_block.T

    def contains(self, points, tol: float = 1e-9):
        check_is_fitted(self, "geometry_")
        return self.geometry_.contains(points, tol)


class ProcessTomography(TransformerMixin, BaseEstimator):
    """Reconstruct the map induced on S by ``1_R (x) U_SE`` from steered probes.

    Parameters
    ----------
    unitary : array of shape (4, 4), optional
        SE unitary. Takes precedence over ``omega``.
    omega : float, optional
        Use ``v_omega(omega)`` when no unitary is given.
    probes : array of shape (k, 4), optional
        Steering vectors; defaults to the four standard probes.
    extend_degenerate : bool
        Use the minimum-norm affine extension on rank-deficient domains
        instead of raising ``DegenerateDomainError``.
    cp_tol : float
        Tolerance on the smallest B eigenvalue for ``cp_``.
    """

    def __init__(self, unitary=None, omega=None, probes=None, extend_degenerate: bool = False,
                 cp_tol: float = CP_TOL):
        self.unitary = unitary
        self.omega = omega
        self.probes = probes
        self.extend_degenerate = extend_degenerate
        self.cp_tol = cp_tol

    def _resolve_unitary(self):
        if self.unitary is not None:
            return check_unitary(self.unitary, 4)
        if self.omega is not None:
            return v_omega(float(self.omega))
        raise ValueError("ProcessTomography needs either `unitary` or `omega`")

    def fit(self, X, y=None):
        rho = check_density_matrix(X)
        u = self._resolve_unitary()
        self.theta_ = theta_from_state(rho)
        self.theta_tilde_ = evolve_theta(self.theta_, u_coeffs(u))
        xs = STANDARD_PROBES if self.probes is None else check_steering_batch(self.probes)
        self.probe_set_ = ProbeSet.from_theta(self.theta_, self.theta_tilde_, xs)
        self.map_ = reconstruct_map(self.probe_set_, extend=self.extend_degenerate)
        self.A_, self.B_, self.eigenvalues_ = self.map_.A, self.map_.B, self.map_.eigenvalues
        self.b_neg_ = self.map_.b_neg
        self.cp_ = self.map_.is_cp(self.cp_tol)
        self.status_ = self.map_.status
        return self

    def transform(self, X):
        """Apply the fitted map to one 2 x 2 matrix or a stack of them."""
        check_is_fitted(self, "map_")
        batch, single = check_qubit_states(X)
        out = np.array([apply_map(self.map_, m) for m in batch])
        return out[0] if single else out

    def predict(self, X):
        """Final Bloch vectors for steering vectors ``X``, straight from the evolved Theta."""
        check_is_fitted(self, "theta_tilde_")
        x = check_steering_batch(X)
        weight = 1.0 + x[:, 1:] @ self.theta_.a
        return (x @ self.theta_tilde_.T) / weight[:, None]
