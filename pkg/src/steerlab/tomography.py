"""Reconstruction of the induced dynamical map on a qubit S.

The map is stored in two forms. ``A`` acts on row-major vectorized 2 x 2
matrices, ``vec(rho)[2*i + j] = rho[i, j]``, so that
``rho~_{ij} = A_{ij;i'j'} rho_{i'j'}``. ``B`` is the reshuffled (dynamical,
Choi-type) form ``B_{ii';jj'} = A_{ij;i'j'}``, Hermitian for any
Hermiticity-preserving map and with trace 2 for a trace-preserving one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .basis import ThetaMatrix
from .linalg import hermiticity_error
from .steering import check_steering_vector, state_from_bloch

CP_TOL = 1e-7
PROBE_RANK_TOL = 1e-8
B_NEG_CAP = 50.0
B_HERM_FAIL = 1e-6

# (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, 0, 1) in the X_0 = 1 gauge
STANDARD_PROBES = np.array(
    [[1.0, 1.0, 0.0, 0.0], [1.0, -1.0, 0.0, 0.0], [1.0, 0.0, 1.0, 0.0], [1.0, 0.0, 0.0, 1.0]]
)


class MapStatus(str, enum.Enum):
    OK = "OK"
    DEGENERATE_DOMAIN = "DEGENERATE_DOMAIN"
    NUMERICALLY_SUSPECT = "NUMERICALLY_SUSPECT"
    RECONSTRUCTION_FAILURE = "RECONSTRUCTION_FAILURE"
    GENERATION_FAILURE = "GENERATION_FAILURE"


class TomographyError(RuntimeError):
    status = MapStatus.RECONSTRUCTION_FAILURE


class DegenerateDomainError(TomographyError):
    status = MapStatus.DEGENERATE_DOMAIN


class ReconstructionError(TomographyError):
    status = MapStatus.RECONSTRUCTION_FAILURE


def reshuffle(a: np.ndarray) -> np.ndarray:
    """``B_{ii';jj'} = A_{ij;i'j'}``. The map is an involution."""
    return np.asarray(a).reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)


def vec(m) -> np.ndarray:
    return np.asarray(m, dtype=complex).reshape(-1)


def unvec(v) -> np.ndarray:
    return np.asarray(v).reshape(2, 2)


@dataclass
class ProbeSet:
    """Steering vectors with the S Bloch vectors they prepare and produce."""

    xs: np.ndarray
    inputs: np.ndarray
    outputs: np.ndarray

    @classmethod
    def from_theta(cls, theta: ThetaMatrix, theta_tilde: np.ndarray, xs=STANDARD_PROBES) -> "ProbeSet":
        xs = np.array([check_steering_vector(x, theta.n_r) for x in np.atleast_2d(xs)])
        weight = 1.0 + xs[:, 1:] @ theta.a
        inputs = (xs @ theta.s_block.T) / weight[:, None]
        outputs = (xs @ np.asarray(theta_tilde).T) / weight[:, None]
        return cls(xs, inputs, outputs)


def verify_linear_independence(probes: ProbeSet, tol: float = PROBE_RANK_TOL) -> int:
    """Rank of the matrix with rows ``(1, r_in)``, i.e. of the input states."""
    m = np.column_stack([np.ones(len(probes.inputs)), probes.inputs])
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol))


@dataclass
class DynamicalMap:
    A: np.ndarray
    B: np.ndarray = field(init=False)
    eigenvalues: np.ndarray = field(init=False)
    status: MapStatus = MapStatus.OK

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=complex)
        b = reshuffle(self.A)
        self.B = b
        self.eigenvalues = np.linalg.eigvalsh((b + b.conj().T) / 2)

    @property
    def b_neg(self) -> float:
        return b_negativity(self)

    def is_cp(self, tol: float = CP_TOL) -> bool:
        return is_cp(self, tol)

    def to_dict(self) -> dict:
        def cmat(m):
            return [[[float(z.real), float(z.imag)] for z in row] for row in m]

        return {
            "A": cmat(self.A),
            "B": cmat(self.B),
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "b_neg": float(self.b_neg),
            "cp": bool(self.is_cp()),
            "status": self.status.value,
        }


def map_from_affine(m: np.ndarray, t: np.ndarray) -> np.ndarray:
    """A-matrix of the trace-preserving qubit map ``r -> m r + t`` on Bloch vectors."""
    sig = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)
    a = np.zeros((4, 4), dtype=complex)
    for col in range(4):
        unit = np.zeros(4, dtype=complex)
        unit[col] = 1
        e = unvec(unit)
        tr = np.trace(e)
        r = np.einsum("ab,jba->j", e, sig)
        out = 0.5 * (tr * (np.eye(2) + np.tensordot(t, sig, axes=1)) + np.tensordot(m @ r, sig, axes=1))
        a[:, col] = vec(out)
    return a


def _finish(a: np.ndarray) -> DynamicalMap:
    if not np.all(np.isfinite(a)):
        raise ReconstructionError("reconstructed A has non-finite entries")
    herm = hermiticity_error(reshuffle(a))
    if herm > B_HERM_FAIL:
        raise ReconstructionError(f"B is not Hermitian (deviation {herm:.3e})")
    dmap = DynamicalMap(a)
    if abs(dmap.b_neg) > B_NEG_CAP:
        dmap.status = MapStatus.NUMERICALLY_SUSPECT
    return dmap


def reconstruct_map(probes: ProbeSet, extend: bool = False) -> DynamicalMap:
    """Solve for A from input/output state pairs.

    With four linearly independent inputs A is the unique solution of
    ``A vec(rho_k) = vec(rho~_k)``. A rank-deficient probe set raises
    :class:`DegenerateDomainError` unless ``extend`` is set, in which case the
    minimum-norm affine Bloch map consistent with the data is used: directions
    orthogonal to the steering domain are sent to the image of its centroid.
    """
    rank = verify_linear_independence(probes)
    if rank == 4 and len(probes.inputs) == 4:
        rin = np.array([vec(state_from_bloch(r)) for r in probes.inputs]).T
        rout = np.array([vec(state_from_bloch(r)) for r in probes.outputs]).T
        try:
            a = np.linalg.solve(rin.T, rout.T).T
        except np.linalg.LinAlgError as exc:
            raise ReconstructionError(str(exc)) from exc
        return _finish(a)
    if rank < 4 and not extend:
        raise DegenerateDomainError(f"probe states span rank {rank} < 4")
    if rank <= 1 and extend:
        raise DegenerateDomainError("steering domain is a single point; no map can be inferred")
    c_in, c_out = probes.inputs.mean(axis=0), probes.outputs.mean(axis=0)
    d_in, d_out = probes.inputs - c_in, probes.outputs - c_out
    m = d_out.T @ np.linalg.pinv(d_in.T, rcond=1e-10)
    return _finish(map_from_affine(m, c_out - m @ c_in))


def map_from_theta(theta: ThetaMatrix, theta_tilde, xs=STANDARD_PROBES, extend: bool = False) -> DynamicalMap:
    return reconstruct_map(ProbeSet.from_theta(theta, theta_tilde, xs), extend=extend)


def b_negativity(dmap: DynamicalMap) -> float:
    """``sum |lambda_j| - 2`` over the eigenvalues of B."""
    return float(np.sum(np.abs(dmap.eigenvalues)) - 2.0)


def negativity_from_eigenvalues(eigenvalues) -> float:
    return float(np.sum(np.abs(np.asarray(eigenvalues, dtype=float))) - 2.0)


def is_cp(dmap: DynamicalMap, tol: float = CP_TOL) -> bool:
    return bool(dmap.eigenvalues[0] >= -tol)


def apply_map(dmap: DynamicalMap, rho_s) -> np.ndarray:
    """Linear action of the map; the steering domain is not enforced."""
    return unvec(dmap.A @ vec(rho_s))
