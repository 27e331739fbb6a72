"""Construction and validation of tripartite R-S-E states."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .basis import ThetaMatrix, corr_index, state_from_theta
from .linalg import (
    HERM_TOL,
    PSD_TOL,
    as_matrix,
    check_dims,
    embed,
    eigvalsh,
    hermiticity_error,
    inv_sqrt,
    partial_trace,
)

QUBITS3 = (2, 2, 2)
TRACE_TOL = 1e-10
SLOCC_RANK_FLOOR = 1e-8


class InvalidStateError(ValueError):
    """Raised when a matrix fails one or more density-matrix invariants.

    ``violations`` is a list of ``(invariant, magnitude)`` pairs.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        msg = "; ".join(f"{name} (magnitude {mag:.3e})" for name, mag in self.violations)
        super().__init__(f"invalid density matrix: {msg}")


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class DensityMatrix:
    """A validated density matrix tagged with its tensor-factor dimensions."""

    mat: np.ndarray = field(repr=False)
    dims: tuple[int, ...]

    def __array__(self, dtype=None, copy=None):
        return self.mat if dtype is None else self.mat.astype(dtype)

    def marginal(self, keep: Sequence[int]) -> np.ndarray:
        return partial_trace(self.mat, self.dims, keep)

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "entries": [[float(z.real), float(z.imag)] for z in self.mat.ravel()],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DensityMatrix":
        dims = tuple(int(x) for x in d["dims"])
        n = int(np.prod(dims))
        pairs = np.asarray(d["entries"], dtype=float).reshape(n * n, 2)
        return validate_state((pairs[:, 0] + 1j * pairs[:, 1]).reshape(n, n), dims)


def state_violations(m, dims: Sequence[int]) -> list[tuple[str, float]]:
    """List the density-matrix invariants ``m`` violates, with magnitudes."""
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        return [("square", float(abs(a.shape[0] - a.shape[1])))]
    check_dims(dims, a.shape[0])
    out = []
    herm = hermiticity_error(a)
    if herm > HERM_TOL:
        out.append(("hermitian", herm))
        return out
    tr_err = abs(np.trace(a) - 1)
    if tr_err > TRACE_TOL:
        out.append(("unit trace", float(tr_err)))
    lam = eigvalsh(a)[0]
    if lam < -PSD_TOL:
        out.append(("positive semidefinite", float(-lam)))
    return out


def validate_state(m, dims: Sequence[int]) -> DensityMatrix:
    """Return a :class:`DensityMatrix` or raise :class:`InvalidStateError`."""
    a = as_matrix(m)
    bad = state_violations(a, dims)
    if bad:
        raise InvalidStateError(bad)
    a = (a + a.conj().T) / 2
    a.setflags(write=False)
    return DensityMatrix(a, tuple(int(d) for d in dims))


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random n x n unitary: QR of a Ginibre matrix with phase-fixed R."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_density_matrix(n: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density matrix from the induced (Ginibre) measure."""
    k = n if rank is None else rank
    g = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    """Independent PCG64 stream for one trial, derived by hashing (seed, index)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([master_seed, trial_index])))


def slocc_canonicalize(rho, dims: Sequence[int] = QUBITS3) -> np.ndarray:
    """Apply ``(N_R rho_R)^(-1/2) (x) 1_SE`` so that the R marginal is maximally mixed.

    Raises ``ValueError`` when rho_R is singular (min eigenvalue <= 1e-8).
    """
    m = as_matrix(rho)
    dims = check_dims(dims, m.shape[0])
    n_r = dims[0]
    rho_r = partial_trace(m, dims, [0])
    op = embed(inv_sqrt(n_r * rho_r, floor=SLOCC_RANK_FLOOR), dims, [0])
    out = op @ m @ op.conj().T
    out = out / np.trace(out).real
    return (out + out.conj().T) / 2


@dataclass
class GenerationConfig:
    seed: int = 0
    min_concurrence: float = 0.05
    max_se_concurrence: float = 1e-6
    max_attempts: int = 10000

    def __post_init__(self):
        for name in ("min_concurrence", "max_se_concurrence"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")


@dataclass
class GenerationDiagnostics:
    c_rs: float
    c_re: float
    c_se: float
    attempts: int
    noise_weight: float


def _raw_pairwise_state(rng: np.random.Generator) -> np.ndarray:
    psi = np.zeros(8, dtype=complex)
    psi[rng.integers(8)] = 1.0
    u_rs = embed(haar_unitary(4, rng), QUBITS3, [0, 1])
    u_re = embed(haar_unitary(4, rng), QUBITS3, [0, 2])
    psi = u_re @ (u_rs @ psi)
    return np.outer(psi, psi.conj())


def _pair_concurrences(rho) -> tuple[float, float, float]:
    from .info import concurrence

    return tuple(concurrence(partial_trace(rho, QUBITS3, keep)) for keep in ([0, 1], [0, 2], [1, 2]))


def break_se_entanglement(rho, max_se_concurrence: float = 1e-6, tol: float = 1e-10):
    """Mix ``rho`` with white noise just enough to make the canonical SE pair separable.

    Returns ``(canonical_state, weight)`` where the state is
    ``canon((1-w) rho + w 1/8)`` and ``w`` is the smallest weight (to ``tol``)
    whose canonical SE marginal passes the PPT test with concurrence at most
    ``max_se_concurrence``.
    """
    from .info import concurrence, ppt_separable

    eye = np.eye(8) / 8

    def attempt(w):
        try:
            out = slocc_canonicalize((1 - w) * rho + w * eye)
        except ValueError:
            return None
        se = partial_trace(out, QUBITS3, [1, 2])
        if ppt_separable(se) and concurrence(se) <= max_se_concurrence:
            return out
        return None

    best = attempt(0.0)
    if best is not None:
        return best, 0.0
    lo, hi = 0.0, 1.0
    best = slocc_canonicalize(eye)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        cand = attempt(mid)
        if cand is None:
            lo = mid
        else:
            hi, best = mid, cand
    return best, hi


def gen_pairwise_entangled(
    cfg: GenerationConfig, rng: np.random.Generator | None = None
) -> tuple[DensityMatrix, GenerationDiagnostics]:
    """Random three-qubit state with RS and RE entanglement but separable SE.

    Each attempt rotates a random computational basis state with Haar
    unitaries on RS and then RE, removes SE entanglement by the minimal
    white-noise admixture (:func:`break_se_entanglement`), brings the state to
    the SLOCC canonical form rho_R = 1/2 and keeps it only if both RS and RE
    concurrences reach ``cfg.min_concurrence``.
    """
    if rng is None:
        rng = np.random.Generator(np.random.PCG64(cfg.seed))
    for attempt in range(1, cfg.max_attempts + 1):
        raw = _raw_pairwise_state(rng)
        rho, w = break_se_entanglement(raw, cfg.max_se_concurrence)
        c_rs, c_re, c_se = _pair_concurrences(rho)
        if c_rs >= cfg.min_concurrence and c_re >= cfg.min_concurrence and c_se <= cfg.max_se_concurrence:
            diag = GenerationDiagnostics(c_rs, c_re, c_se, attempt, w)
            return validate_state(rho, QUBITS3), diag
    raise GenerationError(
        f"no state met the concurrence thresholds in {cfg.max_attempts} attempts"
    )


def pqt_theta(p: float, q: float, t: float) -> ThetaMatrix:
    """Theta of the three-parameter family rho(P, Q, T).

    e_1 = e_3 = P, e_5 = Q, e_8 = e_14 = PQ and T_{r,i} = T for rows
    r in {2, 5, 8, 14}; every other coefficient is zero. The SE marginal is
    the product (1 + P(sx + sz))/2 (x) (1 + Q sy)/2.
    """
    theta = np.zeros((16, 4))
    theta[0, 0] = 1.0
    theta[1, 0] = theta[3, 0] = p
    theta[5, 0] = q
    theta[corr_index(1, 2, 3, 3), 0] = theta[corr_index(3, 2, 3, 3), 0] = p * q
    for row in (2, 5, corr_index(1, 2, 3, 3), corr_index(3, 2, 3, 3)):
        theta[row, 1:] = t
    return ThetaMatrix(theta, np.zeros(3))


def pqt_state(p: float, q: float, t: float) -> DensityMatrix:
    """The rho(P, Q, T) state; raises :class:`InvalidStateError` if not PSD."""
    return validate_state(state_from_theta(pqt_theta(p, q, t)), QUBITS3)


def pure_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


BELL_PHI_PLUS = pure_state([1, 0, 0, 1])
