"""Entropic and entanglement diagnostics. All entropies are in bits."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .linalg import (
    PSD_TOL,
    as_matrix,
    clip_spectrum,
    eigvalsh,
    partial_trace,
    partial_transpose,
    sqrtm_psd,
)

QUBITS3 = (2, 2, 2)
_YY = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])


@dataclass
class InfoReport:
    cmi: float
    mi_before: float
    mi_after: float
    nu: float

    @property
    def delta(self) -> float:
        """Signed change of I(R:S); ``nu`` is its positive part."""
        return self.mi_after - self.mi_before

    def to_dict(self) -> dict:
        return asdict(self)


def vn_entropy(rho) -> float:
    """Von Neumann entropy -sum(l log2 l); roundoff negatives down to -1e-9 are clipped."""
    w = clip_spectrum(eigvalsh(rho))
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w)))


def mutual_info(rho, dims: Sequence[int], part_a: Sequence[int], part_b: Sequence[int]) -> float:
    """I(A:B) = S(A) + S(B) - S(AB) for disjoint factor sets of ``rho``."""
    a, b = sorted(set(part_a)), sorted(set(part_b))
    if not a or not b or set(a) & set(b):
        raise ValueError(f"bad bipartition {part_a} | {part_b}")
    if max(a + b) >= len(dims) or min(a + b) < 0:
        raise ValueError(f"partition indices out of range for {len(dims)} factors")
    ab = sorted(a + b)
    rho_ab = rho if len(ab) == len(dims) else partial_trace(rho, dims, ab)
    sub = [dims[i] for i in ab]
    pos = {f: i for i, f in enumerate(ab)}
    s_a = vn_entropy(partial_trace(rho_ab, sub, [pos[i] for i in a]))
    s_b = vn_entropy(partial_trace(rho_ab, sub, [pos[i] for i in b]))
    return s_a + s_b - vn_entropy(rho_ab)


def cond_mutual_info(rho, dims: Sequence[int] = QUBITS3) -> float:
    """I(R:E|S) = S(RS) + S(SE) - S(S) - S(RSE)."""
    return (
        vn_entropy(partial_trace(rho, dims, [0, 1]))
        + vn_entropy(partial_trace(rho, dims, [1, 2]))
        - vn_entropy(partial_trace(rho, dims, [1]))
        - vn_entropy(rho)
    )


def mi_rs(rho, dims: Sequence[int] = QUBITS3) -> float:
    return mutual_info(rho, dims, [0], [1])


def dpi_violation(rho, u, dims: Sequence[int] = QUBITS3) -> InfoReport:
    """Data-processing check for ``1_R (x) U_SE``: nu = max(0, I(R:S') - I(R:S))."""
    from .dynamics import evolve_full

    before = mi_rs(rho, dims)
    after = mi_rs(evolve_full(rho, u, dims), dims)
    return InfoReport(cond_mutual_info(rho, dims), before, after, max(0.0, after - before))


def _check_two_qubit(rho) -> np.ndarray:
    m = as_matrix(rho)
    if m.shape != (4, 4):
        raise ValueError(f"expected a two-qubit (4 x 4) state, got {m.shape}")
    return m


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit state.

    Uses the Hermitian form sqrt(rho) rho~ sqrt(rho), whose eigenvalues are
    the squared Wootters lambdas.
    """
    m = _check_two_qubit(rho)
    s = sqrtm_psd(m)
    flipped = _YY @ m.conj() @ _YY
    r = s @ flipped @ s
    lam = np.sqrt(np.clip(np.linalg.eigvalsh((r + r.conj().T) / 2), 0, None))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def ppt_min_eigenvalue(rho) -> float:
    m = _check_two_qubit(rho)
    return float(eigvalsh(partial_transpose(m, (2, 2), 1))[0])


def ppt_separable(rho, tol: float = PSD_TOL) -> bool:
    """Peres-Horodecki test, exact for two qubits."""
    return ppt_min_eigenvalue(rho) >= -tol
