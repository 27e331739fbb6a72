"""Dense complex matrix primitives.

All matrices handled here are small (at most 64 x 64), so everything is
plain dense numpy. Subsystem layouts are described by a dimension list
``dims`` whose product equals the matrix dimension.
"""

from __future__ import annotations

from functools import reduce
from typing import Callable, Sequence

import numpy as np

HERM_TOL = 1e-10
PSD_TOL = 1e-9
CLIP_TOL = 1e-9


class NotHermitianError(ValueError):
    pass


class DimensionError(ValueError):
    pass


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a finite 2-D complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def hermiticity_error(m: np.ndarray) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def check_hermitian(m, tol: float = HERM_TOL) -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"matrix is not square: {a.shape}")
    err = hermiticity_error(a)
    if err > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max |m - m^dag| = {err:.3e})")
    return a


def kron(*mats) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    if not mats:
        raise ValueError("kron needs at least one matrix")
    return reduce(np.kron, (as_matrix(m) for m in mats))


def check_dims(dims: Sequence[int], n: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise DimensionError(f"subsystem dimensions must be positive: {dims}")
    if int(np.prod(dims)) != n:
        raise DimensionError(f"dims {dims} do not multiply to matrix dimension {n}")
    return dims


def partial_trace(m, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every factor of ``m`` not listed in ``keep``.

    ``keep`` is a set of factor indices into ``dims``; the kept factors stay
    in their original order.

    >>> bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    >>> partial_trace(np.outer(bell, bell), [2, 2], [0]).real
    array([[0.5, 0. ],
           [0. , 0.5]])
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"matrix is not square: {a.shape}")
    dims = check_dims(dims, a.shape[0])
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must name at least one factor")
    if keep[0] < 0 or keep[-1] >= len(dims):
        raise DimensionError(f"keep indices {keep} out of range for {len(dims)} factors")
    n = len(dims)
    t = a.reshape(dims + dims)
    # dropped factors share their row/column label, so einsum contracts them
    row = list(range(n))
    col = [n + i if i in keep else i for i in range(n)]
    out = keep + [n + i for i in keep]
    t = np.einsum(t, row + col, out)
    d = int(np.prod([dims[i] for i in keep]))
    return t.reshape(d, d)


def herm_eig(m, tol: float = HERM_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending."""
    a = check_hermitian(m, tol)
    a = (a + a.conj().T) / 2
    w, v = np.linalg.eigh(a)
    return w, v


def eigvalsh(m, tol: float = HERM_TOL) -> np.ndarray:
    a = check_hermitian(m, tol)
    return np.linalg.eigvalsh((a + a.conj().T) / 2)


def apply_herm_func(m, f: Callable[[np.ndarray], np.ndarray], tol: float = HERM_TOL) -> np.ndarray:
    """Apply a real scalar function to a Hermitian matrix through its spectrum.

    ``f`` receives the eigenvalue array and must return an array of the same
    length; a non-finite result raises ``ValueError``.
    """
    w, v = herm_eig(m, tol)
    with np.errstate(divide="ignore", invalid="ignore"):
        fw = np.asarray(f(w), dtype=float)
    if fw.shape != w.shape or not np.all(np.isfinite(fw)):
        raise ValueError(f"function undefined on spectrum {w}")
    return (v * fw) @ v.conj().T


def inv_sqrt(m, floor: float = 1e-8) -> np.ndarray:
    """Inverse square root of a positive-definite Hermitian matrix."""

    def f(w):
        if np.min(w) <= floor:
            raise ValueError(f"matrix is singular or near-singular (min eigenvalue {np.min(w):.3e})")
        return 1.0 / np.sqrt(w)

    return apply_herm_func(m, f)


def sqrtm_psd(m) -> np.ndarray:
    return apply_herm_func(m, lambda w: np.sqrt(clip_spectrum(w)))


def clip_spectrum(w: np.ndarray, tol: float = CLIP_TOL) -> np.ndarray:
    """Zero out roundoff-level negative eigenvalues; reject genuine negativity."""
    w = np.asarray(w, dtype=float)
    if w.size and np.min(w) < -tol:
        raise ValueError(f"eigenvalue {np.min(w):.3e} is below -{tol:g}; not a state")
    return np.where(w < 0, 0.0, w)


def is_psd(m, tol: float = PSD_TOL) -> bool:
    return bool(eigvalsh(m)[0] >= -tol)


def is_unitary(u, tol: float = HERM_TOL) -> bool:
    a = as_matrix(u)
    if a.shape[0] != a.shape[1]:
        return False
    return bool(np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0]))) <= tol)


def embed(op, dims: Sequence[int], targets: Sequence[int]) -> np.ndarray:
    """Lift ``op`` acting on factors ``targets`` (in that order) to the full space."""
    dims = tuple(dims)
    targets = list(targets)
    n = len(dims)
    rest = [i for i in range(n) if i not in targets]
    d_t = int(np.prod([dims[i] for i in targets]))
    d_r = int(np.prod([dims[i] for i in rest])) if rest else 1
    full = np.kron(as_matrix(op).reshape(d_t, d_t), np.eye(d_r))
    order = targets + rest
    shape = [dims[i] for i in order]
    t = full.reshape(shape + shape)
    perm = np.argsort(order)
    t = t.transpose(list(perm) + [n + p for p in perm])
    d = int(np.prod(dims))
    return t.reshape(d, d)


def partial_transpose(m, dims: Sequence[int], sys: int) -> np.ndarray:
    a = as_matrix(m)
    dims = check_dims(dims, a.shape[0])
    n = len(dims)
    t = a.reshape(dims + dims)
    axes = list(range(2 * n))
    axes[sys], axes[n + sys] = axes[n + sys], axes[sys]
    return t.transpose(axes).reshape(a.shape)
