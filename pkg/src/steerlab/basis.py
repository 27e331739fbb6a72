"""Generator bases and the Theta-matrix parametrization of tripartite states.

A state of R (x) S (x) E is expanded in products of generators
``F_R^mu (x) F_S^zeta (x) F_E^eta`` (index 0 is the identity). The real
coefficients are packed into a matrix whose rows run over the (zeta, eta)
pairs of the SE factor and whose columns run over mu:

* row 0          -> (0, 0)
* rows 1..n_S    -> (j, 0)
* rows n_S+k     -> (0, k)
* corr_index(j,k)-> (j, k)

Generators are normalized so that ``tr(F^a F^b) = N delta^{ab}``; with that
choice every coefficient is just ``tr(rho F_R^mu F_S^zeta F_E^eta)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .linalg import DimensionError, as_matrix, check_dims


@dataclass(frozen=True)
class GeneratorBasis:
    """Traceless Hermitian generators of SU(dim), ``tr(F^a F^b) = dim * delta``."""

    dim: int
    generators: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.dim * self.dim - 1

    @property
    def norm(self) -> int:
        return self.dim

    def with_identity(self) -> np.ndarray:
        """Stack ``[1, F^1, ..., F^n]`` as an array of shape (n+1, dim, dim)."""
        return np.concatenate([np.eye(self.dim, dtype=complex)[None], self.generators])


@lru_cache(maxsize=None)
def su_basis(n: int) -> GeneratorBasis:
    """Generalized Gell-Mann basis of SU(n).

    Off-diagonal pairs (j < k) come first in lexicographic order, each as a
    symmetric then an antisymmetric generator; the n-1 diagonal generators
    come last. For n = 2 this is exactly (sigma_x, sigma_y, sigma_z).
    """
    n = int(n)
    if n < 2:
        raise ValueError(f"SU(n) basis needs n >= 2, got {n}")
    gens = []
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), dtype=complex)
            s[j, k] = s[k, j] = 1
            a = np.zeros((n, n), dtype=complex)
            a[j, k] = -1j
            a[k, j] = 1j
            gens += [s, a]
    for l in range(1, n):
        d = np.zeros((n, n), dtype=complex)
        d[np.arange(l), np.arange(l)] = 1
        d[l, l] = -l
        gens.append(d * np.sqrt(2.0 / (l * (l + 1))))
    # standard Gell-Mann matrices have tr(F^2) = 2
    out = np.array(gens) * np.sqrt(n / 2.0)
    out.setflags(write=False)
    return GeneratorBasis(n, out)


def corr_index(j: int, k: int, n_s: int, n_e: int) -> int:
    """Row of the S-E correlation coefficient for generators (j, k), 1-based.

    Uses stride ``n_e`` so the map is a bijection for any n_S, n_E; for
    n_S == n_E it coincides with the ``n_S(j-1)+k`` layout.
    """
    if not (1 <= j <= n_s and 1 <= k <= n_e):
        raise IndexError(f"(j={j}, k={k}) out of range for n_S={n_s}, n_E={n_e}")
    return n_s + n_e + n_e * (j - 1) + k


def row_index(zeta: int, eta: int, n_s: int, n_e: int) -> int:
    """Theta row holding the coefficient of ``F_S^zeta (x) F_E^eta``."""
    if zeta == 0 and eta == 0:
        return 0
    if eta == 0:
        if not 1 <= zeta <= n_s:
            raise IndexError(f"zeta={zeta} out of range")
        return zeta
    if zeta == 0:
        if not 1 <= eta <= n_e:
            raise IndexError(f"eta={eta} out of range")
        return n_s + eta
    return corr_index(zeta, eta, n_s, n_e)


@lru_cache(maxsize=None)
def row_permutation(n_s: int, n_e: int) -> np.ndarray:
    """``perm[zeta * (n_e+1) + eta]`` is the Theta row of the pair (zeta, eta)."""
    perm = np.array(
        [row_index(z, e, n_s, n_e) for z in range(n_s + 1) for e in range(n_e + 1)]
    )
    perm.setflags(write=False)
    return perm


@dataclass(frozen=True)
class ThetaMatrix:
    """Real coefficient matrix of a tripartite state.

    ``entries`` has (n_S+1)(n_E+1) rows and n_R+1 columns. The R-only
    coefficients ``a`` are held separately; ``entries[0, 1:]`` is always zero
    and :meth:`full` returns the matrix with ``a`` placed in the first row.
    """

    entries: np.ndarray
    a: np.ndarray
    dims: tuple[int, int, int] = (2, 2, 2)

    def __post_init__(self):
        n_r, n_s, n_e = (d * d - 1 for d in self.dims)
        shape = ((n_s + 1) * (n_e + 1), n_r + 1)
        entries = np.array(self.entries, dtype=float)
        a = np.array(self.a, dtype=float).reshape(-1)
        if entries.shape != shape:
            raise DimensionError(f"Theta must have shape {shape}, got {entries.shape}")
        if a.shape != (n_r,):
            raise DimensionError(f"a must have length {n_r}, got {a.shape}")
        entries[0, 1:] = 0.0
        entries.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    @property
    def n_r(self) -> int:
        return self.dims[0] ** 2 - 1

    @property
    def n_s(self) -> int:
        return self.dims[1] ** 2 - 1

    @property
    def n_e(self) -> int:
        return self.dims[2] ** 2 - 1

    def full(self) -> np.ndarray:
        out = self.entries.copy()
        out[0, 1:] = self.a
        return out

    @property
    def s_block(self) -> np.ndarray:
        """Rows 1..n_S: the part that determines the reduced steering set of S."""
        return self.entries[1 : self.n_s + 1]

    def steer(self, x) -> np.ndarray:
        """Unnormalized steered coefficient vector ``e^X = Theta X``."""
        return self.full() @ np.asarray(x, dtype=float)

    def to_dict(self) -> dict:
        return {
            "n_r": self.n_r,
            "n_s": self.n_s,
            "n_e": self.n_e,
            "dims": list(self.dims),
            "a": [float(v) for v in self.a],
            "entries": [float(v) for v in self.entries.ravel()],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ThetaMatrix":
        if "dims" in d:
            dims = tuple(d["dims"])
        else:
            dims = tuple(int(round(np.sqrt(d[k] + 1))) for k in ("n_r", "n_s", "n_e"))
        n_r, n_s, n_e = (x * x - 1 for x in dims)
        entries = np.asarray(d["entries"], dtype=float).reshape((n_s + 1) * (n_e + 1), n_r + 1)
        return cls(entries, d["a"], dims)


def _bases(dims):
    return [su_basis(n).with_identity() for n in dims]


def theta_from_state(rho, dims: Sequence[int] = (2, 2, 2)) -> ThetaMatrix:
    """Expansion coefficients ``tr(rho F_R^mu F_S^zeta F_E^eta)`` as a Theta matrix."""
    m = as_matrix(rho)
    dims = check_dims(dims, m.shape[0])
    if len(dims) != 3:
        raise DimensionError(f"expected three subsystems (R, S, E), got {dims}")
    n_r, n_s, n_e = (d * d - 1 for d in dims)
    fr, fs, fe = _bases(dims)
    t = m.reshape(dims + dims)
    # tr(rho (A x B x C)) = sum rho[abc, def] A[da] B[eb] C[fc]
    c = np.einsum("abcdef,mda,zeb,yfc->zym", t, fr, fs, fe, optimize=True).real
    coeffs = c.reshape((n_s + 1) * (n_e + 1), n_r + 1)
    entries = np.empty_like(coeffs)
    entries[row_permutation(n_s, n_e)] = coeffs
    return ThetaMatrix(entries, entries[0, 1:].copy(), dims)


def state_from_theta(theta: ThetaMatrix) -> np.ndarray:
    """Assemble the Hermitian unit-trace matrix encoded by ``theta``.

    Positivity is not guaranteed; check the result with ``validate_state``.
    """
    dims = theta.dims
    fr, fs, fe = _bases(dims)
    coeffs = theta.full()[row_permutation(theta.n_s, theta.n_e)]
    c = coeffs.reshape(theta.n_s + 1, theta.n_e + 1, theta.n_r + 1)
    t = np.einsum("zym,mad,zbe,ycf->abcdef", c, fr, fs, fe, optimize=True)
    d = int(np.prod(dims))
    return t.reshape(d, d) / d
