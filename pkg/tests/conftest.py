import numpy as np
import pytest

from steerlab.linalg import kron
from steerlab.states import random_density_matrix

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2, dtype=complex)

PHI_PLUS = np.outer([1, 0, 0, 1], [1, 0, 0, 1]) / 2
KET0 = np.diag([1.0, 0.0]).astype(complex)


def ghz() -> np.ndarray:
    psi = np.zeros(8)
    psi[0] = psi[7] = 1 / np.sqrt(2)
    return np.outer(psi, psi).astype(complex)


def ket000() -> np.ndarray:
    return kron(KET0, KET0, KET0)


def bell_rs_product(rho_e=KET0) -> np.ndarray:
    return kron(PHI_PLUS, rho_e)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))


@pytest.fixture
def rand_rho(rng):
    return random_density_matrix(8, rng)
