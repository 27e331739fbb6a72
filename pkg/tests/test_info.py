import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import I2, PHI_PLUS, ghz
from steerlab.info import (
    concurrence,
    cond_mutual_info,
    dpi_violation,
    mi_rs,
    mutual_info,
    ppt_separable,
    vn_entropy,
)
from steerlab.linalg import kron
from steerlab.states import haar_unitary, random_density_matrix

SINGLET = np.outer([0, 1, -1, 0], [0, 1, -1, 0]) / 2


def werner(p):
    return p * SINGLET + (1 - p) * np.eye(4) / 4


def test_entropy_examples(rng):
    assert np.isclose(vn_entropy(I2 / 2), 1.0)
    assert abs(vn_entropy(random_density_matrix(4, rng, rank=1))) < 1e-9
    h = -0.75 * np.log2(0.75) - 0.25 * np.log2(0.25)
    assert np.isclose(vn_entropy(np.diag([0.75, 0.25])), h)
    assert np.isclose(h, 0.811278, atol=1e-6)


def test_mutual_info_examples(rng):
    prod = kron(random_density_matrix(2, rng), random_density_matrix(2, rng))
    assert abs(mutual_info(prod, (2, 2), [0], [1])) < 1e-10
    assert np.isclose(mutual_info(PHI_PLUS, (2, 2), [0], [1]), 2.0)
    classical = np.diag([0.5, 0, 0, 0.5])
    assert np.isclose(mutual_info(classical, (2, 2), [0], [1]), 1.0)


def test_mutual_info_bad_partition():
    with pytest.raises(ValueError):
        mutual_info(np.eye(4) / 4, (2, 2), [0], [0])


def test_cmi_examples(rng):
    prod = kron(*(random_density_matrix(2, rng) for _ in range(3)))
    assert abs(cond_mutual_info(prod)) < 1e-10
    assert abs(cond_mutual_info(kron(random_density_matrix(4, rng), random_density_matrix(2, rng)))) < 1e-10
    assert np.isclose(cond_mutual_info(ghz()), 1.0)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_strong_subadditivity(seed):
    assert cond_mutual_info(random_density_matrix(8, np.random.default_rng(seed))) >= -1e-9


def test_dpi_examples(rng):
    rho = random_density_matrix(8, rng)
    assert dpi_violation(rho, np.eye(4)).nu == 0
    local = np.kron(haar_unitary(2, rng), haar_unitary(2, rng))
    assert dpi_violation(rho, local).nu < 1e-10
    for _ in range(20):
        markov = kron(random_density_matrix(4, rng), random_density_matrix(2, rng))
        assert dpi_violation(markov, haar_unitary(4, rng)).nu <= 1e-9


def test_report_fields(rng):
    rho = random_density_matrix(8, rng)
    rep = dpi_violation(rho, haar_unitary(4, rng))
    assert np.isclose(rep.mi_before, mi_rs(rho))
    assert rep.nu == max(0.0, rep.delta)
    assert set(rep.to_dict()) == {"cmi", "mi_before", "mi_after", "nu"}


def test_concurrence_examples(rng):
    assert np.isclose(concurrence(PHI_PLUS), 1.0)
    assert abs(concurrence(kron(random_density_matrix(2, rng), random_density_matrix(2, rng)))) < 1e-7
    assert np.isclose(concurrence(werner(0.5)), 0.25)
    for p in np.linspace(0, 1, 11):
        assert np.isclose(concurrence(werner(p)), max(0.0, (3 * p - 1) / 2), atol=1e-8)


def test_ppt_examples():
    assert not ppt_separable(PHI_PLUS)
    assert ppt_separable(np.eye(4) / 4)


def test_concurrence_ppt_agree():
    rng = np.random.Generator(np.random.PCG64(99))
    for _ in range(1000):
        rho = random_density_matrix(4, rng, rank=int(rng.integers(1, 5)))
        if concurrence(rho) > 1e-6:
            assert not ppt_separable(rho)
        else:
            assert ppt_separable(rho)
