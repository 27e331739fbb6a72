import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steerlab.basis import corr_index, theta_from_state
from steerlab.dynamics import NotUnitaryError, bloch_closed_form, evolve_full, evolve_theta, u_coeffs, v_omega
from steerlab.linalg import partial_trace
from steerlab.states import haar_unitary, random_density_matrix, slocc_canonicalize
from steerlab.steering import bloch_vector, sample_x, steer_se
from steerlab.verification import oracle_bloch_after

SWAP = np.eye(4)[[0, 2, 1, 3]]
SY = np.array([[0, -1j], [1j, 0]])


def test_identity_coefficients():
    c = u_coeffs(np.eye(4))
    assert np.allclose(c, np.einsum("ac,bd->abcd", np.eye(4), np.eye(4)))


def test_swap_coefficients():
    c = u_coeffs(SWAP)
    for j in range(1, 4):
        assert np.isclose(c[j, 0, 0, j], 1) and np.isclose(c[0, j, j, 0], 1)
        assert np.isclose(np.abs(c[j, 0]).sum(), 1) and np.isclose(np.abs(c[0, j]).sum(), 1)


def test_row_normalization(rng):
    c = u_coeffs(haar_unitary(4, rng))
    assert np.allclose((c**2).sum(axis=(2, 3)), 1)


def test_not_unitary():
    with pytest.raises(NotUnitaryError):
        u_coeffs(2 * np.eye(4))


def test_identity_evolution(rand_rho):
    th = theta_from_state(rand_rho)
    assert np.allclose(evolve_theta(th, u_coeffs(np.eye(4))), th.s_block)
    assert np.allclose(evolve_full(rand_rho, np.eye(4)), rand_rho)


def test_maximally_mixed_fixed(rng):
    th = theta_from_state(np.eye(8) / 8)
    assert np.allclose(evolve_theta(th, u_coeffs(haar_unitary(4, rng))), 0)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_steer_then_evolve(seed):
    rng = np.random.default_rng(seed)
    rho = slocc_canonicalize(random_density_matrix(8, rng))
    u = haar_unitary(4, rng)
    tt = evolve_theta(theta_from_state(rho), u_coeffs(u))
    for _ in range(5):
        x = sample_x(rng)
        assert np.max(np.abs(tt @ x - oracle_bloch_after(rho, u, x))) < 1e-10


def test_steer_then_evolve_non_canonical(rng):
    rho = random_density_matrix(8, rng)
    u = haar_unitary(4, rng)
    th = theta_from_state(rho)
    tt = evolve_theta(th, u_coeffs(u))
    x = sample_x(rng)
    se = steer_se(rho, x)
    oracle = bloch_vector(partial_trace(u @ se @ u.conj().T, (2, 2), [0]))
    assert np.allclose(tt @ x / (1 + th.a @ x[1:]), oracle, atol=1e-10)


def test_evolve_full_spectrum(rand_rho, rng):
    out = evolve_full(rand_rho, haar_unitary(4, rng))
    assert np.allclose(np.linalg.eigvalsh(out), np.linalg.eigvalsh(rand_rho), atol=1e-10)


def test_cross_module(rand_rho, rng):
    u = haar_unitary(4, rng)
    direct = theta_from_state(evolve_full(rand_rho, u)).s_block
    assert np.allclose(evolve_theta(theta_from_state(rand_rho), u_coeffs(u)), direct, atol=1e-10)


def test_v_omega():
    assert np.allclose(v_omega(0), np.eye(4))
    from scipy.linalg import expm

    assert np.allclose(v_omega(2.0), expm(2j * np.kron(SY, SY)), atol=1e-14)
    for w in np.random.default_rng(0).uniform(-10, 10, 100):
        u = v_omega(w)
        assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-14


def test_closed_form_special_points():
    e = np.arange(16, dtype=float)
    assert np.allclose(bloch_closed_form(e, 0), e[1:4])
    assert np.allclose(bloch_closed_form(e, np.pi / 4), [-e[14], e[2], e[8]])


def test_closed_form_matches_general(rand_rho, rng):
    th = theta_from_state(rand_rho)
    x = sample_x(rng)
    assert corr_index(1, 2, 3, 3) == 8 and corr_index(3, 2, 3, 3) == 14
    for w in np.linspace(0, np.pi, 25):
        tt = evolve_theta(th, u_coeffs(v_omega(w)))
        assert np.max(np.abs(bloch_closed_form(th.full() @ x, w) - tt @ x)) < 1e-12
