import itertools

import numpy as np
import pytest

from conftest import I2, SX, bell_rs_product
from steerlab.basis import theta_from_state
from steerlab.dynamics import evolve_theta, u_coeffs, v_omega
from steerlab.linalg import hermiticity_error, kron, partial_trace
from steerlab.states import (
    GenerationConfig,
    gen_pairwise_entangled,
    haar_unitary,
    pqt_theta,
    random_density_matrix,
    slocc_canonicalize,
)
from steerlab.steering import bloch_vector, domain_rank, reduced_steer_s, sample_x, state_from_bloch, steer_se
from steerlab.tomography import (
    STANDARD_PROBES,
    DegenerateDomainError,
    DynamicalMap,
    MapStatus,
    ProbeSet,
    ReconstructionError,
    apply_map,
    b_negativity,
    is_cp,
    map_from_affine,
    map_from_theta,
    negativity_from_eigenvalues,
    reconstruct_map,
    reshuffle,
    unvec,
    vec,
    verify_linear_independence,
)
from steerlab.verification import oracle_map_matrix

REPORTED = [2.3838, 0.2288, -0.5704, -0.0422]


def _map(rho, u, **kw):
    th = theta_from_state(rho)
    return map_from_theta(th, evolve_theta(th, u_coeffs(u)), **kw)


def test_reshuffle_index_rule_exhaustive(rng):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    b = reshuffle(a)
    for i, ip, j, jp in itertools.product(range(2), repeat=4):
        assert b[2 * i + ip, 2 * j + jp] == a[2 * i + j, 2 * ip + jp]
    assert np.allclose(reshuffle(b), a)


def test_literal_index_rule_breaks_hermiticity(rng):
    # B_{ii';j'j} instead of B_{ii';jj'}: for a unitary map the result is not Hermitian
    u = haar_unitary(2, rng)
    a = np.kron(u, u.conj())
    literal = a.reshape(2, 2, 2, 2).transpose(0, 2, 3, 1).reshape(4, 4)
    assert hermiticity_error(literal) > 1e-3
    assert hermiticity_error(reshuffle(a)) < 1e-12


def test_probe_rank_examples(rng):
    th = theta_from_state(bell_rs_product(I2 / 2))
    full = ProbeSet.from_theta(th, th.s_block, STANDARD_PROBES)
    assert verify_linear_independence(full) == 4
    same = ProbeSet.from_theta(th, th.s_block, [STANDARD_PROBES[0]] * 4)
    assert verify_linear_independence(same) == 1
    pqt = pqt_theta(0.2, 0.2, 0.2)
    assert domain_rank(pqt) == 1
    assert verify_linear_independence(ProbeSet.from_theta(pqt, pqt.s_block)) <= 2


def test_identity_evolution_map(rng):
    rho = slocc_canonicalize(random_density_matrix(8, rng))
    dmap = _map(rho, np.eye(4))
    assert np.allclose(dmap.A, np.eye(4), atol=1e-10)
    assert np.allclose(dmap.eigenvalues, [0, 0, 0, 2], atol=1e-10)
    assert abs(dmap.b_neg) < 1e-10 and dmap.is_cp()


def test_unitary_map_on_product_theta(rng):
    rho = bell_rs_product(random_density_matrix(2, rng))
    dmap = _map(rho, kron(SX, I2))
    assert np.allclose(dmap.eigenvalues, [0, 0, 0, 2], atol=1e-10)
    assert abs(dmap.b_neg) < 1e-10


def test_held_out_state(rng):
    rho = slocc_canonicalize(random_density_matrix(8, rng))
    u = haar_unitary(4, rng)
    dmap = _map(rho, u)
    for _ in range(5):
        x = sample_x(rng)
        se = steer_se(rho, x)
        want = partial_trace(u @ se @ u.conj().T, (2, 2), [0])
        got = apply_map(dmap, partial_trace(se, (2, 2), [0]))
        assert np.allclose(got, want, atol=1e-9)


def test_matches_full_matrix_oracle(rng):
    rho = slocc_canonicalize(random_density_matrix(8, rng))
    u = haar_unitary(4, rng)
    assert np.allclose(_map(rho, u).A, oracle_map_matrix(rho, u), atol=1e-9)


def test_negativity_examples():
    assert negativity_from_eigenvalues([2, 0, 0, 0]) == 0
    assert negativity_from_eigenvalues([1, 1, 0, 0]) == 0
    assert abs(negativity_from_eigenvalues(REPORTED) - 1.2252) < 1e-4
    assert abs(sum(REPORTED) - 2) < 1e-3


def test_cp_examples(rng):
    assert DynamicalMap(np.eye(4)).is_cp()
    b = np.diag(REPORTED).astype(complex)
    assert not is_cp(DynamicalMap(reshuffle(b)))
    for _ in range(10):
        # initially uncorrelated S and E, steered from a Bell pair: ideal preparation
        rho = bell_rs_product(random_density_matrix(2, rng))
        dmap = _map(rho, haar_unitary(4, rng))
        assert dmap.is_cp() and b_negativity(dmap) < 1e-8


def test_apply_map_trace_preserving(rng):
    rho, _ = gen_pairwise_entangled(GenerationConfig(seed=2))
    dmap = _map(rho.mat, v_omega(2.0))
    for _ in range(5):
        m = random_density_matrix(2, rng)
        assert np.isclose(np.trace(apply_map(dmap, m)), 1, atol=1e-10)
    assert np.allclose(apply_map(DynamicalMap(np.eye(4)), SX), SX)


def test_ncp_map_outside_domain_gives_negative_output():
    for seed in range(20):
        rho, _ = gen_pairwise_entangled(GenerationConfig(seed=seed))
        dmap = _map(rho.mat, v_omega(2.0))
        if dmap.is_cp():
            continue
        worst = min(
            np.linalg.eigvalsh(apply_map(dmap, state_from_bloch(r)))[0]
            for r in np.vstack([np.eye(3), -np.eye(3)])
        )
        if worst < -1e-9:
            return
    pytest.fail("no NCP map produced a negative output on a pole state")


def test_degenerate_domain_flags():
    th = pqt_theta(0.2, 0.2, 0.2)
    tt = evolve_theta(th, u_coeffs(v_omega(1.0)))
    with pytest.raises(DegenerateDomainError) as err:
        map_from_theta(th, tt)
    assert err.value.status is MapStatus.DEGENERATE_DOMAIN
    dmap = map_from_theta(th, tt, extend=True)
    assert dmap.status is MapStatus.OK
    x = np.array([1, 0.3, -0.2, 0.5])
    got = apply_map(dmap, state_from_bloch(reduced_steer_s(th, x)))
    assert np.allclose(bloch_vector(got), tt @ x, atol=1e-10)
    point = pqt_theta(0.2, 0.2, 0.0)
    with pytest.raises(DegenerateDomainError):
        map_from_theta(point, evolve_theta(point, u_coeffs(v_omega(1.0))), extend=True)


def test_map_from_affine_identity():
    assert np.allclose(map_from_affine(np.eye(3), np.zeros(3)), np.eye(4))
    dep = map_from_affine(np.zeros((3, 3)), np.zeros(3))
    assert np.allclose(apply_map(DynamicalMap(dep), np.diag([1.0, 0.0])), I2 / 2)


def test_reconstruction_failure_on_nan():
    probes = ProbeSet(STANDARD_PROBES.astype(float), np.eye(4)[:, 1:] * 0.5 + 0.1, np.full((4, 3), np.nan))
    with pytest.raises(ReconstructionError) as err:
        reconstruct_map(probes)
    assert err.value.status is MapStatus.RECONSTRUCTION_FAILURE


def test_vec_row_major():
    m = np.array([[1, 2], [3, 4]])
    assert np.array_equal(vec(m), [1, 2, 3, 4]) and np.array_equal(unvec(vec(m)), m)
