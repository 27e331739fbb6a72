import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import I2, PHI_PLUS, SX, SZ, ghz
from steerlab.linalg import (
    DimensionError,
    NotHermitianError,
    apply_herm_func,
    check_hermitian,
    eigvalsh,
    embed,
    inv_sqrt,
    is_psd,
    is_unitary,
    kron,
    partial_trace,
    partial_transpose,
)
from steerlab.states import haar_unitary, random_density_matrix


def test_kron_sigma_x_identity():
    m = kron(SX, I2)
    assert np.allclose(m[:2, 2:], I2) and np.allclose(m[2:, :2], I2)
    assert np.allclose(m[:2, :2], 0) and np.allclose(m[2:, 2:], 0)


def test_kron_scalar_identity(rng):
    a = rng.normal(size=(3, 3))
    assert np.allclose(kron(np.array([[1.0]]), a), a)


def test_kron_mixed_product(rng):
    a, b, c, d = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4))
    assert np.allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-12)


def test_partial_trace_product(rng):
    rs, re = random_density_matrix(2, rng), random_density_matrix(2, rng)
    assert np.allclose(partial_trace(kron(rs, re), (2, 2), [0]), rs, atol=1e-12)
    assert np.allclose(partial_trace(kron(rs, re), (2, 2), [1]), re, atol=1e-12)


@pytest.mark.parametrize("keep", [[0], [1]])
def test_partial_trace_bell(keep):
    assert np.allclose(partial_trace(PHI_PLUS, (2, 2), keep), I2 / 2)


def test_partial_trace_ghz_middle():
    out = partial_trace(ghz(), (2, 2, 2), [0, 2])
    assert np.allclose(out, np.diag([0.5, 0, 0, 0.5]))


def test_partial_trace_unequal_dims(rng):
    a, b, c = random_density_matrix(2, rng), random_density_matrix(3, rng), random_density_matrix(2, rng)
    assert np.allclose(partial_trace(kron(a, b, c), (2, 3, 2), [1]), b, atol=1e-12)
    assert np.allclose(partial_trace(kron(a, b, c), (2, 3, 2), [0, 2]), kron(a, c), atol=1e-12)


def test_partial_trace_dimension_mismatch():
    with pytest.raises(DimensionError):
        partial_trace(np.eye(8), (2, 2), [0])


def test_eigvalsh_examples():
    assert np.allclose(eigvalsh(SZ), [-1, 1])
    assert np.allclose(eigvalsh(I2 / 2), [0.5, 0.5])


def test_eigvalsh_matches_characteristic_polynomial(rng):
    g = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    h = g + g.conj().T
    roots = np.sort(np.real(np.roots(np.poly(h))))
    assert np.allclose(eigvalsh(h), roots, atol=1e-8)


def test_non_hermitian_rejected():
    with pytest.raises(NotHermitianError):
        check_hermitian(np.array([[0, 1], [0, 0]]))


def test_herm_funcs():
    assert np.allclose(inv_sqrt(np.eye(4) / 4), 2 * np.eye(4))
    assert np.allclose(apply_herm_func(SZ, lambda w: w**2), I2)
    ent = apply_herm_func(I2 / 2, lambda w: np.where(w > 0, -w * np.log2(np.where(w > 0, w, 1)), 0.0))
    assert np.isclose(np.trace(ent).real, 1.0)


def test_is_psd():
    assert is_psd(np.eye(2))
    assert not is_psd(SZ)
    assert is_psd(np.diag([1.0, -1e-12]), tol=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 4, 8]))
def test_haar_is_unitary(seed, n):
    u = haar_unitary(n, np.random.default_rng(seed))
    assert is_unitary(u)
    assert abs(abs(np.linalg.det(u)) - 1) < 1e-10


def test_embed_and_partial_transpose():
    assert np.allclose(embed(SX, (2, 2, 2), [1]), kron(I2, SX, I2))
    pt = partial_transpose(PHI_PLUS, (2, 2), 1)
    assert np.isclose(np.linalg.eigvalsh(pt)[0], -0.5)
