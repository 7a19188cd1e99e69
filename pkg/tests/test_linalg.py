"""Linear-algebra helpers: Hermitian checks, partial trace/transpose."""

import numpy as np
import pytest

from lhvcert.linalg import (LinalgError, check_hermitian, dagger,
                            herm_eig, herm_eigenvalues, is_hermitian,
                            min_eigenvalue, partial_trace, partial_transpose,
                            tensor)


def random_hermitian(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return m + dagger(m)


def test_check_hermitian_accepts_and_symmetrizes():
    rng = np.random.default_rng(7)
    h = random_hermitian(rng, 4)
    out = check_hermitian(h + 1e-14 * 1j * np.eye(4))
    assert np.allclose(out, dagger(out))


def test_check_hermitian_rejects_nonhermitian():
    with pytest.raises(LinalgError):
        check_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert not is_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eigenvalues_match_characteristic_roots():
    # explicit 2x2 with known spectrum
    h = np.array([[2.0, 1.0 - 1.0j], [1.0 + 1.0j, 0.0]])
    w = herm_eigenvalues(h)
    assert np.allclose(w, [1.0 - np.sqrt(3.0), 1.0 + np.sqrt(3.0)])
    assert min_eigenvalue(h) == pytest.approx(1.0 - np.sqrt(3.0))


def test_eigendecomposition_reconstructs():
    rng = np.random.default_rng(11)
    for _ in range(25):
        h = random_hermitian(rng, 4)
        w, v = herm_eig(h)
        assert np.allclose(v @ np.diag(w) @ dagger(v), h, atol=1e-12)
        assert np.all(np.diff(w) >= -1e-12)  # ascending


def test_tensor_and_partial_trace_are_inverse_on_products():
    rng = np.random.default_rng(13)
    for _ in range(25):
        a = random_hermitian(rng, 2)
        b = random_hermitian(rng, 2)
        b = b / np.trace(b).real  # unit trace so tracing it out is exact
        m = tensor(a, b)
        assert np.allclose(partial_trace(m, "B"), a, atol=1e-12)
        assert np.allclose(partial_trace(tensor(b, a), "A"), a, atol=1e-12)


def test_partial_trace_is_trace_preserving():
    rng = np.random.default_rng(17)
    m = random_hermitian(rng, 4)
    assert np.trace(partial_trace(m, "A")) == pytest.approx(np.trace(m).real)
    assert np.trace(partial_trace(m, "B")) == pytest.approx(np.trace(m).real)


def test_partial_transpose_involution_and_composition():
    rng = np.random.default_rng(19)
    for _ in range(25):
        m = random_hermitian(rng, 4)
        assert np.allclose(partial_transpose(partial_transpose(m, "B"), "B"), m)
        assert np.allclose(partial_transpose(partial_transpose(m, "A"), "A"), m)
        # PT on A then B equals the full transpose
        both = partial_transpose(partial_transpose(m, "A"), "B")
        assert np.allclose(both, m.T)


def test_partial_transpose_on_product_transposes_one_factor():
    rng = np.random.default_rng(23)
    a = random_hermitian(rng, 2)
    b = random_hermitian(rng, 2)
    assert np.allclose(partial_transpose(tensor(a, b), "B"), tensor(a, b.T))
    assert np.allclose(partial_transpose(tensor(a, b), "A"), tensor(a.T, b))


def test_two_qubit_guards():
    with pytest.raises(LinalgError):
        partial_trace(np.eye(3), "A")
    with pytest.raises(LinalgError):
        partial_transpose(np.eye(2), "B")
    with pytest.raises(LinalgError):
        partial_trace(np.eye(4), "C")
