import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sniep5 import eig
from sniep5.construct import construct, matrix_A, matrix_B, suleimanova_realize


def sym(a):
    a = np.asarray(a, dtype=float)
    return np.triu(a) + np.triu(a, 1).T


def test_diagonal():
    dec = eig.jacobi_eigen(np.diag([3.0, 1.0, -2.0]))
    np.testing.assert_array_equal(dec.values, [3.0, 1.0, -2.0])
    np.testing.assert_array_equal(np.abs(dec.vectors), np.eye(3))
    assert dec.sweeps == 0


def test_exchange():
    np.testing.assert_allclose(eig.eigenvalues([[0.0, 1.0], [1.0, 0.0]]), [1.0, -1.0], atol=1e-15)


def test_matrix_b_spectrum():
    np.testing.assert_allclose(eig.eigenvalues(matrix_B(0.2, 0.1, -0.1)), [1, 0.2, 0.1, -0.4, -0.9], atol=1e-10)


def test_rejects_asymmetric():
    with pytest.raises(ValueError):
        eig.jacobi_eigen([[0.0, 1.0], [0.5, 0.0]])


def test_perron_vector_examples():
    val, vec = eig.perron_vector([[0.0, 0.5], [0.5, 0.0]])
    assert val == pytest.approx(0.5, abs=1e-15)
    np.testing.assert_allclose(vec, [1 / math.sqrt(2)] * 2, atol=1e-15)

    val, vec = eig.perron_vector(np.zeros((3, 3)))
    assert val == 0.0
    np.testing.assert_array_equal(vec, [1.0, 0.0, 0.0])

    m = suleimanova_realize([1, -0.25, -0.25, -0.25, -0.25])
    val, vec = eig.perron_vector(m)
    assert val == pytest.approx(1.0, abs=1e-12)
    assert np.all(vec > 0)


def test_perron_vector_rejects_negative_matrix():
    with pytest.raises(ValueError):
        eig.perron_vector([[0.0, -1.0], [-1.0, 0.0]])


def test_perron_vector_reducible_tie():
    # two identical blocks: the top eigenspace is 2-dimensional
    val, vec = eig.perron_vector(np.kron(np.eye(2), [[0.0, 1.0], [1.0, 0.0]]))
    assert val == pytest.approx(1.0)
    assert np.all(vec >= 0)
    assert np.linalg.norm(vec) == pytest.approx(1.0)


def test_verify_examples():
    assert eig.verify(np.zeros((5, 5)), [0] * 5) == 0.0
    a = matrix_A(0.5, 0.0)
    assert eig.verify(a, [1, 0.5, 0, -0.5, -1]) <= 1e-10
    assert eig.verify(a, [1, 0.5, 0, -0.5, -0.9]) == pytest.approx(0.1, abs=1e-10)


sym5 = arrays(np.float64, (5, 5), elements=st.floats(-10, 10)).map(sym)


@given(sym5)
def test_eigenpairs_and_orthonormality(m):
    dec = eig.jacobi_eigen(m)
    norm_inf = max(1.0, float(np.max(np.sum(np.abs(m), axis=1))))
    res = m @ dec.vectors - dec.vectors * dec.values
    assert np.max(np.abs(res)) <= 1e-11 * norm_inf
    np.testing.assert_allclose(dec.vectors.T @ dec.vectors, np.eye(5), atol=1e-10)
    assert list(dec.values) == sorted(dec.values, reverse=True)


@given(sym5)
def test_trace_and_frobenius(m):
    vals = eig.eigenvalues(m)
    scale = max(1.0, float(np.sum(m * m)))
    assert math.fsum(vals) == pytest.approx(np.trace(m), abs=1e-11 * scale)
    assert math.fsum(vals**2) == pytest.approx(float(np.sum(m * m)), abs=1e-11 * scale)


@given(sym5, st.permutations(range(5)))
def test_permutation_similarity(m, perm):
    p = np.eye(5)[list(perm)]
    scale = max(1.0, float(np.max(np.abs(m))))
    np.testing.assert_allclose(eig.eigenvalues(p.T @ m @ p), eig.eigenvalues(m), atol=1e-12 * scale * 5)


@given(arrays(np.float64, (7, 5, 5), elements=st.floats(-5, 5)))
def test_batch_matches_single(stack):
    stack = np.array([sym(a) for a in stack])
    batch = eig.jacobi_eigvals_batch(stack)
    for m, vals in zip(stack, batch):
        np.testing.assert_allclose(vals, eig.eigenvalues(m), atol=1e-12 * max(1.0, float(np.max(np.abs(m)))) * 5)


@given(arrays(np.float64, (5, 5), elements=st.floats(0, 3)).map(sym))
def test_perron_vector_of_positive_matrix(m):
    m = m + 1e-3  # irreducible
    val, vec = eig.perron_vector(m)
    assert val == pytest.approx(eig.eigenvalues(m)[0])
    assert np.all(vec >= 0)
    np.testing.assert_allclose(m @ vec, val * vec, atol=1e-11 * max(1.0, val))


def test_verify_idempotent_on_certificates():
    for vals in ([2, 1, 0, -1, -2], [1, 0.2, 0.1, -0.4, -0.9], [1, -0.2, -0.3, -0.5, 0.0]):
        cert = construct(vals)
        assert eig.verify(cert.matrix, cert.target.values) == cert.residual
