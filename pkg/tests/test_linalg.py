import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from approxrank import linalg as la
from approxrank.errors import ShapeMismatch, ValidationError
from conftest import H2, low_rank, real_matrices

J4 = np.ones((4, 4))


@pytest.mark.parametrize("M, expected", [
    (J4, [4, 0, 0, 0]),
    (np.eye(3), [1, 1, 1]),
    (H2, [math.sqrt(2), math.sqrt(2)]),
])
def test_singular_value_examples(M, expected):
    assert np.allclose(la.singular_values(M), expected, atol=1e-12)


@pytest.mark.parametrize("M, tr, sp", [
    (J4, 4, 4), (H2, 2 * math.sqrt(2), math.sqrt(2)), (np.zeros((3, 2)), 0, 0), (np.eye(3), 3, 1),
])
def test_norm_examples(M, tr, sp):
    assert la.trace_norm(M) == pytest.approx(tr, abs=1e-12)
    assert la.spectral_norm(M) == pytest.approx(sp, abs=1e-12)


@pytest.mark.parametrize("M, r", [
    (J4, 1), (np.eye(5), 5), (np.outer([1, 2], [3, 4]), 1), (np.zeros((3, 3)), 0),
])
def test_rank_examples(M, r):
    assert la.numerical_rank(M) == r


def test_entrywise_examples():
    A = la.hadamard(4)
    assert np.array_equal(la.entrywise_product(A, A), J4)
    assert np.array_equal(la.entrywise_product([[2, -3]], [[-1, 1]]), [[-2, -3]])
    assert np.array_equal(la.entrywise_power(A, 1), A)
    assert np.array_equal(la.entrywise_power([[2, -2]], 3), [[8, -8]])
    assert np.array_equal(la.entrywise_power(A, 2), J4)
    with pytest.raises(ShapeMismatch):
        la.entrywise_product(np.ones((2, 2)), np.ones((2, 3)))


def test_hadamard_is_orthogonal():
    for n in (1, 2, 4, 8, 16):
        H = la.hadamard(n)
        assert np.array_equal(H @ H.T, n * np.eye(n))
    with pytest.raises(ValidationError):
        la.hadamard(6)


def test_validation():
    with pytest.raises(ValidationError):
        la.as_matrix([[np.nan]])
    with pytest.raises(ValidationError):
        la.as_matrix(np.ones(3))
    with pytest.raises(ValidationError):
        la.as_sign_matrix([[1, 0]])
    assert la.is_sign_matrix(H2) and not la.is_sign_matrix([[2.0]])


@given(real_matrices(max_m=9, max_n=9))
def test_svd_matches_numpy(M):
    res = la.svd(M)
    k = min(M.shape)
    assert res.U.shape == (M.shape[0], k) and res.V.shape == (M.shape[1], k)
    scale = max(1.0, np.abs(M).max())
    assert np.allclose(res.s, np.linalg.svd(M, compute_uv=False), atol=1e-10 * scale)
    assert np.allclose(res.reconstruct(), M, atol=1e-10 * scale)
    assert np.allclose(res.U.T @ res.U, np.eye(k), atol=1e-10)
    assert np.allclose(res.V.T @ res.V, np.eye(k), atol=1e-10)
    assert np.all(np.diff(res.s) <= 1e-12 * scale)


@given(real_matrices())
def test_norm_ordering(M):
    tr, sp = la.trace_norm(M), la.spectral_norm(M)
    assert tr >= sp - 1e-12 * max(1, tr) and sp >= 0
    if la.numerical_rank(M) <= 1:
        assert tr == pytest.approx(sp, rel=1e-8, abs=1e-9)


@given(real_matrices())
def test_rank_dominates_trace_ratio(M):
    fro = la.frobenius(M)
    if fro == 0:
        return
    assert la.numerical_rank(M) >= la.trace_norm(M) ** 2 / fro**2 - 1e-6


@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_entrywise_power_rank(r, s, seed):
    rng = np.random.default_rng(seed)
    M = low_rank(rng, 12, 30, r)
    assert la.numerical_rank(M) == r
    assert la.numerical_rank(la.entrywise_power(M, s)) <= r**s


def test_default_tau():
    assert la.default_tau((3, 7)) == pytest.approx(7e-9)
