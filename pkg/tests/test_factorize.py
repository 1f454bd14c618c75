import numpy as np
import pytest
from hypothesis import given, settings

from approxrank.errors import NotExact, NotPsd, ValidationError
from approxrank.factorize import factor_from_gram, layered_from_nu, make_factorization
from approxrank.norms import _gamma2_program, gamma2, nu
from approxrank.convex import solve_sdp
from conftest import H2, sign_matrices


def test_gram_examples():
    f = factor_from_gram(np.eye(2), 1, 1)
    assert f.product()[0, 0] == pytest.approx(0.0)
    f = factor_from_gram(np.ones((2, 2)), 1, 1)
    assert f.product()[0, 0] == pytest.approx(1.0)
    assert f.col_bound == pytest.approx(1.0)


def test_gram_from_h2_program():
    tol = 1e-8
    sol = solve_sdp(_gamma2_program(H2), tol=tol)
    f = factor_from_gram(sol.Z, 2, 2, tol)
    assert f.col_bound**2 <= np.sqrt(2) + 2 * tol
    assert np.allclose(f.product(), H2, atol=1e-6)
    assert f.k == 4  # inner dimension is never truncated


def test_gram_rejects():
    with pytest.raises(NotPsd):
        factor_from_gram(np.diag([1.0, -1.0]), 1, 1)
    with pytest.raises(ValidationError):
        factor_from_gram(np.eye(3), 1, 1)
    # tiny negative eigenvalues are clipped
    f = factor_from_gram(np.diag([1.0, -1e-10]), 1, 1)
    assert np.all(np.isfinite(f.X))


@settings(max_examples=15)
@given(sign_matrices(max_m=4, max_n=4))
def test_gram_factor_bound(A):
    tol = 1e-8
    m, n = A.shape
    sol = solve_sdp(_gamma2_program(A), tol=tol)
    f = factor_from_gram(sol.Z, m, n, tol)
    assert f.col_bound**2 <= gamma2(A).value + 2 * tol
    assert np.allclose(f.product(), sol.Z[:m, m:], atol=1e-9)


def test_make_factorization_checks():
    with pytest.raises(ValidationError):
        make_factorization(np.ones((2, 3)), np.ones((3, 3)))
    f = make_factorization([[3.0, 0.0]], [[4.0]])
    assert f.norm_product() == 12.0


def test_layered_examples():
    L = layered_from_nu(nu(np.ones((3, 2))))
    assert np.allclose(L.beta, [1.0])
    L = layered_from_nu(nu(np.outer([1, -1], [-1, 1, 1])))
    assert np.allclose(L.beta, [1.0])
    L = layered_from_nu(nu(H2))
    assert np.allclose(np.sort(L.beta), [0.5] * 4)
    assert np.allclose(L.target(), H2)
    with pytest.raises(NotExact):
        layered_from_nu(gamma2(H2))


@settings(max_examples=20)
@given(sign_matrices(max_m=3, max_n=4))
def test_layered_identities(A):
    c = nu(A)
    L = layered_from_nu(c)
    f = L.to_factorization()
    assert np.allclose(f.product(), A, atol=1e-8)
    cx, cy = f.column_norms()
    assert np.allclose(cx**2, c.value, atol=1e-8) and np.allclose(cy**2, c.value, atol=1e-8)
    assert L.beta.sum() == pytest.approx(c.value, abs=1e-8)
    # row i of X and Y has uniform magnitude sqrt(beta_i)
    assert np.allclose(np.abs(f.X), np.sqrt(L.beta)[:, None])
