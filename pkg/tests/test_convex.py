import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from approxrank.convex import LpProblem, SdpConstraint, SdpProblem, solve_lp, solve_sdp
from approxrank.errors import Infeasible, Unbounded, ValidationError
from approxrank.norms import _gamma2_program
from conftest import H2, sign_matrices


def scaled_identity_program(off):
    """min t s.t. [[t, off], [off, t]] PSD."""
    cons = [
        SdpConstraint(([0], [0], [1.0]), {0: -1.0}, "=", 0.0),
        SdpConstraint(([1], [1], [1.0]), {0: -1.0}, "=", 0.0),
        SdpConstraint(([0, 1], [1, 0], [0.5, 0.5]), {}, "=", off),
    ]
    return SdpProblem(dim=2, n_scalars=1, objective=np.array([1.0]), constraints=cons)


@pytest.mark.parametrize("off, expected", [(1.0, 1.0), (0.0, 0.0), (-3.0, 3.0)])
def test_sdp_two_by_two(off, expected):
    sol = solve_sdp(scaled_identity_program(off), tol=1e-9)
    assert sol.objective == pytest.approx(expected, abs=1e-7)
    assert sol.scalars[0] == pytest.approx(expected, abs=1e-7)


def test_sdp_gamma2_h2():
    sol = solve_sdp(_gamma2_program(H2), tol=1e-9)
    assert sol.objective == pytest.approx(math.sqrt(2), abs=1e-7)


def test_sdp_dense_matrix_constraints():
    # min <C, Z> s.t. tr Z = 1: the smallest eigenvalue of C
    rng = np.random.default_rng(3)
    G = rng.standard_normal((5, 5))
    C = G + G.T
    p = SdpProblem(dim=5, n_scalars=0, objective=np.zeros(0), matrix_objective=C,
                   constraints=[SdpConstraint(np.eye(5), {}, "=", 1.0)])
    sol = solve_sdp(p, tol=1e-9)
    assert sol.objective == pytest.approx(np.linalg.eigvalsh(C)[0], abs=1e-7)


def test_sdp_inequality_and_free_scalar():
    # min s s.t. Z = [[1, s], [s, 1]] PSD-free bound: s >= -1 from PSD; free s
    cons = [
        SdpConstraint(([0], [0], [1.0]), {}, "=", 1.0),
        SdpConstraint(([1], [1], [1.0]), {}, "=", 1.0),
        SdpConstraint(([0, 1], [1, 0], [0.5, 0.5]), {0: -1.0}, "=", 0.0),
        SdpConstraint(None, {0: 1.0}, "<=", 5.0),
    ]
    p = SdpProblem(dim=2, n_scalars=1, objective=np.array([1.0]), constraints=cons, free=(0,))
    sol = solve_sdp(p, tol=1e-9)
    assert sol.scalars[0] == pytest.approx(-1.0, abs=1e-6)


def test_sdp_rejects_asymmetric():
    p = SdpProblem(dim=2, n_scalars=0, objective=np.zeros(0),
                   constraints=[SdpConstraint(np.array([[0.0, 1.0], [0.0, 0.0]]), {}, "=", 1.0)])
    with pytest.raises(ValidationError):
        solve_sdp(p)


@settings(max_examples=25)
@given(sign_matrices(max_m=4, max_n=4), st.sampled_from([None, 2.0, 3.0]))
def test_sdp_optimality_invariants(A, alpha):
    tol = 1e-8
    sol = solve_sdp(_gamma2_program(A, alpha), tol=tol)
    assert abs(sol.objective - sol.dual_objective) <= tol * (1 + abs(sol.objective))
    assert np.linalg.eigvalsh(sol.Z)[0] >= -10 * tol
    assert sol.iterations <= 200


# --- LP -------------------------------------------------------------------

@pytest.mark.parametrize("p, expected", [
    (LpProblem(c=[1.0], A_eq=np.array([[1.0]]), b_eq=[1.0]), 1.0),
    (LpProblem(c=[1.0, 1.0], A_eq=np.array([[1.0, 1.0]]), b_eq=[2.0]), 2.0),
])
def test_lp_examples(p, expected):
    assert solve_lp(p).objective == pytest.approx(expected, abs=1e-12)


def test_lp_infeasible_and_unbounded():
    with pytest.raises(Infeasible):
        solve_lp(LpProblem(c=[1.0], A_eq=np.array([[1.0]]), b_eq=[-1.0]))
    with pytest.raises(Unbounded):
        solve_lp(LpProblem(c=[-1.0], A_ub=np.array([[-1.0]]), b_ub=[0.0]))


def vertex_enumeration(c, A_eq, b_eq, A_ub, b_ub):
    """Brute-force LP optimum over x >= 0 (None if infeasible)."""
    nv = len(c)
    rows = [(A_ub[i], b_ub[i]) for i in range(len(b_ub))] + [(np.eye(nv)[j], 0.0) for j in range(nv)]
    need = nv - len(b_eq)
    best = None
    for active in itertools.combinations(range(len(rows)), need):
        M = np.vstack([A_eq] + [rows[i][0] for i in active]) if len(b_eq) else np.vstack([rows[i][0] for i in active])
        rhs = np.concatenate([b_eq, [rows[i][1] for i in active]])
        if abs(np.linalg.det(M)) < 1e-9:
            continue
        x = np.linalg.solve(M, rhs)
        if np.any(x < -1e-9) or np.any(A_ub @ x > b_ub + 1e-9) or (len(b_eq) and np.abs(A_eq @ x - b_eq).max() > 1e-9):
            continue
        val = c @ x
        best = val if best is None else min(best, val)
    return best


@given(st.integers(0, 2**32 - 1), st.integers(2, 6), st.integers(0, 2), st.integers(0, 1))
def test_lp_matches_vertex_enumeration(seed, nv, n_eq, n_ub):
    rng = np.random.default_rng(seed)
    c = rng.integers(-5, 6, nv).astype(float)
    A_eq = rng.integers(-3, 4, (n_eq, nv)).astype(float)
    b_eq = rng.integers(0, 6, n_eq).astype(float)
    # a bounding row keeps every feasible instance bounded (at most 4 constraints)
    A_ub = np.vstack([rng.integers(-3, 4, (n_ub, nv)), np.ones((1, nv))]).astype(float)
    b_ub = np.concatenate([rng.integers(0, 6, n_ub), [10]]).astype(float)
    expected = vertex_enumeration(c, A_eq, b_eq, A_ub, b_ub)
    p = LpProblem(c=c, A_eq=A_eq if n_eq else None, b_eq=b_eq if n_eq else None, A_ub=A_ub, b_ub=b_ub)
    if expected is None:
        with pytest.raises(Infeasible):
            solve_lp(p)
    else:
        assert solve_lp(p).objective == pytest.approx(expected, abs=1e-8)
