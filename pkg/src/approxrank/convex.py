"""Small dense convex solvers.

``solve_sdp`` is an infeasible-start primal-dual interior point method using
the Nesterov-Todd search direction with a Mehrotra predictor-corrector. It works on one
symmetric matrix variable ``Z`` plus a vector of auxiliary scalars::

    minimize    <C, Z> + c . x
    subject to  <F_k, Z> + g_k . x  (<=, =, >=)  b_k      for each k
                Z PSD,  x >= 0  (or free, for indices listed in ``free``)

Internally every inequality gets a nonnegative slack and every free scalar is
split into a difference of two nonnegative ones, giving the standard pair

    primal:  min <C,X> + c.x   s.t.  A(X) + Bx = b,  X PSD, x >= 0
    dual:    max b.y           s.t.  C - A*(y) = S PSD,  c - B'y = s >= 0.

``solve_lp`` wraps HiGHS through :func:`scipy.optimize.linprog`.
"""
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.optimize import linprog

from .errors import Infeasible, NumericalFailure, Unbounded, ValidationError

log = logging.getLogger(__name__)

RELATIONS = ("<=", "=", ">=")


@dataclass
class SdpConstraint:
    matrix: object = None  # symmetric d x d array / sparse matrix, or None
    scalars: dict = field(default_factory=dict)  # scalar index -> coefficient
    relation: str = "="
    bound: float = 0.0


@dataclass
class SdpProblem:
    dim: int
    n_scalars: int
    objective: np.ndarray
    constraints: list
    matrix_objective: object = None
    free: Sequence[int] = ()
    start: float | None = None  # initial Z = start * I


@dataclass
class SdpSolution:
    Z: np.ndarray
    scalars: np.ndarray
    objective: float
    dual_objective: float
    gap: float
    iterations: int
    y: np.ndarray  # one multiplier per constraint
    S: np.ndarray  # C - sum_k y_k F_k, evaluated exactly from y
    primal_infeasibility: float
    dual_infeasibility: float


@dataclass
class LpProblem:
    """minimize c.x s.t. A_eq x = b_eq, A_ub x <= b_ub, bounds (default x >= 0)."""

    c: np.ndarray
    A_eq: object = None
    b_eq: np.ndarray | None = None
    A_ub: object = None
    b_ub: np.ndarray | None = None
    bounds: object = (0, None)


@dataclass
class LpSolution:
    x: np.ndarray
    objective: float
    status: str
    eq_duals: np.ndarray | None
    ub_duals: np.ndarray | None
    residual: float


def _entries(F, d):
    """Nonzero entries of a symmetric d x d coefficient matrix.

    ``F`` may be a dense array, a scipy sparse matrix, or a ``(rows, cols,
    vals)`` triple listing both (i, j) and (j, i) for off-diagonal entries.
    """
    if isinstance(F, tuple):
        r, c, v = (np.asarray(t) for t in F)
        r, c, v = r.astype(int), c.astype(int), v.astype(float)
    else:
        if not sp.issparse(F):
            F = np.asarray(F, dtype=float)
            if F.shape != (d, d):
                raise ValidationError("constraint matrix has the wrong dimension")
            r, c = np.nonzero(F)
            v = F[r, c]
        else:
            if F.shape != (d, d):
                raise ValidationError("constraint matrix has the wrong dimension")
            F = sp.coo_matrix(F)
            F.sum_duplicates()
            r, c, v = F.row.astype(int), F.col.astype(int), F.data.astype(float)
    if r.size and (r.min() < 0 or c.min() < 0 or max(r.max(), c.max()) >= d):
        raise ValidationError("constraint matrix entry out of range")
    keep = v != 0
    r, c, v = r[keep], c[keep], v[keep]
    key, tkey = r * d + c, c * d + r
    o1, o2 = np.argsort(key, kind="stable"), np.argsort(tkey, kind="stable")
    if not (np.array_equal(key[o1], tkey[o2]) and np.array_equal(v[o1], v[o2])):
        raise ValidationError("constraint matrices must be symmetric")
    return r[o1], c[o1], v[o1]


class _Standard:
    """The standard-form data assembled from an :class:`SdpProblem`."""

    def __init__(self, p: SdpProblem):
        d = p.dim
        K = len(p.constraints)
        if K == 0:
            raise ValidationError("SDP needs at least one constraint")
        free = sorted(set(int(i) for i in p.free))
        obj = np.asarray(p.objective, dtype=float).reshape(-1)
        if obj.shape[0] != p.n_scalars:
            raise ValidationError("objective length must equal n_scalars")
        # LP columns: scalars, negated copies of free scalars, then slacks
        self.free = free
        cols = p.n_scalars + len(free)
        n_slack = sum(con.relation != "=" for con in p.constraints)
        L = cols + n_slack
        owner, ea, eb, ev = [], [], [], []
        brow, bcol, bval = [], [], []
        b = np.empty(K)
        slack = cols
        free_pos = {j: p.n_scalars + r for r, j in enumerate(free)}
        for k, con in enumerate(p.constraints):
            if con.relation not in RELATIONS:
                raise ValidationError(f"unknown relation {con.relation!r}")
            if con.matrix is not None:
                r, cc, v = _entries(con.matrix, d)
                if v.size:
                    owner.append(np.full(v.size, k))
                    ea.append(r)
                    eb.append(cc)
                    ev.append(v)
            for j, g in con.scalars.items():
                j = int(j)
                if not 0 <= j < p.n_scalars:
                    raise ValidationError(f"scalar index {j} out of range")
                brow.append(k)
                bcol.append(j)
                bval.append(float(g))
                if j in free_pos:
                    brow.append(k)
                    bcol.append(free_pos[j])
                    bval.append(-float(g))
            if con.relation != "=":
                brow.append(k)
                bcol.append(slack)
                bval.append(1.0 if con.relation == "<=" else -1.0)
                slack += 1
            b[k] = float(con.bound)
        # constraints sharing a PSD coefficient matrix share Schur entries
        keys = {}
        uid = np.full(K, -1)
        u_a, u_b, u_v, u_own = [], [], [], []
        for k, (a, bb, v) in enumerate(zip(ea, eb, ev)):
            key = (a.tobytes(), bb.tobytes(), v.tobytes())
            if key not in keys:
                keys[key] = len(keys)
                u_a.append(a)
                u_b.append(bb)
                u_v.append(v)
                u_own.append(np.full(a.size, keys[key]))
            uid[owner[k][0]] = keys[key]
        cat = lambda xs, dt: np.concatenate(xs).astype(dt) if xs else np.zeros(0, dt)
        self.owner = cat(owner, int)
        self.ea = cat(ea, int)
        self.eb = cat(eb, int)
        self.ev = cat(ev, float)
        self.ua, self.ub, self.uv = cat(u_a, int), cat(u_b, int), cat(u_v, float)
        nu_ = len(keys)
        uo = cat(u_own, int)
        self.UOwn = sp.csr_matrix((np.ones(uo.size), (uo, np.arange(uo.size))), shape=(nu_, uo.size))
        rows = np.nonzero(uid >= 0)[0]
        self.Expand = sp.csr_matrix((np.ones(rows.size), (rows, uid[rows])), shape=(K, nu_))
        self.B = sp.csr_matrix((bval, (brow, bcol)), shape=(K, L)).toarray()
        self.b = b
        C = np.zeros((d, d)) if p.matrix_objective is None else np.asarray(
            sp.coo_matrix(p.matrix_objective).toarray(), dtype=float)
        if C.shape != (d, d) or not np.allclose(C, C.T, rtol=0, atol=0):
            raise ValidationError("matrix objective must be symmetric d x d")
        self.C = C
        c = np.zeros(L)
        c[: p.n_scalars] = obj
        for j, pos in free_pos.items():
            c[pos] = -obj[j]
        self.c = c
        self.d, self.K, self.L = d, K, L
        self.n_scalars = p.n_scalars
        self.free_pos = free_pos

    def A(self, X):
        return np.bincount(self.owner, weights=self.ev * X[self.ea, self.eb], minlength=self.K)

    def At(self, y):
        out = np.zeros((self.d, self.d))
        np.add.at(out, (self.ea, self.eb), self.ev * y[self.owner])
        return out

    def schur(self, P, Q):
        # M_ij = tr(F_i P F_j Q), summed entrywise over the sparse F's
        a, b, v = self.ua, self.ub, self.uv
        if v.size == 0:
            return np.zeros((self.K, self.K))
        T = np.outer(v, v) * P[np.ix_(b, a)] * Q[np.ix_(a, b)]
        Mu = np.asarray(self.UOwn @ (self.UOwn @ T.T).T)
        E = self.Expand
        return np.asarray(E @ (E @ Mu).T).T

    def scalars(self, x):
        out = x[: self.n_scalars].copy()
        for j, pos in self.free_pos.items():
            out[j] -= x[pos]
        return out


def _max_step_psd(X, dX):
    try:
        Lc = np.linalg.cholesky(X)
    except np.linalg.LinAlgError:
        return 0.0
    Li = np.linalg.solve(Lc, dX)
    G = np.linalg.solve(Lc, Li.T)
    lam = np.linalg.eigvalsh((G + G.T) / 2)[0]
    return np.inf if lam >= 0 else -1.0 / lam


def _max_step_vec(x, dx):
    neg = dx < 0
    return np.inf if not neg.any() else float(np.min(-x[neg] / dx[neg]))


def solve_sdp(p: SdpProblem, tol: float = 1e-8, max_iter: int = 200) -> SdpSolution:
    """Solve ``p`` to relative duality gap and relative infeasibility below ``tol``."""
    st = _Standard(p)
    d, K, L = st.d, st.K, st.L
    N = d + L
    normb = np.linalg.norm(st.b)
    normC = np.linalg.norm(st.C) + np.linalg.norm(st.c)
    if p.start is not None:
        xi = float(p.start)
    else:
        xi = max(10.0, np.sqrt(d), d * (1 + np.max(np.abs(st.b))))
    eta = max(10.0, np.sqrt(d), normC, 1.0)
    X, x = xi * np.eye(d), xi * np.ones(L)
    S, s = eta * np.eye(d), eta * np.ones(L)
    y = np.zeros(K)

    def status():
        rp = st.b - st.A(X) - st.B @ x
        Rd = st.C - S - st.At(y)
        rd = st.c - s - st.B.T @ y
        pobj = float(np.sum(st.C * X) + st.c @ x)
        dobj = float(st.b @ y)
        pinf = np.linalg.norm(rp) / (1 + normb)
        dinf = (np.linalg.norm(Rd) + np.linalg.norm(rd)) / (1 + normC)
        gap = abs(pobj - dobj) / (1 + abs(pobj))
        return rp, Rd, rd, pobj, dobj, pinf, dinf, gap

    best = None
    failure = None
    it = 0
    for it in range(max_iter + 1):
        rp, Rd, rd, pobj, dobj, pinf, dinf, gap = status()
        log.debug("it %3d pobj %+.10e dobj %+.10e gap %.2e pinf %.2e dinf %.2e",
                  it, pobj, dobj, gap, pinf, dinf)
        merit = max(gap, pinf, dinf)
        if best is None or merit < best[0]:
            best = (merit, it, X, x, y, pobj, dobj, pinf, dinf)
        if merit <= tol or it == max_iter:
            break
        big = max(np.abs(X).max(), np.abs(S).max(), np.abs(y).max() if K else 0)
        if big > 1e12:
            if dinf <= 1e-6 and dobj > 1e10:
                raise Infeasible("primal infeasible: dual objective diverges")
            if pinf <= 1e-6 and pobj < -1e10:
                raise Unbounded("primal objective unbounded below")
            raise NumericalFailure("iterates diverged")
        try:
            X, x, y, S, s = _step(st, X, x, y, S, s, rp, Rd, rd, N, log)
        except NumericalFailure as exc:
            failure = exc
            break
    merit, it, X, x, y, pobj, dobj, pinf, dinf = best
    if merit > tol:
        if failure is not None:
            raise NumericalFailure(f"{failure} (best merit {merit:.2e} at iteration {it})")
        raise NumericalFailure(
            f"no convergence in {max_iter} iterations (gap={gap:.2e}, pinf={pinf:.2e}, dinf={dinf:.2e})")
    return SdpSolution(
        Z=X, scalars=st.scalars(x), objective=pobj, dual_objective=dobj,
        gap=abs(pobj - dobj), iterations=it, y=y, S=st.C - st.At(y),
        primal_infeasibility=pinf, dual_infeasibility=dinf,
    )


def _step(st, X, x, y, S, s, rp, Rd, rd, N, log):
    """One Mehrotra predictor-corrector step along the NT direction."""
    d, K = st.d, st.K
    mu = (np.sum(X * S) + x @ s) / N
    # Nesterov-Todd scaling: G^-1 X G^-T = G^T S G = diag(dd), W = G G^T
    try:
        Lx = np.linalg.cholesky(X)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure("primal iterate lost definiteness") from exc
    lam, Q = np.linalg.eigh(Lx.T @ S @ Lx)
    if lam[0] <= 0:
        raise NumericalFailure("dual iterate lost definiteness")
    G = Lx @ Q * lam ** -0.25
    W = G @ G.T
    Ginv = np.linalg.inv(G)
    dd = np.sqrt(lam)
    dsum = dd[:, None] + dd[None, :]
    xs = x / s
    M = st.schur(W, W) + (st.B * xs) @ st.B.T
    M = (M + M.T) / 2
    try:
        cf = sla.cho_factor(M, lower=True)
    except np.linalg.LinAlgError:
        reg = 1e-14 * max(1.0, np.abs(M).max()) * np.eye(K)
        try:
            cf = sla.cho_factor(M + reg, lower=True)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure("Schur complement is singular") from exc

    def solve(r):
        return sla.cho_solve(cf, r)

    def direction(Rc, rc):
        rhs = rp - st.A(Rc - W @ Rd @ W) - st.B @ (rc - xs * rd)
        dy = solve(rhs)
        for _ in range(2):  # iterative refinement against the true operator
            dS = Rd - st.At(dy)
            dX = Rc - W @ dS @ W
            ds = rd - st.B.T @ dy
            dx = rc - xs * ds
            e = rp - st.A(dX) - st.B @ dx
            dy = dy + solve(e)
        dS = Rd - st.At(dy)
        dX = Rc - W @ dS @ W
        dX = (dX + dX.T) / 2
        ds = rd - st.B.T @ dy
        dx = rc - xs * ds
        return dX, dx, dy, dS, ds

    def steps(dX, dx, dS, ds, frac):
        ap = min(1.0, frac * min(_max_step_psd(X, dX), _max_step_vec(x, dx)))
        ad = min(1.0, frac * min(_max_step_psd(S, dS), _max_step_vec(s, ds)))
        return ap, ad

    dX, dx, dy, dS, ds = direction(-X, -x)
    ap, ad = steps(dX, dx, dS, ds, 1.0)
    mu_aff = (np.sum((X + ap * dX) * (S + ad * dS)) + (x + ap * dx) @ (s + ad * ds)) / N
    sigma = min(1.0, max(0.0, mu_aff / mu)) ** 3
    dXt = Ginv @ dX @ Ginv.T
    dSt = G.T @ dS @ G
    corr = dXt @ dSt
    Rt = 2 * sigma * mu * np.eye(d) - 2 * np.diag(lam) - (corr + corr.T)
    Rc = G @ (Rt / dsum) @ G.T
    Rc = (Rc + Rc.T) / 2
    rc = (sigma * mu - x * s - dx * ds) / s
    dX, dx, dy, dS, ds = direction(Rc, rc)
    frac = 0.9 + 0.09 * min(ap, ad)
    ap, ad = steps(dX, dx, dS, ds, frac)
    log.debug("    sigma %.2e ap %.3f ad %.3f mu %.2e", sigma, ap, ad, mu)
    if ap == 0.0 and ad == 0.0:
        raise NumericalFailure("interior point method stalled")
    X = X + ap * dX
    X = (X + X.T) / 2
    x = x + ap * dx
    y = y + ad * dy
    S = S + ad * dS
    S = (S + S.T) / 2
    s = s + ad * ds
    return X, x, y, S, s


def solve_lp(p: LpProblem, tol: float = 1e-9) -> LpSolution:
    c = np.asarray(p.c, dtype=float)
    res = linprog(
        c, A_ub=p.A_ub, b_ub=p.b_ub, A_eq=p.A_eq, b_eq=p.b_eq, bounds=p.bounds,
        method="highs",
        options={"primal_feasibility_tolerance": tol, "dual_feasibility_tolerance": tol},
    )
    if res.status == 2:
        raise Infeasible(res.message)
    if res.status == 3:
        raise Unbounded(res.message)
    if res.status != 0:
        raise NumericalFailure(res.message)
    x = res.x
    resid = 0.0
    if p.A_eq is not None:
        resid = max(resid, float(np.max(np.abs(p.A_eq @ x - np.asarray(p.b_eq)), initial=0.0)))
    if p.A_ub is not None:
        resid = max(resid, float(np.max(p.A_ub @ x - np.asarray(p.b_ub), initial=0.0)))
    eq = None if p.A_eq is None else np.asarray(res.eqlin.marginals)
    ub = None if p.A_ub is None else np.asarray(res.ineqlin.marginals)
    return LpSolution(x=x, objective=float(res.fun), status="optimal",
                      eq_duals=eq, ub_duals=ub, residual=resid)
