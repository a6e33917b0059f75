"""Primal-dual path-following interior-point method for block SDPs.

Solves the pair::

    minimize  C . X            maximize  b^T y
    s.t.      A_k . X = b_k    s.t.      sum_k y_k A_k + Z = C
              X PSD                      Z PSD

for a dense block plus a diagonal block. Infeasible start, HKM search
direction, Mehrotra predictor-corrector. The Schur complement is assembled
as a Gram matrix ``G G^T`` so it is symmetric positive semidefinite by
construction and factored by Cholesky.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg as sla

from .standard_form import BlockMatrix, SdpProblem, densify

logger = logging.getLogger(__name__)


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    MAX_ITERATIONS = "MaxIterations"
    NUMERICAL_FAILURE = "NumericalFailure"
    SUSPECTED_INFEASIBLE = "SuspectedInfeasible"
    SUSPECTED_UNBOUNDED = "SuspectedUnbounded"


@dataclass
class SolverOptions:
    gap_tol: float = 1e-7
    feas_tol: float = 1e-7
    max_iterations: int = 200
    step_fraction: float = 0.98
    initial_scale: float | None = None
    predictor_corrector: bool = True
    dense_debug: bool = False
    # heuristic certificate thresholds
    infeasibility_tol: float = 1e-8
    stall_iterations: int = 30

    def __post_init__(self):
        if self.gap_tol <= 0 or self.feas_tol <= 0:
            raise ValueError("tolerances must be positive")
        if not 0 < self.step_fraction < 1:
            raise ValueError("step_fraction must lie in (0, 1)")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass
class IterationRecord:
    iteration: int
    primal_residual: float
    dual_residual: float
    gap: float
    primal_obj: float
    dual_obj: float
    mu: float


@dataclass
class SolveResult:
    X: BlockMatrix
    y: np.ndarray
    Z: BlockMatrix
    primal_obj: float
    dual_obj: float
    gap: float
    status: Status
    iterations: int
    residual_log: list[IterationRecord] = field(default_factory=list, repr=False)

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


@dataclass
class KktReport:
    primal_residual: float
    dual_residual: float
    gap: float
    min_eig_X: float
    min_eig_Z: float

    def within(self, feas_tol: float, gap_tol: float, eig_tol: float = 1e-9) -> bool:
        return (self.primal_residual <= feas_tol and self.dual_residual <= feas_tol
                and self.gap <= gap_tol and self.min_eig_X >= -eig_tol
                and self.min_eig_Z >= -eig_tol)


def kkt_report(prob: SdpProblem, result: SolveResult) -> KktReport:
    """Relative KKT residuals recomputed on full ``nbar x nbar`` matrices."""
    N = prob.nbar
    X = result.X.to_full()
    Z = result.Z.to_full()
    y = np.asarray(result.y, dtype=float)
    if X.shape != (N, N) or Z.shape != (N, N) or y.size != prob.num_constraints:
        raise ValueError("result does not match the problem dimensions")
    C = prob.C.to_full()
    A = [prob.constraint(k).to_full() for k in range(prob.num_constraints)]
    AX = np.array([np.sum(Ak * X) for Ak in A])
    Aty = sum((yk * Ak for yk, Ak in zip(y, A)), np.zeros((N, N)))
    pobj = float(np.sum(C * X))
    dobj = float(prob.b @ y)
    return KktReport(
        primal_residual=float(np.linalg.norm(AX - prob.b) / (1 + np.linalg.norm(prob.b))),
        dual_residual=float(np.linalg.norm(Aty + Z - C) / (1 + np.linalg.norm(C))),
        gap=abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj)),
        min_eig_X=float(np.linalg.eigvalsh(X)[0]) if N else 0.0,
        min_eig_Z=float(np.linalg.eigvalsh(Z)[0]) if N else 0.0,
    )


def _max_step_dense(X: np.ndarray, dX: np.ndarray) -> float:
    if X.size == 0:
        return np.inf
    L = np.linalg.cholesky(X)
    W = sla.solve_triangular(L, dX, lower=True)
    W = sla.solve_triangular(L, W.T, lower=True)
    lam = np.linalg.eigvalsh(0.5 * (W + W.T))[0]
    return np.inf if lam >= 0 else -1.0 / lam


def _max_step_diag(x: np.ndarray, dx: np.ndarray) -> float:
    neg = dx < 0
    if not np.any(neg):
        return np.inf
    return float(np.min(-x[neg] / dx[neg]))


def _max_step(X: BlockMatrix, dX: BlockMatrix) -> float:
    return min(_max_step_dense(X.dense, dX.dense), _max_step_diag(X.diag, dX.diag))


class _Schur:
    """Cholesky factor of ``M_kl = A_k . (X A_l Z^-1)``."""

    def __init__(self, prob: SdpProblem, X: BlockMatrix, Zinv: np.ndarray, zdiag: np.ndarray):
        K = prob.num_constraints
        parts = []
        if X.dense.size:
            Lx = np.linalg.cholesky(X.dense)
            Lz = np.linalg.cholesky(Zinv)
            G = (Lz.T @ prob.A_dense) @ Lx
            parts.append(G.reshape(K, -1))
        if X.diag.size:
            parts.append(prob.A_diag * np.sqrt(X.diag / zdiag))
        G = np.hstack(parts) if parts else np.zeros((K, 0))
        self.M = G @ G.T
        self.regularized = False

    def factor(self):
        # Jacobi scaling to unit diagonal; the shift below is thus relative
        dg = np.diag(self.M).copy()
        dg[dg <= 0] = 1.0
        self.scale = 1.0 / np.sqrt(dg)
        Ms = self.M * np.outer(self.scale, self.scale)
        self.Ms = Ms
        self.cho = self.eig = None
        try:
            self.cho = sla.cho_factor(Ms, lower=True)
            return
        except np.linalg.LinAlgError:
            self.regularized = True
        try:
            self.cho = sla.cho_factor(Ms + 1e-12 * np.eye(len(Ms)), lower=True)
            return
        except np.linalg.LinAlgError:
            pass
        # degenerate end game: truncated eigen-solve
        w, V = np.linalg.eigh(Ms)
        keep = w > 1e-14 * max(w[-1], 1.0)
        if not np.any(keep):
            raise np.linalg.LinAlgError("Schur complement is numerically zero")
        self.eig = (w[keep], V[:, keep])

    def _raw_solve(self, r):
        if self.cho is not None:
            return sla.cho_solve(self.cho, r)
        w, V = self.eig
        return V @ ((V.T @ r) / w)

    def solve(self, r: np.ndarray) -> np.ndarray:
        rs = self.scale * r
        z = self._raw_solve(rs)
        if self.regularized:
            for _ in range(2):
                z = z + self._raw_solve(rs - self.Ms @ z)
        return self.scale * z


def _initial_scale(prob: SdpProblem) -> float:
    normA = max((prob.constraint(k).norm() for k in range(prob.num_constraints)), default=0.0)
    normb = float(np.max(np.abs(prob.b))) if prob.b.size else 0.0
    return 1.0 + max(prob.C.norm(), normA, normb)


def solve(prob: SdpProblem, opts: SolverOptions | None = None) -> SolveResult:
    """Run the interior-point method; deterministic for fixed inputs."""
    opts = opts or SolverOptions()
    if opts.dense_debug:
        return solve(densify(prob), replace(opts, dense_debug=False))

    d = prob.blocks.dense_block_order
    s = prob.blocks.surplus_count
    N = d + s
    K = prob.num_constraints
    b, C = prob.b, prob.C
    normb = float(np.linalg.norm(b))
    normC = C.norm()

    beta = opts.initial_scale or _initial_scale(prob)
    X = BlockMatrix(beta * np.eye(d), beta * np.ones(s))
    Z = BlockMatrix(beta * np.eye(d), beta * np.ones(s))
    y = np.zeros(K)

    log: list[IterationRecord] = []
    status = Status.MAX_ITERATIONS
    best_merit = np.inf
    stall = 0
    it = 0

    def finish(st):
        pobj = C.inner(X)
        dobj = float(b @ y)
        return SolveResult(X, y, Z, pobj, dobj, pobj - dobj, st, it, log)

    for it in range(opts.max_iterations + 1):
        Rp = b - prob.apply(X)
        Aty = prob.adjoint(y)
        Rd = BlockMatrix(C.dense - Z.dense - Aty.dense, C.diag - Z.diag - Aty.diag)
        pobj = C.inner(X)
        dobj = float(b @ y)
        relp = float(np.linalg.norm(Rp)) / (1 + normb)
        reld = Rd.norm() / (1 + normC)
        relgap = abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj))
        mu = X.inner(Z) / N if N else 0.0
        log.append(IterationRecord(it, relp, reld, relgap, pobj, dobj, mu))
        logger.debug("it %3d  p %.2e  d %.2e  gap %.2e  pobj % .8e  dobj % .8e",
                     it, relp, reld, relgap, pobj, dobj)

        if relp <= opts.feas_tol and reld <= opts.feas_tol and relgap <= opts.gap_tol:
            return finish(Status.OPTIMAL)

        # Farkas-type rays: y/(b^T y) certifies primal infeasibility as
        # sum y_k A_k + Z stays bounded; X/(-C.X) certifies unboundedness.
        if dobj > 0 and np.linalg.norm(Aty.to_full() + Z.to_full()) <= opts.infeasibility_tol * dobj:
            return finish(Status.SUSPECTED_INFEASIBLE)
        if pobj < 0 and float(np.linalg.norm(prob.apply(X))) <= opts.infeasibility_tol * -pobj:
            return finish(Status.SUSPECTED_UNBOUNDED)

        merit = max(relp, reld, relgap)
        if merit < 0.99 * best_merit:
            best_merit = merit
            stall = 0
        else:
            stall += 1
        if stall >= opts.stall_iterations:
            if np.linalg.norm(y) > 1e6 * (1 + normC + normb):
                return finish(Status.SUSPECTED_INFEASIBLE)
            if X.norm() > 1e8 * (1 + normC + normb):
                return finish(Status.SUSPECTED_UNBOUNDED)
        if it == opts.max_iterations:
            break

        try:
            Lz = np.linalg.cholesky(Z.dense) if d else np.zeros((0, 0))
            Zinv = sla.cho_solve((Lz, True), np.eye(d)) if d else np.zeros((0, 0))
            Zinv = 0.5 * (Zinv + Zinv.T)
            schur = _Schur(prob, X, Zinv, Z.diag)
            schur.factor()
        except np.linalg.LinAlgError:
            return finish(Status.NUMERICAL_FAILURE)

        XRdZi = X.dense @ Rd.dense @ Zinv
        xrdz = X.diag * Rd.diag / Z.diag

        def direction(sigma_mu, corr_dense, corr_diag):
            Gd = sigma_mu * Zinv - X.dense - corr_dense @ Zinv
            gd = sigma_mu / Z.diag - X.diag - corr_diag / Z.diag
            G = BlockMatrix(0.5 * (Gd + Gd.T), gd)
            XR = BlockMatrix(0.5 * (XRdZi + XRdZi.T), xrdz)
            rhs = Rp - prob.apply(G) + prob.apply(XR)
            dy = schur.solve(rhs)
            AtDy = prob.adjoint(dy)
            dZ = BlockMatrix(Rd.dense - AtDy.dense, Rd.diag - AtDy.diag)
            dXd = Gd - X.dense @ dZ.dense @ Zinv
            dX = BlockMatrix(0.5 * (dXd + dXd.T), gd - X.diag * dZ.diag / Z.diag)
            return dX, dy, dZ

        zero_d = np.zeros((d, d))
        zero_s = np.zeros(s)
        try:
            if opts.predictor_corrector:
                dX, dy, dZ = direction(0.0, zero_d, zero_s)
                ap = min(1.0, opts.step_fraction * _max_step(X, dX))
                ad = min(1.0, opts.step_fraction * _max_step(Z, dZ))
                mu_aff = BlockMatrix(X.dense + ap * dX.dense, X.diag + ap * dX.diag).inner(
                    BlockMatrix(Z.dense + ad * dZ.dense, Z.diag + ad * dZ.diag)) / N
                expon = max(1.0, 3.0 * min(ap, ad) ** 2)
                sigma = min(1.0, max(0.0, mu_aff / mu)) ** expon
                dX, dy, dZ = direction(sigma * mu, dX.dense @ dZ.dense, dX.diag * dZ.diag)
            else:
                dX, dy, dZ = direction(0.1 * mu, zero_d, zero_s)
            ap = min(1.0, opts.step_fraction * _max_step(X, dX))
            ad = min(1.0, opts.step_fraction * _max_step(Z, dZ))
        except np.linalg.LinAlgError:
            return finish(Status.NUMERICAL_FAILURE)
        if not (np.isfinite(ap) and np.isfinite(ad)) or max(ap, ad) < 1e-12:
            return finish(Status.NUMERICAL_FAILURE)

        Xd = X.dense + ap * dX.dense
        Zd = Z.dense + ad * dZ.dense
        X = BlockMatrix(0.5 * (Xd + Xd.T), X.diag + ap * dX.diag)
        Z = BlockMatrix(0.5 * (Zd + Zd.T), Z.diag + ad * dZ.diag)
        y = y + ad * dy

    return finish(status)

