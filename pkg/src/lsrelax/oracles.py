"""Ground-truth bounds and the containment check between them.

Three values are compared for one 0-1 program:

* ``v_bip`` -- exact optimum by enumerating ``{0, 1}^n``,
* ``v_lp``  -- the LP relaxation, solved as an all-diagonal SDP,
* ``v_ls``  -- the lifted semidefinite relaxation.

Since the integer hull sits inside the lifted relaxation which sits inside
the LP polytope, ``v_bip <= v_ls <= v_lp`` must hold up to solver tolerance.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .core_model import BipInstance, augment_with_bounds
from .lifting import build_cut_system
from .sdp_solver import SolveResult, SolverOptions, Status, solve
from .standard_form import (SdpProblem, SolutionDecomposition, decompose_solution,
                            lp_as_diagonal_sdp, recover_bip_objective, to_standard_form)

MAX_ENUMERATION_VARS = 24
FEASIBILITY_TOL = 1e-9
SANDWICH_TOL = 1e-5


class Infeasible:
    """Marker returned when no binary point satisfies the rows."""

    def __repr__(self):
        return "Infeasible"


INFEASIBLE = Infeasible()


def brute_force_bip(inst: BipInstance, chunk: int = 1 << 14):
    """Enumerate ``{0,1}^n``; return ``(value, maximizers)`` or ``INFEASIBLE``.

    A point is feasible when ``a_i^T x <= b_i + 1e-9`` for every user row.
    Maximizers are listed in lexicographic order of ``x``.
    """
    n = inst.n
    if n > MAX_ENUMERATION_VARS:
        raise ValueError(f"refusing to enumerate 2^{n} points (limit n <= {MAX_ENUMERATION_VARS})")
    best = None
    argmax: list[tuple[int, ...]] = []
    bits = 1 << np.arange(n - 1, -1, -1)
    for start in range(0, 1 << n, chunk):
        codes = np.arange(start, min(start + chunk, 1 << n))
        pts = ((codes[:, None] & bits) > 0).astype(float)
        ok = np.all(pts @ inst.A.T <= inst.b + FEASIBILITY_TOL, axis=1)
        if not np.any(ok):
            continue
        pts = pts[ok]
        vals = pts @ inst.c
        top = vals.max()
        if best is None or top > best + 1e-12:
            best, argmax = top, []
        if abs(top - best) <= 1e-12:
            argmax += [tuple(int(v) for v in p) for p in pts[np.abs(vals - best) <= 1e-12]]
    if best is None:
        return INFEASIBLE
    return float(best), argmax


@dataclass
class LpResult:
    value: float | None
    result: SolveResult
    problem: SdpProblem


def lp_bound(inst: BipInstance, opts: SolverOptions | None = None,
             bounds: bool = True) -> LpResult:
    P = augment_with_bounds(inst, bounds)
    prob = lp_as_diagonal_sdp(P, inst.c)
    res = solve(prob, opts)
    value = recover_bip_objective(res.primal_obj) if res.optimal else None
    return LpResult(value, res, prob)


@dataclass
class LsResult:
    value: float | None
    result: SolveResult
    decomposition: SolutionDecomposition
    problem: SdpProblem


def ls_bound(inst: BipInstance, opts: SolverOptions | None = None,
             bounds: bool = True) -> LsResult:
    P = augment_with_bounds(inst, bounds)
    prob = to_standard_form(build_cut_system(P), inst.c)
    res = solve(prob, opts)
    value = recover_bip_objective(res.primal_obj) if res.optimal else None
    return LsResult(value, res, decompose_solution(prob, res.X), prob)


@dataclass
class BoundsReport:
    n: int
    m: int
    nbar: int
    v_bip: float | None
    bip_argmax: list[tuple[int, ...]]
    v_lp: float | None
    lp_status: Status
    lp_iterations: int
    v_ls: float | None
    ls_status: Status
    ls_iterations: int
    seed: int | None = None
    tol: float = SANDWICH_TOL
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def bip_feasible(self) -> bool:
        return self.v_bip is not None

    @property
    def clean(self) -> bool:
        return self.lp_status is Status.OPTIMAL and self.ls_status is Status.OPTIMAL

    @property
    def gaps(self) -> tuple[float | None, float | None, float | None]:
        """``(v_lp - v_bip, v_lp - v_ls, v_ls - v_bip)``."""
        def diff(a, b):
            return None if a is None or b is None else a - b
        return (diff(self.v_lp, self.v_bip), diff(self.v_lp, self.v_ls),
                diff(self.v_ls, self.v_bip))

    @property
    def violation(self) -> bool:
        """True only when clean statuses contradict the containment chain."""
        if not self.clean:
            return False
        if self.v_ls > self.v_lp + self.tol:
            return True
        return self.bip_feasible and self.v_ls < self.v_bip - self.tol


def sandwich_check(inst: BipInstance, opts: SolverOptions | None = None,
                   seed: int | None = None, bounds: bool = True,
                   tol: float = SANDWICH_TOL) -> BoundsReport:
    t0 = time.perf_counter()
    bip = brute_force_bip(inst)
    t1 = time.perf_counter()
    lp = lp_bound(inst, opts, bounds)
    t2 = time.perf_counter()
    ls = ls_bound(inst, opts, bounds)
    t3 = time.perf_counter()
    v_bip, argmax = (None, []) if bip is INFEASIBLE else bip
    return BoundsReport(
        n=inst.n, m=ls.problem.m, nbar=ls.problem.nbar,
        v_bip=v_bip, bip_argmax=argmax,
        v_lp=lp.value, lp_status=lp.result.status, lp_iterations=lp.result.iterations,
        v_ls=ls.value, ls_status=ls.result.status, ls_iterations=ls.result.iterations,
        seed=seed, tol=tol,
        timings={"bip": t1 - t0, "lp": t2 - t1, "ls": t3 - t2},
    )


def random_instance(seed: int, n: int | None = None, m_user: int | None = None,
                    max_n: int = 6, max_m: int = 4) -> BipInstance:
    """Integer data: coefficients in [-5, 5], right-hand sides in [-3, 5n].

    Unset dimensions are drawn uniformly from ``1..max_n`` and ``0..max_m``.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, max_n + 1)) if n is None else n
    m_user = int(rng.integers(0, max_m + 1)) if m_user is None else m_user
    c = rng.integers(-5, 6, n)
    A = rng.integers(-5, 6, (m_user, n))
    b = rng.integers(-3, 5 * n + 1, m_user)
    return BipInstance(c, A, b)


def random_suite(count: int = 100, seed: int = 0) -> list[tuple[int, BipInstance]]:
    """``count`` instances, instance ``k`` generated from seed ``seed + k``."""
    return [(seed + k, random_instance(seed + k)) for k in range(count)]


def binary_feasible_points(inst: BipInstance, tol: float = FEASIBILITY_TOL) -> list[np.ndarray]:
    pts = []
    for bits in itertools.product((0.0, 1.0), repeat=inst.n):
        x = np.array(bits)
        if np.all(inst.A @ x <= inst.b + tol):
            pts.append(x)
    return pts


# Fixtures used across tests, the CLI and the acceptance suite.

def half_instance() -> BipInstance:
    """``max x  s.t.  x <= 0.5``."""
    return BipInstance([1.0], [[1.0]], [0.5])


def triangle_instance() -> BipInstance:
    """Stable sets of the triangle: ``max sum x  s.t.  x_i + x_j <= 1``."""
    return BipInstance([1.0, 1.0, 1.0],
                       [[1, 1, 0], [1, 0, 1], [0, 1, 1]], [1.0, 1.0, 1.0])
