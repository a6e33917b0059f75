"""Invariant checks for a single instance, shared by the CLI and the tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_model import BipInstance, augment_with_bounds, frobenius, lift_point, symmetrize
from .formats import emit_sdpa, parse_sdpa
from .lifting import Family, build_cut_system, check_membership, project
from .oracles import binary_feasible_points, sandwich_check, ls_bound
from .sdp_solver import SolverOptions, kkt_report
from .standard_form import (all_surplus_positions, check_symmetric, equality_residuals,
                            lift_and_assemble, to_standard_form)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


def symmetrization_pairs(count: int, seed: int, max_order: int = 8) -> float:
    """Worst relative gap between ``A . X`` and ``sym(A) . X`` over random pairs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        k = int(rng.integers(1, max_order + 1))
        A = rng.normal(size=(k, k))
        X = symmetrize(rng.normal(size=(k, k)))
        v = frobenius(A, X)
        worst = max(worst, abs(v - frobenius(symmetrize(A), X)) / (1 + abs(v)))
    return worst


def run_checks(inst: BipInstance, opts: SolverOptions | None = None, seed: int = 0,
               bounds: bool = True) -> list[CheckResult]:
    opts = opts or SolverOptions()
    out: list[CheckResult] = []
    P = augment_with_bounds(inst, bounds)
    cs = build_cut_system(P)
    prob = to_standard_form(cs, inst.c)
    n, m = P.n, P.m
    expected = 2 * m * n + n + 1

    worst = symmetrization_pairs(1000, seed)
    out.append(CheckResult("symmetrization preserves inner products", worst <= 1e-12,
                           f"worst relative gap {worst:.1e}"))

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        x = rng.random(n)
        X = lift_point(x)
        for cut in cs.cuts:
            if cut.family not in (Family.CUT3, Family.CUT4):
                continue
            a, bi = P.A[cut.i - 1], P.b[cut.i - 1]
            want = (bi - a @ x) * (x[cut.j - 1] if cut.family is Family.CUT3 else 1 - x[cut.j - 1])
            worst = max(worst, abs(cut.value(X) - want) / (1 + abs(want)))
    out.append(CheckResult("lifted cuts reproduce product inequalities", worst <= 1e-12,
                           f"worst relative error {worst:.1e}"))

    ok_dims = (len(cs) == expected and prob.nbar == expected
               and prob.num_constraints == expected
               and sorted(all_surplus_positions(n, m)) == list(range(n + 1, expected)))
    out.append(CheckResult("dimension identities", ok_dims, f"nbar={prob.nbar}"))
    out.append(CheckResult("emitted matrices symmetric", check_symmetric(prob)))

    pts = binary_feasible_points(inst)
    bad = 0
    for x in pts:
        if not check_membership(lift_point(x), cs, 1e-12).ok:
            bad += 1
        elif np.max(np.abs(equality_residuals(prob, lift_and_assemble(prob, x))), initial=0) > 1e-12:
            bad += 1
    out.append(CheckResult("binary feasible points lift feasibly", bad == 0,
                           f"{len(pts)} points, {bad} failures"))

    out.append(CheckResult("SDPA round trip", parse_sdpa(emit_sdpa(prob)).same_data(prob)))

    ls = ls_bound(inst, opts, bounds)
    if ls.result.optimal:
        k = kkt_report(ls.problem, ls.result)
        out.append(CheckResult("solver certificate", k.within(1e-6, 1e-6),
                               f"p={k.primal_residual:.1e} d={k.dual_residual:.1e} "
                               f"gap={k.gap:.1e}"))
        rep = check_membership(ls.decomposition.X, cs, 1e-5)
        x = project(ls.decomposition.X)
        inside = P.contains(x, 1e-5)
        if bounds:
            inside = inside and bool(np.all((x >= -1e-5) & (x <= 1 + 1e-5)))
        out.append(CheckResult("relaxation optimum is a member and projects into P",
                               rep.ok and inside, f"{len(rep.violations)} violated cuts"))
    else:
        out.append(CheckResult("solver certificate", True, f"skipped, status {ls.result.status.value}"))

    report = sandwich_check(inst, opts, seed=seed, bounds=bounds)
    out.append(CheckResult("bound sandwich", not report.violation,
                           f"bip={report.v_bip} ls={report.v_ls} lp={report.v_lp}"))
    return out
