"""Lifted cut matrices over the ``(n+1) x (n+1)`` matrix variable.

For every row ``a_i^T x <= b_i`` of P and every variable ``j`` the products
``(b_i - a_i^T x) x_j >= 0`` and ``(b_i - a_i^T x)(1 - x_j) >= 0`` are
linear in the lifted matrix ``X = [1; x][1, x^T]``. Together with
``X[0, j] = X[j, j]`` and ``X[0, 0] = 1`` and ``X`` PSD they describe the
set of admissible lifted matrices; the diagonal of such a matrix is a point
of the relaxation.

Indices ``i`` (row) and ``j`` (variable) are 1-based. Basis vectors of
R^{n+1} are 0-based with ``e_0`` first, so ``e_j`` is column ``j``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .core_model import Polytope, frobenius, symmetrize


class Family(enum.Enum):
    CUT3 = "cut3"  # (b_i - a_i^T x) x_j >= 0
    CUT4 = "cut4"  # (b_i - a_i^T x) (1 - x_j) >= 0
    CUT5 = "cut5"  # X e_0 = diag(X)
    CUT6 = "cut6"  # X_00 = 1


class Sense(enum.Enum):
    GE = ">="
    EQ = "="


@dataclass(frozen=True, eq=False)
class LiftedCut:
    matrix: np.ndarray
    sense: Sense
    rhs: float
    family: Family
    i: int | None = None
    j: int | None = None

    def value(self, X) -> float:
        return frobenius(self.matrix, X)

    def residual(self, X) -> float:
        """``value - rhs``; negative means violated for GE cuts."""
        return self.value(X) - self.rhs


@dataclass(frozen=True)
class CutSystem:
    n: int
    m: int
    cuts: tuple[LiftedCut, ...] = field(repr=False)

    def __len__(self):
        return len(self.cuts)

    def of_family(self, family: Family) -> list[LiftedCut]:
        return [c for c in self.cuts if c.family is family]


def _basis(n: int, j: int) -> np.ndarray:
    e = np.zeros(n + 1)
    e[j] = 1.0
    return e


def _check_row(P: Polytope, i: int):
    if not 1 <= i <= P.m:
        raise IndexError(f"row index {i} outside 1..{P.m}")


def _check_var(n: int, j: int):
    if not 1 <= j <= n:
        raise IndexError(f"variable index {j} outside 1..{n}")


def cut_vector_u(P: Polytope, i: int) -> np.ndarray:
    """``u_i = (b_i, -a_i)``."""
    _check_row(P, i)
    return np.concatenate([[P.b[i - 1]], -P.A[i - 1]])


def build_cut3(P: Polytope, i: int, j: int) -> LiftedCut:
    _check_row(P, i)
    _check_var(P.n, j)
    raw = np.outer(cut_vector_u(P, i), _basis(P.n, j))
    return LiftedCut(symmetrize(raw), Sense.GE, 0.0, Family.CUT3, i, j)


def build_cut4(P: Polytope, i: int, j: int) -> LiftedCut:
    _check_row(P, i)
    _check_var(P.n, j)
    raw = np.outer(cut_vector_u(P, i), _basis(P.n, 0) - _basis(P.n, j))
    return LiftedCut(symmetrize(raw), Sense.GE, 0.0, Family.CUT4, i, j)


def build_cut5(n: int, j: int) -> LiftedCut:
    _check_var(n, j)
    raw = np.outer(_basis(n, j), _basis(n, 0) - _basis(n, j))
    return LiftedCut(symmetrize(raw), Sense.EQ, 0.0, Family.CUT5, None, j)


def build_cut6(n: int) -> LiftedCut:
    e0 = _basis(n, 0)
    return LiftedCut(np.outer(e0, e0), Sense.EQ, 1.0, Family.CUT6)


def build_cut_system(P: Polytope) -> CutSystem:
    """All ``2mn + n + 1`` cuts.

    Order: every CUT3 with ``i`` running fastest inside fixed ``j``, the
    CUT4 family in the same order, CUT5 for ``j`` ascending, CUT6 last.
    """
    n, m = P.n, P.m
    cuts = [build_cut3(P, i, j) for j in range(1, n + 1) for i in range(1, m + 1)]
    cuts += [build_cut4(P, i, j) for j in range(1, n + 1) for i in range(1, m + 1)]
    cuts += [build_cut5(n, j) for j in range(1, n + 1)]
    cuts.append(build_cut6(n))
    return CutSystem(n, m, tuple(cuts))


@dataclass
class MembershipReport:
    violations: list[tuple[LiftedCut, float]]
    min_eigenvalue: float
    psd_violated: bool
    first_column: np.ndarray = field(repr=False)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.psd_violated


def check_membership(X, cs: CutSystem, tol: float = 1e-9) -> MembershipReport:
    """List the cuts ``X`` violates by more than ``tol`` and test PSD.

    GE cuts are violated when ``value < -tol``, EQ cuts when
    ``|value - rhs| > tol``. The eigenvalue test allows
    ``-tol * max(1, |trace X|)``.
    """
    X = np.asarray(X, dtype=float)
    if X.shape != (cs.n + 1, cs.n + 1):
        raise ValueError(f"expected order {cs.n + 1}, got shape {X.shape}")
    violations = []
    for cut in cs.cuts:
        r = cut.residual(X)
        bad = r < -tol if cut.sense is Sense.GE else abs(r) > tol
        if bad:
            violations.append((cut, r))
    lam = float(np.linalg.eigvalsh(0.5 * (X + X.T))[0])
    psd_bad = lam < -tol * max(1.0, abs(float(np.trace(X))))
    return MembershipReport(violations, lam, psd_bad, X[1:, 0].copy())


def project(X) -> np.ndarray:
    """Read the candidate point off the diagonal of ``X``."""
    X = np.asarray(X, dtype=float)
    return np.diag(X)[1:].copy()
