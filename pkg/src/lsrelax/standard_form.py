"""Canonical primal-form SDP over a dense block plus a diagonal block.

The lifted cut system becomes::

    minimize    Cbar . Xbar
    subject to  A_k . Xbar = b_k,   k = 1..2mn+n+1
                Xbar PSD

with ``Xbar = Diag(X, Diag(vec S), Diag(vec Sbar))``. ``X`` is the dense
``(n+1) x (n+1)`` block, ``S`` and ``Sbar`` are ``m x n`` surplus matrices
for the two product-cut families, vectorised column-major. The diagonal
part is stored as a vector, so PSD of ``Xbar`` means "dense block PSD and
diagonal entries nonnegative".
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core_model import Polytope, frobenius, lift_point, symmetrize
from .lifting import CutSystem, Family, project

KIND_LS = "ls"
KIND_LP = "lp"
KIND_GENERIC = "generic"


@dataclass(frozen=True)
class BlockStructure:
    dense_block_order: int
    surplus_count: int

    @property
    def total_order(self) -> int:
        return self.dense_block_order + self.surplus_count


@dataclass(eq=False)
class BlockMatrix:
    """Symmetric dense block followed by a diagonal block."""

    dense: np.ndarray
    diag: np.ndarray

    def __post_init__(self):
        self.dense = np.asarray(self.dense, dtype=float).reshape(
            len(self.dense), len(self.dense))
        self.diag = np.asarray(self.diag, dtype=float).reshape(-1)

    @property
    def order(self) -> int:
        return self.dense.shape[0] + self.diag.size

    def to_full(self) -> np.ndarray:
        d = self.dense.shape[0]
        out = np.zeros((self.order, self.order))
        out[:d, :d] = self.dense
        out[d:, d:] = np.diag(self.diag)
        return out

    def inner(self, other: "BlockMatrix") -> float:
        return float(np.sum(self.dense * other.dense) + self.diag @ other.diag)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.dense ** 2) + np.sum(self.diag ** 2)))

    def min_eigenvalue(self) -> float:
        vals = []
        if self.dense.size:
            vals.append(np.linalg.eigvalsh(self.dense)[0])
        if self.diag.size:
            vals.append(self.diag.min())
        return float(min(vals)) if vals else 0.0

    def copy(self) -> "BlockMatrix":
        return BlockMatrix(self.dense.copy(), self.diag.copy())


@dataclass(eq=False)
class SdpProblem:
    """``min C . X  s.t.  A_k . X = b_k,  X PSD`` in block form.

    ``A_dense`` has shape ``(K, d, d)`` and ``A_diag`` shape ``(K, s)``.
    ``tags`` label each constraint, e.g. ``("cut3", i, j)`` or
    ``("row", i, None)``. ``n`` and ``m`` are the dimensions of the source
    problem (``m`` counts the rows of P, bounds included).
    """

    C: BlockMatrix
    A_dense: np.ndarray
    A_diag: np.ndarray
    b: np.ndarray
    tags: tuple = ()
    n: int = 0
    m: int = 0
    kind: str = KIND_GENERIC
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        d = self.C.dense.shape[0]
        s = self.C.diag.size
        K = len(self.b)
        self.b = np.asarray(self.b, dtype=float).reshape(-1)
        self.A_dense = np.asarray(self.A_dense, dtype=float).reshape(K, d, d)
        self.A_diag = np.asarray(self.A_diag, dtype=float).reshape(K, s)
        if not self.tags:
            self.tags = tuple(("con", k + 1, None) for k in range(K))
        if len(self.tags) != K:
            raise ValueError("one tag per constraint required")

    @property
    def blocks(self) -> BlockStructure:
        return BlockStructure(self.C.dense.shape[0], self.C.diag.size)

    @property
    def nbar(self) -> int:
        return self.blocks.total_order

    @property
    def num_constraints(self) -> int:
        return self.b.size

    def constraint(self, k: int) -> BlockMatrix:
        return BlockMatrix(self.A_dense[k], self.A_diag[k])

    def apply(self, X: BlockMatrix) -> np.ndarray:
        """The vector ``(A_k . X)_k``."""
        return (np.einsum("kij,ij->k", self.A_dense, X.dense)
                + self.A_diag @ X.diag)

    def adjoint(self, y) -> BlockMatrix:
        """``sum_k y_k A_k``."""
        y = np.asarray(y, dtype=float)
        return BlockMatrix(np.einsum("k,kij->ij", y, self.A_dense), y @ self.A_diag)

    def same_data(self, other: "SdpProblem") -> bool:
        """Structure and values identical, bit for bit."""
        return (self.blocks == other.blocks
                and self.num_constraints == other.num_constraints
                and np.array_equal(self.C.dense, other.C.dense)
                and np.array_equal(self.C.diag, other.C.diag)
                and np.array_equal(self.A_dense, other.A_dense)
                and np.array_equal(self.A_diag, other.A_diag)
                and np.array_equal(self.b, other.b))


@dataclass
class SolutionDecomposition:
    x: np.ndarray
    X: np.ndarray
    S: np.ndarray
    Sbar: np.ndarray
    objective: float


def surplus_position(i: int, j: int, family: Family, n: int, m: int) -> int:
    """0-based diagonal index in ``Xbar`` of the surplus for cut ``(i, j)``.

    CUT3 -> ``n + m(j-1) + i``; CUT4 -> ``n + mn + m(j-1) + i``.
    """
    if not (1 <= i <= m and 1 <= j <= n):
        raise IndexError(f"(i, j) = ({i}, {j}) outside 1..{m} x 1..{n}")
    base = n + m * (j - 1) + i
    if family is Family.CUT3:
        return base
    if family is Family.CUT4:
        return base + m * n
    raise ValueError(f"{family} has no surplus variable")


def objective_block(n: int, c) -> np.ndarray:
    """Dense cost block ``-sym(e_0 [0, c^T])``."""
    c = np.asarray(c, dtype=float).reshape(-1)
    if c.size != n:
        raise ValueError(f"objective has length {c.size}, expected {n}")
    raw = np.zeros((n + 1, n + 1))
    raw[0, 1:] = c
    return -symmetrize(raw)


def to_standard_form(cs: CutSystem, c) -> SdpProblem:
    n, m = cs.n, cs.m
    d, s = n + 1, 2 * m * n
    K = len(cs.cuts)
    A_dense = np.zeros((K, d, d))
    A_diag = np.zeros((K, s))
    b = np.zeros(K)
    tags = []
    for k, cut in enumerate(cs.cuts):
        A_dense[k] = cut.matrix
        b[k] = cut.rhs
        if cut.family in (Family.CUT3, Family.CUT4):
            A_diag[k, surplus_position(cut.i, cut.j, cut.family, n, m) - d] = -1.0
        tags.append((cut.family.value, cut.i, cut.j))
    C = BlockMatrix(objective_block(n, c), np.zeros(s))
    return SdpProblem(C, A_dense, A_diag, b, tuple(tags), n, m, KIND_LS)


def objective_value(prob: SdpProblem, Xbar: BlockMatrix) -> float:
    return prob.C.inner(Xbar)


def recover_bip_objective(v: float) -> float:
    """Map the minimised SDP value back to the maximised 0-1 objective."""
    return -v


def assemble(prob: SdpProblem, X, S=None, Sbar=None) -> BlockMatrix:
    """Build ``Xbar`` from a dense block and the surplus matrices.

    With ``S``/``Sbar`` omitted each surplus is set to its cut's value at
    ``X``, which satisfies every product-cut equality exactly.
    """
    X = np.asarray(X, dtype=float)
    m, n = prob.m, prob.n
    if S is None or Sbar is None:
        vals = np.einsum("kij,ij->k", prob.A_dense[:2 * m * n], X)
        diag = vals
    else:
        diag = np.concatenate([np.asarray(S, float).reshape(-1, order="F"),
                               np.asarray(Sbar, float).reshape(-1, order="F")])
    return BlockMatrix(X, diag)


def lift_and_assemble(prob: SdpProblem, x) -> BlockMatrix:
    return assemble(prob, lift_point(x))


def decompose_solution(prob: SdpProblem, Xbar: BlockMatrix) -> SolutionDecomposition:
    if prob.kind != KIND_LS:
        raise ValueError("decomposition needs a lifted relaxation problem")
    if Xbar.order != prob.nbar or Xbar.dense.shape[0] != prob.n + 1:
        raise ValueError(f"expected order {prob.nbar}, got {Xbar.order}")
    m, n = prob.m, prob.n
    S = Xbar.diag[:m * n].reshape((m, n), order="F").copy()
    Sbar = Xbar.diag[m * n:].reshape((m, n), order="F").copy()
    X = Xbar.dense.copy()
    return SolutionDecomposition(project(X), X, S, Sbar, objective_value(prob, Xbar))


def lp_as_diagonal_sdp(P: Polytope, c) -> SdpProblem:
    """LP relaxation ``max c^T x, Ax <= b, x >= 0`` as an all-diagonal SDP.

    Row ``i`` becomes ``a_i^T x + t_i = b_i`` with a slack ``t_i >= 0``;
    the diagonal variable is ``(x, t)`` and the cost ``(-c, 0)``.
    """
    c = np.asarray(c, dtype=float).reshape(-1)
    n, m = P.n, P.m
    A_diag = np.hstack([P.A, np.eye(m)])
    C = BlockMatrix(np.zeros((0, 0)), np.concatenate([-c, np.zeros(m)]))
    tags = tuple(("row", i + 1, None) for i in range(m))
    return SdpProblem(C, np.zeros((m, 0, 0)), A_diag, P.b.copy(), tags, n, m, KIND_LP)


def lp_point(prob: SdpProblem, Xbar: BlockMatrix) -> np.ndarray:
    return Xbar.diag[:prob.n].copy()


def densify(prob: SdpProblem) -> SdpProblem:
    """Same problem with every block merged into one dense block."""
    K = prob.num_constraints
    N = prob.nbar
    A_full = np.stack([prob.constraint(k).to_full() for k in range(K)]) if K else np.zeros((0, N, N))
    C = BlockMatrix(prob.C.to_full(), np.zeros(0))
    return SdpProblem(C, A_full, np.zeros((K, 0)), prob.b.copy(), prob.tags,
                      prob.n, prob.m, KIND_GENERIC, dict(prob.meta))


def all_surplus_positions(n: int, m: int) -> list[int]:
    return [surplus_position(i, j, f, n, m)
            for f in (Family.CUT3, Family.CUT4)
            for j in range(1, n + 1) for i in range(1, m + 1)]


def check_symmetric(prob: SdpProblem) -> bool:
    mats = [prob.C.dense] + list(prob.A_dense)
    return all(np.array_equal(M, M.T) for M in mats)


def equality_residuals(prob: SdpProblem, Xbar: BlockMatrix) -> np.ndarray:
    """``A_k . Xbar - b_k`` evaluated on full matrices."""
    F = Xbar.to_full()
    return np.array([frobenius(prob.constraint(k).to_full(), F) - prob.b[k]
                     for k in range(prob.num_constraints)])
