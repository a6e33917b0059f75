"""Problem data for 0-1 programs and the elementary matrix operations.

A binary program here is always in maximisation form::

    maximize    c^T x
    subject to  a_i^T x <= b_i,   i = 1..m_user
                x in {0, 1}^n

Symmetric matrices are plain ``numpy`` arrays; functions that require
symmetry check it rather than wrapping the array in a class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

USER = "user"
LOWER = "lower"
UPPER = "upper"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BipInstance:
    """Objective ``c`` and user inequalities ``A x <= b`` of a 0-1 program."""

    c: np.ndarray
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).reshape(-1)
        n = c.size
        if n < 1:
            raise ValueError("a binary program needs at least one variable")
        A = np.asarray(self.A, dtype=float)
        if A.size == 0:
            A = np.zeros((0, n))
        A = A.reshape(-1, n) if A.ndim == 1 else A
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if A.shape != (b.size, n):
            raise ValueError(
                f"constraint matrix has shape {A.shape}, expected ({b.size}, {n})")
        for name, arr in (("c", c), ("A", A), ("b", b)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite values")
        object.__setattr__(self, "c", _frozen(c))
        object.__setattr__(self, "A", _frozen(A))
        object.__setattr__(self, "b", _frozen(b))

    @classmethod
    def from_rows(cls, c: Sequence[float],
                  rows: Sequence[tuple[Sequence[float], float]]) -> "BipInstance":
        n = len(c)
        A = np.array([a for a, _ in rows], dtype=float).reshape(len(rows), n)
        b = np.array([bi for _, bi in rows], dtype=float)
        return cls(c, A, b)

    @property
    def n(self) -> int:
        return self.c.size

    @property
    def m_user(self) -> int:
        return self.b.size

    @property
    def rows(self) -> list[tuple[np.ndarray, float]]:
        return [(self.A[i], float(self.b[i])) for i in range(self.m_user)]

    def __eq__(self, other):
        if not isinstance(other, BipInstance):
            return NotImplemented
        return (np.array_equal(self.c, other.c) and np.array_equal(self.A, other.A)
                and np.array_equal(self.b, other.b))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Polytope:
    """The inequality system ``A x <= b`` with a provenance tag per row.

    Tags are ``("user", k)``, ``("lower", j)`` or ``("upper", j)`` with
    ``k`` and ``j`` 1-based.
    """

    A: np.ndarray
    b: np.ndarray
    tags: tuple[tuple[str, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "A", _frozen(self.A))
        object.__setattr__(self, "b", _frozen(self.b))
        if self.A.ndim != 2 or self.A.shape[0] != self.b.size or len(self.tags) != self.b.size:
            raise ValueError("inconsistent polytope dimensions")

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def m(self) -> int:
        return self.b.size

    @property
    def rows(self) -> list[tuple[np.ndarray, float]]:
        return [(self.A[i], float(self.b[i])) for i in range(self.m)]

    def contains(self, x, tol: float = 0.0) -> bool:
        """Row-wise test ``a_i^T x <= b_i + tol * (1 + |a_i|_1)``."""
        x = np.asarray(x, dtype=float)
        slack = self.b - self.A @ x
        scale = 1.0 + np.abs(self.A).sum(axis=1)
        return bool(np.all(slack >= -tol * scale))


def augment_with_bounds(inst: BipInstance, bounds: bool = True) -> Polytope:
    """Return P as user rows, then ``-x_j <= 0``, then ``x_j <= 1``.

    Row order is fixed (j ascending inside each bound group) because cut
    and surplus indices downstream depend on it. Rows duplicating a
    bound are kept. ``bounds=False`` returns the user rows only.
    """
    n = inst.n
    tags = [(USER, k + 1) for k in range(inst.m_user)]
    if not bounds:
        return Polytope(inst.A.copy(), inst.b.copy(), tuple(tags))
    eye = np.eye(n)
    A = np.vstack([inst.A, -eye, eye])
    b = np.concatenate([inst.b, np.zeros(n), np.ones(n)])
    tags += [(LOWER, j + 1) for j in range(n)]
    tags += [(UPPER, j + 1) for j in range(n)]
    return Polytope(A, b, tuple(tags))


def lift_point(x) -> np.ndarray:
    """Rank-one lifting ``[1; x][1, x^T]`` of order ``n + 1``."""
    v = np.concatenate([[1.0], np.asarray(x, dtype=float).reshape(-1)])
    if v.size < 2:
        raise ValueError("cannot lift an empty vector")
    return np.outer(v, v)


def frobenius(A, X) -> float:
    """``trace(A^T X)``, i.e. the sum of entrywise products."""
    A = np.asarray(A, dtype=float)
    X = np.asarray(X, dtype=float)
    if A.shape != X.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"dimension mismatch: {A.shape} vs {X.shape}")
    return float(np.sum(A * X))


def symmetrize(A) -> np.ndarray:
    """``(A + A^T) / 2``; leaves the Frobenius product with any symmetric
    matrix unchanged."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return 0.5 * (A + A.T)


def is_symmetric(A) -> bool:
    A = np.asarray(A)
    return A.ndim == 2 and A.shape[0] == A.shape[1] and bool(np.array_equal(A, A.T))


def block_diag(*blocks) -> np.ndarray:
    """Square block-diagonal matrix of side ``sum(k_i)`` from square blocks.

    Scalars are accepted as 1x1 blocks.
    """
    mats = [np.atleast_2d(np.asarray(B, dtype=float)) for B in blocks]
    for B in mats:
        if B.shape[0] != B.shape[1]:
            raise ValueError(f"block of shape {B.shape} is not square")
    size = sum(B.shape[0] for B in mats)
    out = np.zeros((size, size))
    k = 0
    for B in mats:
        r = B.shape[0]
        out[k:k + r, k:k + r] = B
        k += r
    return out
