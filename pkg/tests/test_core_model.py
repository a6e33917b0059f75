import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from lsrelax.core_model import (BipInstance, augment_with_bounds, block_diag, frobenius,
                                lift_point, symmetrize)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def test_augment_single_row():
    P = augment_with_bounds(BipInstance([1.0], [[1.0]], [0.5]))
    assert P.m == 3
    np.testing.assert_array_equal(P.A, [[1], [-1], [1]])
    np.testing.assert_array_equal(P.b, [0.5, 0, 1])
    assert P.tags == (("user", 1), ("lower", 1), ("upper", 1))


def test_augment_bounds_only():
    P = augment_with_bounds(BipInstance([1.0, 2.0], np.zeros((0, 2)), []))
    np.testing.assert_array_equal(P.A, [[-1, 0], [0, -1], [1, 0], [0, 1]])
    np.testing.assert_array_equal(P.b, [0, 0, 1, 1])


def test_augment_triangle_count():
    inst = BipInstance([1, 1, 1], [[1, 1, 0], [1, 0, 1], [0, 1, 1]], [1, 1, 1])
    assert augment_with_bounds(inst).m == 9


def test_augment_keeps_duplicate_rows():
    # user row x <= 1 duplicates the upper bound; it is kept
    P = augment_with_bounds(BipInstance([1.0], [[1.0]], [1.0]))
    assert P.m == 3
    assert P.contains([1.0]) and not P.contains([1.5])


def test_augment_disabled():
    P = augment_with_bounds(BipInstance([1.0, 1.0], [[1, 1]], [1]), bounds=False)
    assert P.m == 1


@pytest.mark.parametrize("bad", [
    dict(c=[], A=np.zeros((0, 0)), b=[]),
    dict(c=[1.0], A=[[np.inf]], b=[1.0]),
    dict(c=[1.0, 2.0], A=[[1.0]], b=[1.0]),
])
def test_instance_validation(bad):
    with pytest.raises(ValueError):
        BipInstance(**bad)


def test_instance_is_immutable():
    inst = BipInstance([1.0], [[1.0]], [0.5])
    with pytest.raises(ValueError):
        inst.c[0] = 2.0


def test_lift_binary_point():
    X = lift_point([1, 0, 1])
    np.testing.assert_array_equal(np.diag(X), [1, 1, 0, 1])
    assert np.trace(X) == 3
    np.testing.assert_allclose(np.linalg.eigvalsh(X), [0, 0, 0, 3], atol=1e-12)


def test_lift_zero_and_fractional():
    np.testing.assert_array_equal(lift_point([0]), [[1, 0], [0, 0]])
    X = lift_point([0.5])
    np.testing.assert_array_equal(X, [[1, 0.5], [0.5, 0.25]])
    assert not np.array_equal(X[:, 0], np.diag(X))


def test_lift_rejects_empty():
    with pytest.raises(ValueError):
        lift_point([])


def test_frobenius_examples():
    assert frobenius(np.eye(2), [[1, 2], [2, 5]]) == 6
    assert frobenius([[0, 2], [0, 0]], np.ones((2, 2))) == 2
    assert frobenius(np.zeros((3, 3)), lift_point([1, 2])) == 0


def test_frobenius_dimension_mismatch():
    with pytest.raises(ValueError):
        frobenius(np.eye(2), np.eye(3))


def test_symmetrize_examples():
    A = np.array([[0.0, 2.0], [0.0, 0.0]])
    np.testing.assert_array_equal(symmetrize(A), [[0, 1], [1, 0]])
    S = np.array([[1.0, 3.0], [3.0, -2.0]])
    np.testing.assert_array_equal(symmetrize(S), S)
    assert frobenius(A, np.ones((2, 2))) == frobenius(symmetrize(A), np.ones((2, 2))) == 2


def test_block_diag_square_reading():
    D = block_diag(np.ones((2, 2)), 3.0, np.eye(1))
    assert D.shape == (4, 4)
    np.testing.assert_array_equal(np.diag(D), [1, 1, 3, 1])
    with pytest.raises(ValueError):
        block_diag(np.ones((2, 3)))


@st.composite
def matrix_pairs(draw):
    k = draw(st.integers(1, 8))
    A = draw(arrays(float, (k, k), elements=finite))
    B = draw(arrays(float, (k, k), elements=finite))
    return A, symmetrize(B)


@given(matrix_pairs())
def test_symmetrization_keeps_inner_product(pair):
    A, X = pair
    v = frobenius(A, X)
    # hypothesis finds heavy cancellation, so scale by the entry magnitudes
    scale = max(1.0, np.abs(A).max() * np.abs(X).max())
    assert abs(v - frobenius(symmetrize(A), X)) <= 1e-12 * (1 + abs(v)) * scale


@given(arrays(float, st.integers(1, 10), elements=st.floats(-100, 100)))
def test_lift_is_psd_with_known_trace(x):
    X = lift_point(x)
    assert np.linalg.eigvalsh(X)[0] >= -1e-12 * max(1.0, np.trace(X))
    assert np.isclose(np.trace(X), 1 + x @ x, rtol=1e-14, atol=0)


@settings(max_examples=50)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=12))
def test_binary_lift_first_column_is_diagonal(bits):
    X = lift_point(bits)
    np.testing.assert_array_equal(X[:, 0], np.diag(X))
    assert np.trace(X) == 1 + sum(bits)
