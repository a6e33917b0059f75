import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lsrelax.core_model import BipInstance, augment_with_bounds, lift_point
from lsrelax.lifting import Family, build_cut_system
from lsrelax.oracles import binary_feasible_points, random_instance
from lsrelax.standard_form import (BlockMatrix, all_surplus_positions, assemble, check_symmetric,
                                   decompose_solution, densify, equality_residuals,
                                   lift_and_assemble, lp_as_diagonal_sdp, objective_block,
                                   objective_value, recover_bip_objective, surplus_position,
                                   to_standard_form)


def ls_problem(inst):
    return to_standard_form(build_cut_system(augment_with_bounds(inst)), inst.c)


HALF = BipInstance([1.0], [[1.0]], [0.5])
TRIANGLE = BipInstance([1, 1, 1], [[1, 1, 0], [1, 0, 1], [0, 1, 1]], [1, 1, 1])


def test_surplus_position_boundary_cases():
    assert surplus_position(1, 1, Family.CUT3, n=1, m=3) == 2
    assert surplus_position(1, 1, Family.CUT4, n=1, m=3) == 5
    assert surplus_position(3, 1, Family.CUT4, n=1, m=3) == 7
    with pytest.raises(IndexError):
        surplus_position(4, 1, Family.CUT3, n=1, m=3)
    with pytest.raises(ValueError):
        surplus_position(1, 1, Family.CUT5, n=1, m=3)


@pytest.mark.parametrize("n, m", [(1, 3), (3, 9), (2, 4), (6, 16)])
def test_surplus_positions_tile_the_tail(n, m):
    nbar = 2 * m * n + n + 1
    assert sorted(all_surplus_positions(n, m)) == list(range(n + 1, nbar))


@pytest.mark.parametrize("inst, nbar", [(HALF, 8), (TRIANGLE, 58)])
def test_problem_dimensions(inst, nbar):
    prob = ls_problem(inst)
    assert prob.nbar == nbar
    assert prob.num_constraints == nbar
    assert prob.blocks.dense_block_order == inst.n + 1
    assert prob.blocks.surplus_count == nbar - inst.n - 1
    np.testing.assert_array_equal(prob.b[-1], 1.0)
    assert not np.any(prob.b[:-1])


def test_surplus_entries_are_unique_minus_ones():
    prob = ls_problem(TRIANGLE)
    mn2 = 2 * prob.m * prob.n
    touched = prob.A_diag[:mn2]
    assert np.all(np.sort(touched, axis=1)[:, 0] == -1)
    assert np.all((touched != 0).sum(axis=1) == 1)
    np.testing.assert_array_equal(np.argmin(touched, axis=0), np.arange(mn2))
    assert not np.any(prob.A_diag[mn2:])
    assert check_symmetric(prob)


def test_cost_block():
    np.testing.assert_array_equal(objective_block(1, [1.0]), [[0, -0.5], [-0.5, 0]])
    prob = ls_problem(HALF)
    Xbar = lift_and_assemble(prob, [1.0])
    assert objective_value(prob, Xbar) == -1
    assert recover_bip_objective(objective_value(prob, Xbar)) == 1


def test_objective_recovers_linear_objective():
    inst = BipInstance([1.0, 1.0, 1.0], np.zeros((0, 3)), [])
    prob = ls_problem(inst)
    assert objective_value(prob, lift_and_assemble(prob, [1, 0, 1])) == -2
    zero = ls_problem(BipInstance([0.0, 0.0], np.zeros((0, 2)), []))
    assert objective_value(zero, lift_and_assemble(zero, [1, 1])) == 0


def test_decompose_index_map():
    prob = ls_problem(HALF)
    p = np.arange(6.0) + 10
    Xbar = BlockMatrix(lift_point([0.0]), p)
    dec = decompose_solution(prob, Xbar)
    np.testing.assert_array_equal(dec.S[:, 0], p[:3])
    np.testing.assert_array_equal(dec.Sbar[:, 0], p[3:])
    with pytest.raises(ValueError):
        decompose_solution(prob, BlockMatrix(lift_point([0.0]), p[:5]))


def test_decompose_round_trip():
    prob = ls_problem(TRIANGLE)
    rng = np.random.default_rng(0)
    Xbar = BlockMatrix(lift_point(rng.random(3)), rng.random(prob.nbar - 4))
    dec = decompose_solution(prob, Xbar)
    again = assemble(prob, dec.X, dec.S, dec.Sbar)
    np.testing.assert_array_equal(again.dense, Xbar.dense)
    np.testing.assert_array_equal(again.diag, Xbar.diag)


def test_decompose_lifted_binary_point():
    prob = ls_problem(TRIANGLE)
    P = augment_with_bounds(TRIANGLE)
    x = np.array([0.0, 1.0, 0.0])
    dec = decompose_solution(prob, lift_and_assemble(prob, x))
    np.testing.assert_array_equal(dec.x, x)
    want = np.outer(P.b - P.A @ x, x)
    np.testing.assert_allclose(dec.S, want, atol=1e-15)
    assert np.all(dec.S >= 0) and np.all(dec.Sbar >= 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_binary_points_transport_to_standard_form(seed):
    inst = random_instance(seed)
    prob = ls_problem(inst)
    assert prob.nbar == prob.num_constraints == 2 * prob.m * prob.n + prob.n + 1
    assert check_symmetric(prob)
    for x in binary_feasible_points(inst):
        Xbar = lift_and_assemble(prob, x)
        assert np.max(np.abs(equality_residuals(prob, Xbar))) <= 1e-12
        assert Xbar.min_eigenvalue() >= -1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_surplus_equals_cut_value(seed):
    # at any Xbar satisfying the equalities, each surplus is its cut's slack
    inst = random_instance(seed)
    prob = ls_problem(inst)
    cs = build_cut_system(augment_with_bounds(inst))
    x = np.random.default_rng(seed).random(inst.n)
    Xbar = lift_and_assemble(prob, x)
    for k, cut in enumerate(cs.cuts[:2 * cs.m * cs.n]):
        pos = surplus_position(cut.i, cut.j, cut.family, cs.n, cs.m)
        assert abs(Xbar.to_full()[pos, pos] - cut.value(Xbar.dense)) <= 1e-12


def test_lp_embedding_shape():
    P = augment_with_bounds(HALF)
    prob = lp_as_diagonal_sdp(P, HALF.c)
    assert prob.blocks.dense_block_order == 0
    assert prob.blocks.surplus_count == 1 + 3
    np.testing.assert_array_equal(prob.A_diag, [[1, 1, 0, 0], [-1, 0, 1, 0], [1, 0, 0, 1]])
    np.testing.assert_array_equal(prob.C.diag, [-1, 0, 0, 0])
    # x = 0.5 with slacks (0, 0.5, 0.5) is feasible with value -0.5
    Xbar = BlockMatrix(np.zeros((0, 0)), [0.5, 0.0, 0.5, 0.5])
    np.testing.assert_array_equal(prob.apply(Xbar), prob.b)
    assert objective_value(prob, Xbar) == -0.5


def test_densify_keeps_values():
    prob = ls_problem(HALF)
    dense = densify(prob)
    assert dense.blocks.dense_block_order == prob.nbar and dense.blocks.surplus_count == 0
    Xbar = lift_and_assemble(prob, [0.0])
    full = BlockMatrix(Xbar.to_full(), np.zeros(0))
    np.testing.assert_array_equal(dense.apply(full), prob.apply(Xbar))
    assert objective_value(dense, full) == objective_value(prob, Xbar)
