"""Lifted semidefinite (matrix-cut) relaxations of 0-1 integer programs."""

from .core_model import (BipInstance, Polytope, augment_with_bounds, frobenius, lift_point,
                         symmetrize)
from .lifting import CutSystem, Family, LiftedCut, build_cut_system, check_membership, project
from .oracles import brute_force_bip, lp_bound, ls_bound, sandwich_check
from .sdp_solver import SolveResult, SolverOptions, Status, kkt_report, solve
from .standard_form import SdpProblem, decompose_solution, lp_as_diagonal_sdp, to_standard_form

__version__ = "0.1.0"
