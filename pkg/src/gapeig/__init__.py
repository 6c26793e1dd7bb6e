"""Isolated eigenvalues of singular Sturm-Liouville, Dirac and Jacobi
operators, including eigenvalues in gaps of the essential spectrum, from
regular truncations whose boundary conditions come from Weyl solutions."""

__version__ = "0.1.0"

from .convergence import (count_monotonicity_check, detect_accumulation, projection_overlap,
                          residual_window_check, run_study, solve_truncation)
from .eigen import count_in_window, eigenfunction, eigenvalues_in_window
from .errors import GapeigError
from .expr import CoefficientField, eval_coefficient, parse_expression
from .jacobi import JacobiOperator, free_impurity, jacobi_study, truncate_jacobi, weyl_sequence
from .ode import State, derivative, propagate, wronskian
from .oracle import dense_fd_oracle
from .problem import ProblemSpec, SpectralWindow, make_problem, parse_problem, render_problem
from .tridiag import tridiag_eigs_window
from .truncation import (NaiveDirichlet, OneSidedLP, RegularProblem, TwoSidedWeyl, bc_angle_from_state,
                         build_regular_problem, truncation_sequence)
from .weyl import init_from_bc, recessive_lp, weyl_direction

__all__ = [
    "CoefficientField", "GapeigError", "JacobiOperator", "NaiveDirichlet", "OneSidedLP", "ProblemSpec",
    "RegularProblem", "SpectralWindow", "State", "TwoSidedWeyl", "bc_angle_from_state", "build_regular_problem",
    "count_in_window", "count_monotonicity_check", "dense_fd_oracle", "derivative",
    "detect_accumulation", "eigenfunction", "eigenvalues_in_window", "eval_coefficient", "free_impurity",
    "init_from_bc", "jacobi_study", "make_problem", "parse_expression", "parse_problem", "projection_overlap",
    "propagate", "recessive_lp", "render_problem", "residual_window_check", "run_study", "solve_truncation",
    "tridiag_eigs_window", "truncate_jacobi", "truncation_sequence", "weyl_direction", "weyl_sequence",
    "wronskian",
]
