"""Solver for a coupled space-time fractional predator-prey
reaction-diffusion system: semi-implicit stepping with memory, two
second-order space discretizations, bound monitoring, and a
manufactured-solution verification harness.
"""
from .config import RunConfig, parse_config, serialize_config
from .mms import ConvergenceReport, convergence_study, exact_solution, forcing, linf_error
from .model import BoundsConfig, ModelParams, mu_guard_thresholds, reaction_f1, reaction_f2
from .operators import (
    GridSpec,
    OperatorMatrix,
    SolverFailure,
    apply_riesz,
    assemble_matrix,
    eliminate_ghosts,
    solve,
)
from .stepper import (
    FieldPair,
    GuardViolation,
    History,
    StepReport,
    history_rhs,
    perturbation_experiment,
    run,
    step,
)
from .weights import (
    CaputoCoeffs,
    CenteredWeights,
    WsgdWeights,
    caputo_coeffs,
    centered_weights,
    wsgd_weights,
)

__all__ = [
    "BoundsConfig",
    "CaputoCoeffs",
    "CenteredWeights",
    "ConvergenceReport",
    "FieldPair",
    "GridSpec",
    "GuardViolation",
    "History",
    "ModelParams",
    "OperatorMatrix",
    "RunConfig",
    "SolverFailure",
    "StepReport",
    "WsgdWeights",
    "apply_riesz",
    "assemble_matrix",
    "caputo_coeffs",
    "centered_weights",
    "convergence_study",
    "eliminate_ghosts",
    "exact_solution",
    "forcing",
    "history_rhs",
    "linf_error",
    "mu_guard_thresholds",
    "parse_config",
    "perturbation_experiment",
    "reaction_f1",
    "reaction_f2",
    "run",
    "serialize_config",
    "solve",
    "step",
    "wsgd_weights",
]
