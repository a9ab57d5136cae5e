"""Conservative finite-difference solver for the 2D Riesz space-fractional
nonlinear Schrödinger equation."""

from fracschrod.coeffs import FracWeights, compute_weights, generating_function_residual
from fracschrod.grid import GridSpec
from fracschrod.operators import FracLaplacian, assemble_dense, energy_quadratic_form
from fracschrod.linsolve import SolveReport, SolverError, SolverSettings, StepSystem, solve
from fracschrod.diagnostics import DiagnosticsRecord, discrete_energy, discrete_mass
from fracschrod.stepper import ProblemDef, RunResult, Scheme, SchemeState, first_step, run

__all__ = [
    "FracWeights",
    "compute_weights",
    "generating_function_residual",
    "GridSpec",
    "FracLaplacian",
    "assemble_dense",
    "energy_quadratic_form",
    "SolveReport",
    "SolverError",
    "SolverSettings",
    "StepSystem",
    "solve",
    "DiagnosticsRecord",
    "discrete_energy",
    "discrete_mass",
    "ProblemDef",
    "RunResult",
    "Scheme",
    "SchemeState",
    "first_step",
    "run",
]

__version__ = "0.1.0"
