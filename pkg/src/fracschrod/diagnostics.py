"""Discrete mass, energy and error norms tracked along a run."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fracschrod import _kernels
from fracschrod.linsolve import SolveReport
from fracschrod.operators import FracLaplacian, energy_quadratic_form

__all__ = ["DiagnosticsRecord", "discrete_energy", "discrete_mass", "linf_error"]


@dataclass(frozen=True)
class DiagnosticsRecord:
    """Diagnostics at time level ``n``.

    ``energy`` is E over the pair of levels (n - 1, n); it is the quantity
    the scheme conserves exactly.
    """

    n: int
    t: float
    mass: float
    energy: float
    linf_error: float | None = None
    solver: SolveReport | None = None


def discrete_mass(U: np.ndarray, hx: float, hy: float) -> float:
    """sqrt(h_x h_y sum |U|^2)."""
    return math.sqrt(hx * hy * float(np.vdot(U, U).real))


def _energy(op, q_old, q_new, U_old, U_new):
    quartic = op.grid.cell_area * _kernels.quartic_sum(U_old, U_new)
    return 0.5 * (q_old + q_new) - 0.5 * quartic


def discrete_energy(pair: tuple[np.ndarray, np.ndarray], op: FracLaplacian) -> float:
    """E = 1/2 (|Lambda U1|^2 + |Lambda U0|^2) - 1/2 h_x h_y sum |U0|^2 |U1|^2.

    ``pair`` is (U^n, U^{n+1}). The |Lambda U|^2 terms come from the
    quadratic form of -(L_x + L_y); no square root is formed.
    """
    U0, U1 = pair
    op.grid.check(U0, "U^n")
    op.grid.check(U1, "U^{n+1}")
    return _energy(op, energy_quadratic_form(op, U0), energy_quadratic_form(op, U1), U0, U1)


def linf_error(U: np.ndarray, exact: np.ndarray) -> float:
    return float(np.max(np.abs(exact - U))) if U.size else 0.0
