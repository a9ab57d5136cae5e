"""Time marching for the three-level linearized implicit scheme.

Level 0 samples the initial data, level 1 is one explicit Taylor step and
every later level solves

    (1/tau - i|U^n|^2 - i L) U^{n+1} = (1/tau + i|U^n|^2 + i L) U^{n-1} + 2 g^n,

where L = L_x + L_y and g^n is an optional source evaluated at t_n.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from collections.abc import Callable

import numpy as np

from fracschrod import _kernels
from fracschrod.diagnostics import DiagnosticsRecord, _energy, discrete_mass, linf_error
from fracschrod.grid import GridSpec
from fracschrod.linsolve import (
    SolverError,
    SolverSettings,
    StepSystem,
    make_preconditioner,
    solve,
)
from fracschrod.operators import FracLaplacian, energy_quadratic_form

__all__ = ["ProblemDef", "RunResult", "Scheme", "SchemeState", "advance", "first_step", "run"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProblemDef:
    """Initial data, optional source g(x, y, t) and optional exact solution.

    All callables take arrays from ``GridSpec.mesh()`` and broadcast.
    """

    initial: Callable
    source: Callable | None = None
    exact: Callable | None = None
    name: str = "custom"
    boundary_tol: float = 1e-12


@dataclass(frozen=True)
class SchemeState:
    prev: np.ndarray
    curr: np.ndarray
    n: int
    t: float


@dataclass
class RunResult:
    state: SchemeState
    records: list[DiagnosticsRecord] = field(default_factory=list)
    failure: str | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None

    @property
    def final_error(self) -> float | None:
        return self.records[-1].linf_error if self.records else None

    def energies(self) -> np.ndarray:
        return np.array([r.energy for r in self.records])


class Scheme:
    """Bundles the operator, preconditioner and sampled problem for one grid."""

    def __init__(self, problem: ProblemDef, grid: GridSpec,
                 settings: SolverSettings | None = None,
                 method: str = "auto", workers: int | None = None):
        self.problem = problem
        self.grid = grid
        self.settings = settings or SolverSettings()
        self.op = FracLaplacian(grid, method=method, workers=workers)
        self.precond = make_preconditioner(self.settings.preconditioner, self.op, grid.tau)
        self.X, self.Y = grid.mesh()
        self._zero = np.zeros(grid.shape, dtype=np.complex128)
        # quadratic form of the newest level, reused by the next energy
        self._q_curr: float | None = None

    def _source(self, t: float) -> np.ndarray:
        if self.problem.source is None:
            return self._zero
        return np.asarray(self.problem.source(self.X, self.Y, t), dtype=np.complex128)

    def exact(self, t: float) -> np.ndarray | None:
        if self.problem.exact is None:
            return None
        return np.asarray(self.problem.exact(self.X, self.Y, t), dtype=np.complex128)

    def initial_field(self) -> np.ndarray:
        g = self.grid
        U0 = np.ascontiguousarray(self.problem.initial(self.X, self.Y), dtype=np.complex128)
        edge = np.concatenate([
            np.ravel(self.problem.initial(np.array([g.a, g.b]), self.Y[:1].T)),
            np.ravel(self.problem.initial(self.X[:, :1].T, np.array([[g.c], [g.d]]))),
        ])
        if np.max(np.abs(edge), initial=0.0) > self.problem.boundary_tol:
            warnings.warn(f"initial data is not zero on the boundary "
                          f"(max |u0| = {np.max(np.abs(edge)):.3e})", stacklevel=3)
        return U0

    def first_step(self) -> SchemeState:
        """U^1 = U^0 + tau (i L U^0 + i |U^0|^2 U^0 + g(., ., 0))."""
        U0 = self.initial_field()
        tau = self.grid.tau
        pot = U0.real**2 + U0.imag**2
        U1 = U0 + tau * (1j * (self.op.apply(U0) + pot * U0) + self._source(0.0))
        self._q_curr = None
        return SchemeState(prev=U0, curr=U1, n=1, t=tau)

    def advance(self, state: SchemeState) -> tuple[SchemeState, DiagnosticsRecord]:
        """One solve of the three-level scheme: (U^{n-1}, U^n) -> (U^n, U^{n+1})."""
        if state.n < 1:
            raise ValueError("advance needs a state with n >= 1")
        tau = self.grid.tau
        Um, U = state.prev, state.curr
        pot = np.ascontiguousarray(U.real**2 + U.imag**2)
        src = self._source(state.n * tau)
        if self.problem.source is not None:
            src = 2.0 * src
        rhs = _kernels.rhs_combine(np.ascontiguousarray(Um), self.op.apply(Um), pot, 1.0 / tau, src)
        system = StepSystem(self.op, tau, pot, rhs, precond=self.precond)
        U_new, report = solve(system, self.settings, x0=2.0 * U - Um)
        new = SchemeState(prev=U, curr=U_new, n=state.n + 1, t=(state.n + 1) * tau)
        return new, self.record(new, report)

    def record(self, state: SchemeState, report=None) -> DiagnosticsRecord:
        g = self.grid
        q_old = self._q_curr if self._q_curr is not None else energy_quadratic_form(self.op, state.prev)
        q_new = energy_quadratic_form(self.op, state.curr)
        self._q_curr = q_new
        exact = self.exact(state.t)
        return DiagnosticsRecord(
            n=state.n,
            t=state.t,
            mass=discrete_mass(state.curr, g.hx, g.hy),
            energy=_energy(self.op, q_old, q_new, state.prev, state.curr),
            linf_error=None if exact is None else linf_error(state.curr, exact),
            solver=report,
        )


def first_step(problem: ProblemDef, grid: GridSpec, **kwargs) -> SchemeState:
    return Scheme(problem, grid, **kwargs).first_step()


def advance(state: SchemeState, scheme: Scheme) -> tuple[SchemeState, DiagnosticsRecord]:
    return scheme.advance(state)


def _snapshot_levels(times, tau, N):
    levels = {}
    for ts in times:
        n = int(round(ts / tau))
        if abs(n * tau - ts) > 1e-9 * max(1.0, abs(ts)) or not 0 <= n <= N:
            raise ValueError(f"snapshot time {ts} is not a time level in [0, {N * tau}]")
        levels[n] = ts
    return levels


def run(problem: ProblemDef, grid: GridSpec, *,
        settings: SolverSettings | None = None,
        method: str = "auto",
        workers: int | None = None,
        snapshot_times=(),
        on_snapshot: Callable[[int, float, np.ndarray], None] | None = None,
        on_record: Callable[[DiagnosticsRecord], None] | None = None) -> RunResult:
    """March from t = 0 to t = T.

    Every level n >= 1 produces a :class:`DiagnosticsRecord`. Snapshot
    callbacks receive ``(n, t, U^n)`` at the requested times. A solver
    failure stops the run; the partial result is returned with
    ``failure`` set.
    """
    scheme = Scheme(problem, grid, settings, method=method, workers=workers)
    snaps = _snapshot_levels(snapshot_times, grid.tau, grid.N)

    def emit(rec, state):
        result.records.append(rec)
        if on_record is not None:
            on_record(rec)
        if on_snapshot is not None and state.n in snaps:
            on_snapshot(state.n, state.t, state.curr)

    state = scheme.first_step()
    if on_snapshot is not None and 0 in snaps:
        on_snapshot(0, 0.0, state.prev)
    result = RunResult(state=state)
    emit(scheme.record(state), state)
    if grid.N == 1:
        warnings.warn("N = 1: only the explicit first step was taken", stacklevel=2)
        return result

    while state.n < grid.N:
        try:
            state, rec = scheme.advance(state)
        except SolverError as exc:
            log.error("run aborted at level %d: %s", state.n + 1, exc)
            result.failure = f"level {state.n + 1}: {exc}"
            return result
        result.state = state
        emit(rec, state)
    return result
