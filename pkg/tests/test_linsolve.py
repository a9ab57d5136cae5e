import numpy as np
import pytest
import scipy.linalg as sla

from conftest import random_field, small_grid, unvec, vec
from fracschrod import FracLaplacian, GridSpec, SolverError, SolverSettings, StepSystem, solve
from fracschrod.linsolve import PRECONDITIONERS, make_preconditioner


class ZeroOperator(FracLaplacian):
    """Operator stub with L = 0."""

    def apply(self, U):
        return np.zeros_like(U)


def make_system(rng, n=12, alpha=1.5, tau=0.05, amp=1.0, shape=None):
    g = small_grid(*(shape or (n, n)), alpha=alpha, b=2.0, d=2.0, tau=tau)
    op = FracLaplacian(g)
    pot = amp * np.abs(random_field(rng, g.shape)) ** 2
    return StepSystem(op, tau, pot, random_field(rng, g.shape))


def test_zero_operator_stub(rng):
    g = small_grid(9, 9, tau=0.25)
    b = random_field(rng, g.shape)
    sys = StepSystem(ZeroOperator(g), 0.25, np.zeros(g.shape), b, precond=lambda R: R)
    x, rep = solve(sys)
    np.testing.assert_allclose(x, 0.25 * b, rtol=1e-14)
    assert rep.converged and rep.iterations <= 1


@pytest.mark.parametrize("kind", PRECONDITIONERS)
def test_matches_dense_lu(rng, kind):
    sys = make_system(rng, shape=(11, 8))
    x, rep = solve(sys, SolverSettings(tol=1e-12, preconditioner=kind))
    ref = unvec(sla.solve(sys.dense(), vec(sys.rhs)), sys.rhs.shape)
    assert rep.method == "krylov" and rep.converged
    assert np.max(np.abs(x - ref)) <= 1e-9 * np.max(np.abs(ref))
    assert rep.final_residual <= 1e-12


def test_reported_residual_is_true(rng):
    sys = make_system(rng)
    x, rep = solve(sys, tol=1e-8)
    true = np.linalg.norm(sys.rhs - sys.apply(x)) / np.linalg.norm(sys.rhs)
    assert rep.final_residual == pytest.approx(true, rel=1e-12)


def test_zero_rhs(rng):
    sys = make_system(rng)
    sys.rhs[:] = 0
    x, rep = solve(sys)
    assert not x.any() and rep.iterations == 0


def test_initial_guess_used(rng):
    sys = make_system(rng)
    x, _ = solve(sys, tol=1e-13)
    _, rep = solve(sys, tol=1e-10, x0=x)
    assert rep.iterations == 0


def test_dense_fallback(rng):
    sys = make_system(rng, n=8)
    x, rep = solve(sys, SolverSettings(preconditioner="none", tol=1e-13, max_iter=1))
    assert rep.method == "dense_lu" and rep.converged
    ref = sla.solve(sys.dense(), vec(sys.rhs))
    np.testing.assert_allclose(vec(x), ref, rtol=1e-12)


def test_solver_error_without_fallback(rng):
    sys = make_system(rng, n=8)
    with pytest.raises(SolverError) as info:
        solve(sys, SolverSettings(preconditioner="none", tol=1e-13, max_iter=1, dense_fallback=False))
    err = info.value
    assert not err.report.converged
    assert err.best.shape == sys.rhs.shape
    assert err.report.final_residual > 1e-13


def test_solver_error_over_cap(rng):
    sys = make_system(rng, n=8)
    with pytest.raises(SolverError):
        solve(sys, SolverSettings(preconditioner="none", tol=1e-13, max_iter=1, dense_cap=10))


def test_bad_settings(rng):
    sys = make_system(rng)
    with pytest.raises(ValueError):
        solve(sys, tol=0.0)
    with pytest.raises(ValueError):
        make_preconditioner("jacobi", sys.op, 0.1)


@pytest.mark.slow
@pytest.mark.parametrize("n", [40, 80, 160])
@pytest.mark.parametrize("alpha", [1.2, 1.8])
def test_iteration_budget(rng, n, alpha):
    # Example-2-sized systems: domain [-5, 5]^2, tau = h
    g = GridSpec(-5, 5, -5, 5, n, n, alpha, 10 / n, 10 / n * 2)
    op = FracLaplacian(g)
    X, Y = g.mesh()
    U = 2 / np.sqrt(np.pi) * np.exp(-(X**2 + Y**2))
    sys = StepSystem(op, g.tau, np.abs(U) ** 2, U / g.tau + 1j * op.apply(U))
    _, rep = solve(sys, SolverSettings(tol=1e-10, max_iter=200, dense_fallback=False))
    assert rep.converged and rep.iterations <= 200
