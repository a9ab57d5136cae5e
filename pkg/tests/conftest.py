import numpy as np
import pytest

from fracschrod import GridSpec

ACCEPTANCE_LINES: list[str] = []


def report(name: str, ok: bool, detail: str = "") -> None:
    """Record one acceptance line; printed in the terminal summary."""
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_field(rng, shape, smooth=False):
    U = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    if smooth:
        U = np.cumsum(np.cumsum(U, axis=0), axis=1)
    return U


def small_grid(mx=10, my=10, alpha=1.5, a=0.0, b=1.0, c=0.0, d=1.0, tau=0.1, T=1.0):
    return GridSpec(a, b, c, d, mx, my, alpha, tau, T)


def vec(U):
    return U.ravel(order="F")


def unvec(v, shape):
    return v.reshape(shape, order="F")
