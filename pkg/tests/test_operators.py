import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_field, small_grid, unvec, vec
from fracschrod import FracLaplacian, GridSpec, assemble_dense, energy_quadratic_form
from fracschrod.coeffs import compute_weights
from fracschrod.operators import DenseCapError, inner


def five_point(U):
    P = np.pad(U, 1)
    return P[2:, 1:-1] + P[:-2, 1:-1] + P[1:-1, 2:] + P[1:-1, :-2] - 4 * U


@pytest.mark.parametrize("method", ["fft", "direct"])
def test_impulse_diagonal(method):
    g = small_grid(12, 9, alpha=1.7, b=2.0, d=1.5)
    U = g.zeros()
    U[4, 3] = 1.0
    out = FracLaplacian(g, method=method).apply(U)
    c0 = compute_weights(1.7, 1).weights[0]
    assert out[4, 3] == pytest.approx(-(c0 / g.hx**1.7 + c0 / g.hy**1.7), rel=1e-14)


@pytest.mark.parametrize("method", ["fft", "direct"])
def test_alpha_two_five_point(rng, method):
    g = GridSpec(0, 20, 0, 17, 20, 17, 2.0, 0.1, 1.0)  # h = 1
    U = random_field(rng, g.shape)
    np.testing.assert_allclose(FracLaplacian(g, method=method).apply(U), five_point(U), rtol=0, atol=1e-13)


@pytest.mark.parametrize("shape", [(10, 10), (7, 12), (13, 5)])
@pytest.mark.parametrize("method", ["fft", "direct"])
def test_matches_dense(rng, shape, method):
    g = small_grid(*shape, alpha=1.3, b=2.0, d=3.0)
    op = FracLaplacian(g, method=method)
    U = random_field(rng, g.shape)
    D = assemble_dense(op)
    ref = -unvec(D @ vec(U), g.shape)
    assert np.max(np.abs(op.apply(U) - ref)) <= 1e-12 * np.max(np.abs(ref))


def test_auto_method_choice():
    assert FracLaplacian(small_grid(10, 10)).method == "direct"
    assert FracLaplacian(small_grid(200, 200)).method == "fft"


def test_dense_alpha_two_laplacian():
    g = GridSpec(0, 4, 0, 4, 4, 4, 2.0, 0.1, 1.0)
    D = assemble_dense(FracLaplacian(g))
    T = 2 * np.eye(3) - np.eye(3, k=1) - np.eye(3, k=-1)
    np.testing.assert_array_equal(D, np.kron(np.eye(3), T) + np.kron(T, np.eye(3)))
    assert np.all(np.diag(D) == 4)


@pytest.mark.parametrize("alpha", [1.1, 1.5, 1.9])
def test_dense_symmetric_positive(alpha):
    g = small_grid(9, 11, alpha=alpha, b=3.0)
    D = assemble_dense(FracLaplacian(g))
    np.testing.assert_array_equal(D, D.T)
    assert np.linalg.eigvalsh(D).min() > 0


def test_dense_cap(monkeypatch):
    g = small_grid(66, 66)
    with pytest.raises(DenseCapError, match="4096"):
        assemble_dense(FracLaplacian(g))
    with pytest.raises(DenseCapError, match="cap 10"):
        assemble_dense(FracLaplacian(small_grid(5, 5)), cap=10)
    monkeypatch.setenv("FRACSCHROD_DENSE_CAP", "5000")
    assert assemble_dense(FracLaplacian(g)).shape == (4225, 4225)


def test_shape_mismatch():
    op = FracLaplacian(small_grid(8, 8))
    with pytest.raises(ValueError, match="shape"):
        op.apply(np.zeros((8, 8), complex))


def test_weights_too_short():
    g = small_grid(10, 10)
    with pytest.raises(ValueError, match="need"):
        FracLaplacian(g, weights=compute_weights(g.alpha, 3))


def test_linearity(rng):
    op = FracLaplacian(small_grid(40, 33, alpha=1.4), method="fft")
    U, V = random_field(rng, op.shape), random_field(rng, op.shape)
    a, b = 0.3 - 1.2j, 2.5 + 0.1j
    lhs = op.apply(a * U + b * V)
    rhs = a * op.apply(U) + b * op.apply(V)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * np.max(np.abs(rhs))


def test_self_adjoint_and_imaginary_part(rng):
    g = small_grid(30, 25, alpha=1.6, b=2.0)
    op = FracLaplacian(g)
    U, V = random_field(rng, g.shape), random_field(rng, g.shape)
    lhs = inner(g, -op.apply(U), V)
    rhs = np.conj(inner(g, -op.apply(V), U))
    assert abs(lhs - rhs) <= 1e-12 * abs(lhs)
    q = inner(g, -op.apply(U), U)
    norm2 = inner(g, U, U).real
    assert q.real >= 0
    assert abs(q.imag) <= 1e-12 * norm2


def sqrt_oracle(D):
    lam, P = np.linalg.eigh(D)
    return (P * np.sqrt(lam)) @ P.T


def test_energy_quadratic_form(rng):
    g = small_grid(9, 12, alpha=1.35, b=2.0, d=1.0)
    op = FracLaplacian(g)
    assert energy_quadratic_form(op, g.zeros()) == 0.0
    L = sqrt_oracle(assemble_dense(op))
    for _ in range(5):
        U = random_field(rng, g.shape)
        ref = g.cell_area * np.sum(np.abs(L @ vec(U)) ** 2)
        assert energy_quadratic_form(op, U) == pytest.approx(ref, rel=1e-10)


def test_energy_quadratic_form_impulse():
    g = GridSpec(0, 6, 0, 6, 6, 6, 2.0, 0.1, 1.0)
    U = g.zeros()
    U[2, 2] = 1.0
    assert energy_quadratic_form(FracLaplacian(g), U) == pytest.approx(4.0, rel=1e-15)


@settings(max_examples=25, deadline=None)
@given(mx=st.integers(2, 40), my=st.integers(2, 40), alpha=st.floats(1.01, 2.0),
       seed=st.integers(0, 2**32 - 1))
def test_fft_equals_direct_property(mx, my, alpha, seed):
    g = small_grid(mx, my, alpha=alpha, b=1.0 + mx / 10)
    U = random_field(np.random.default_rng(seed), g.shape)
    a = FracLaplacian(g, method="fft").apply(U)
    b = FracLaplacian(g, method="direct").apply(U)
    assert np.max(np.abs(a - b)) <= 1e-12 * max(np.max(np.abs(b)), 1e-300)
