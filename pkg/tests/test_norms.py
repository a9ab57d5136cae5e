import numpy as np
import pytest

from conftest import random_field, small_grid
from fracschrod import FracLaplacian
from fracschrod.norms import (
    embedding_constant,
    forward_transform,
    inverse_transform,
    sobolev_norms,
    spectral_inner,
)
from fracschrod.operators import inner


def direct_transform(U, grid, k1, k2):
    """The defining double sum, evaluated term by term."""
    x, y = grid.x(), grid.y()
    E1 = np.exp(-1j * np.outer(k1, x))
    E2 = np.exp(-1j * np.outer(y, k2))
    return grid.cell_area / (2 * np.pi) * (E1 @ U @ E2)


def test_impulse_flat_spectrum():
    g = small_grid(8, 6, b=2.0)
    U = g.zeros()
    U[3, 2] = 1.0
    S = forward_transform(U, g)
    np.testing.assert_allclose(np.abs(S.coefficients), g.cell_area / (2 * np.pi), rtol=1e-14)


def test_zero():
    g = small_grid(8, 6)
    S = forward_transform(g.zeros(), g)
    assert not S.coefficients.any()
    assert sobolev_norms(g.zeros(), g, 1.5) == (0.0, 0.0, 0.0, 0.0)


@pytest.mark.parametrize("oversample", [1, 3])
def test_matches_direct_sum(rng, oversample):
    g = small_grid(7, 9, a=-1.0, b=1.5, c=0.5, d=2.0)
    U = random_field(rng, g.shape)
    S = forward_transform(U, g, oversample)
    ref = direct_transform(U, g, S.k1, S.k2)
    np.testing.assert_allclose(S.coefficients, ref, rtol=0, atol=1e-13 * np.abs(ref).max())
    assert np.all(np.diff(S.k1) > 0)
    assert S.k1[0] == pytest.approx(-(S.k1.size // 2) * S.dk1)
    assert -np.pi / g.hx <= S.k1[0] and S.k1[-1] < np.pi / g.hx
    assert S.dk1 == pytest.approx(2 * np.pi / (oversample * (g.b - g.a)))


@pytest.mark.parametrize("n", [8, 33, 128])
def test_parseval_and_inverse(rng, n):
    g = small_grid(n, n + 1, b=3.0)
    U = random_field(rng, g.shape)
    V = random_field(rng, g.shape)
    for s in (1, 8):
        S, T = forward_transform(U, g, s), forward_transform(V, g, s)
        assert spectral_inner(S, T) == pytest.approx(inner(g, U, V), rel=1e-10)
        assert S.integrate() == pytest.approx(inner(g, U, U).real, rel=1e-10)
        np.testing.assert_allclose(inverse_transform(S), U, atol=1e-12 * np.abs(U).max())


def test_alpha_two_half_seminorm_direct_quadrature(rng):
    g = small_grid(6, 7, b=1.2, d=0.9, alpha=2.0)
    U = random_field(rng, g.shape)
    S = forward_transform(U, g)
    K1, K2 = np.meshgrid(S.k1, S.k2, indexing="ij")
    ref = np.sum((K1**2 + K2**2) * np.abs(direct_transform(U, g, S.k1, S.k2)) ** 2) * S.dk1 * S.dk2
    assert sobolev_norms(U, g, 2.0).semi_half ** 2 == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("alpha", [1.1, 1.5, 2.0])
def test_norm_identity(rng, alpha):
    g = small_grid(20, 17, b=2.0, alpha=alpha)
    n = sobolev_norms(random_field(rng, g.shape, smooth=True), g, alpha)
    assert n.full**2 == pytest.approx(n.l2**2 + n.semi_half**2 + n.semi_full**2, rel=1e-10)
    assert n.l2 >= 0 and n.semi_half >= 0 and n.semi_full >= 0


def test_alpha_domain(rng):
    g = small_grid()
    with pytest.raises(ValueError):
        sobolev_norms(g.zeros(), g, 1.0)


def test_embedding_constant_quadrature():
    # alpha = 2: int_0^K dk / (1 + k^2) = arctan K
    h = 0.1
    expected = 2 * np.arctan(np.pi / h) / (2 * np.pi)
    assert embedding_constant(2.0, h, h) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("alpha", [1.2, 1.7])
def test_sobolev_inequality(rng, alpha):
    g = small_grid(24, 20, b=2.0, d=2.0, alpha=alpha)
    C = embedding_constant(alpha, g.hx, g.hy)
    for i in range(20):
        U = random_field(rng, g.shape, smooth=bool(i % 2))
        assert np.abs(U).max() <= C * sobolev_norms(U, g, alpha).full + 1e-8


def test_seminorm_equivalence(rng):
    g = small_grid(32, 32, alpha=1.3)
    op = FracLaplacian(g)
    c = (2 / np.pi) ** 1.3
    for i in range(10):
        U = random_field(rng, g.shape, smooth=bool(i % 2))
        n = sobolev_norms(U, g, 1.3)
        q = inner(g, -op.apply(U), U).real
        assert c * n.semi_half**2 - 1e-8 <= q <= n.semi_half**2 + 1e-8
