"""Semi-discrete Fourier transform and discrete fractional Sobolev norms.

A grid function is extended by zero outside the interior and transformed by

    V^(k1, k2) = (h_x h_y / 2 pi) sum_{j,k} V_{j,k} exp(-i k1 x_j - i k2 y_k).

The transform is sampled on the lattice k1 = 2 pi m / (s (b - a)),
m = -P/2 .. ceil(P/2) - 1 with P = s M_x (same for k2), i.e. the FFT
frequencies of a length-P transform with spacing h_x. ``s`` is the
oversampling factor. Frequency integrals over the band
[-pi/h_x, pi/h_x) x [-pi/h_y, pi/h_y) use the rectangle rule on this
lattice, which makes Parseval's identity exact to roundoff for any s >= 1
because P is never smaller than the support length M_x - 1.

The weighted integrals are not exact: |k|^alpha has a kink at k = 0, and
s = 1 can overstate seminorms of smooth fields by a factor of two. The
default s = 8 keeps that quadrature error below about 0.5 %.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi, sqrt
from typing import NamedTuple

import numpy as np
import scipy.fft as sfft
from scipy.integrate import quad

from fracschrod.grid import GridSpec

__all__ = [
    "SobolevNorms",
    "SpectralField",
    "embedding_constant",
    "forward_transform",
    "inverse_transform",
    "sobolev_norms",
    "spectral_inner",
]


@dataclass(frozen=True)
class SpectralField:
    """Samples of V^ with ``coefficients[m1, m2]`` at ``(k1[m1], k2[m2])``.

    Frequencies are in increasing order.
    """

    coefficients: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    grid: GridSpec
    oversample: int = 8

    @property
    def dk1(self) -> float:
        return 2.0 * pi / (self.k1.size * self.grid.hx)

    @property
    def dk2(self) -> float:
        return 2.0 * pi / (self.k2.size * self.grid.hy)

    def integrate(self, weight: np.ndarray | float = 1.0) -> float:
        """Rectangle-rule integral of weight * |V^|^2 over the band."""
        c = self.coefficients
        return float(np.sum(weight * (c.real**2 + c.imag**2)) * self.dk1 * self.dk2)


class SobolevNorms(NamedTuple):
    l2: float
    semi_half: float
    semi_full: float
    full: float


def _frequencies(P, h):
    return sfft.fftshift(sfft.fftfreq(P, d=h)) * 2.0 * pi


def forward_transform(U: np.ndarray, grid: GridSpec, oversample: int = 8) -> SpectralField:
    grid.check(U, "U")
    if oversample < 1:
        raise ValueError("oversample must be >= 1")
    Px, Py = oversample * grid.Mx, oversample * grid.My
    padded = np.zeros((Px, Py), dtype=np.complex128)
    # array index j holds node x_j = a + j h_x; index 0 is the (zero) boundary
    padded[1 : grid.Mx, 1 : grid.My] = U
    F = sfft.fftshift(sfft.fft2(padded))
    k1 = _frequencies(Px, grid.hx)
    k2 = _frequencies(Py, grid.hy)
    phase = np.exp(-1j * k1 * grid.a)[:, None] * np.exp(-1j * k2 * grid.c)[None, :]
    coeffs = (grid.cell_area / (2.0 * pi)) * phase * F
    return SpectralField(coeffs, k1, k2, grid, oversample)


def inverse_transform(S: SpectralField) -> np.ndarray:
    """Rectangle-rule inversion back to the interior nodes."""
    g = S.grid
    phase = np.exp(1j * S.k1 * g.a)[:, None] * np.exp(1j * S.k2 * g.c)[None, :]
    F = sfft.ifftshift(S.coefficients * phase) * (2.0 * pi / g.cell_area)
    padded = sfft.ifft2(F)
    return padded[1 : g.Mx, 1 : g.My]


def spectral_inner(S: SpectralField, T: SpectralField) -> complex:
    """int U^ conj(V^) over the band (Parseval form of (U, V))."""
    return complex(np.sum(S.coefficients * np.conj(T.coefficients)) * S.dk1 * S.dk2)


def sobolev_norms(U: np.ndarray, grid: GridSpec, alpha: float, oversample: int = 8) -> SobolevNorms:
    """||U||_2, |U|_{H^{alpha/2}}, |U|_{H^alpha} and ||U||_{H^alpha}."""
    if not (1.0 < alpha <= 2.0):
        raise ValueError(f"alpha must lie in (1, 2], got {alpha!r}")
    S = forward_transform(U, grid, oversample)
    a1 = np.abs(S.k1)[:, None] ** alpha
    a2 = np.abs(S.k2)[None, :] ** alpha
    half = a1 + a2
    full_semi = 2.0 * a1 * a2 + a1**2 + a2**2
    l2 = S.integrate()
    sh = S.integrate(half)
    sf = S.integrate(full_semi)
    full = S.integrate(1.0 + half + full_semi)
    return SobolevNorms(sqrt(l2), sqrt(sh), sqrt(sf), sqrt(full))


def embedding_constant(alpha: float, hx: float, hy: float) -> float:
    """C_alpha in ||U||_inf <= C_alpha ||U||_{H^alpha}.

    (1 / 2 pi) * sqrt(int int dk1 dk2 / ((1 + |k1|^alpha)(1 + |k2|^alpha)))
    over the band; the integrand factorises into two 1D quadratures.
    """

    def axis(h):
        val, _ = quad(lambda k: 1.0 / (1.0 + k**alpha), 0.0, pi / h, limit=200)
        return 2.0 * val

    return sqrt(axis(hx) * axis(hy)) / (2.0 * pi)
