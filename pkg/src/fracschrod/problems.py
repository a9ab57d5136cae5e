"""Test problems: a manufactured solution on [0, 2]^2 and a Gaussian pulse.

The manufactured solution is u = i sin(t) X(x) X(y) with X(x) = x^4 (2-x)^4.
Its Riesz derivative is evaluated in closed form: X is expanded in powers
of x (and, for the right-sided derivative, of 2 - x) and each power is
differentiated with

    D^alpha s^p = Gamma(p+1) / Gamma(p+1-alpha) s^(p-alpha).
"""

from __future__ import annotations

from math import cos, gamma, pi, sqrt

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as P

from fracschrod.stepper import ProblemDef

__all__ = [
    "EXAMPLE1_DOMAIN",
    "EXAMPLE2_DOMAIN",
    "bump",
    "bump_riesz",
    "example1",
    "example2",
    "gaussian",
    "riesz_of_polynomial",
    "zero_problem",
]

EXAMPLE1_DOMAIN = (0.0, 2.0, 0.0, 2.0)
EXAMPLE2_DOMAIN = (-5.0, 5.0, -5.0, 5.0)

# x^4 (2 - x)^4 = 16x^4 - 32x^5 + 24x^6 - 8x^7 + x^8
_BUMP = P.polymul([0, 0, 0, 0, 1], P.polypow([2, -1], 4))


def riesz_of_polynomial(coef, alpha: float, left: float, right: float, x):
    """Riesz derivative of a polynomial supported on [left, right].

    ``coef`` are power-series coefficients in (x - left). The function is
    taken as zero outside [left, right], so both Riemann-Liouville integrals
    start at the support ends. Only coefficients with index >= 2 may be
    nonzero; the zero-extended function must vanish at both ends.
    """
    coef = np.asarray(coef, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(coef[:2] != 0):
        raise ValueError("polynomial must vanish to second order at the left end")
    # expansion of the same polynomial in powers of (right - x)
    width = right - left
    mirrored = Polynomial(coef)(Polynomial([width, -1.0])).coef
    mirrored = np.pad(mirrored, (0, coef.size - mirrored.size))
    s = np.clip(x - left, 0.0, None)
    r = np.clip(right - x, 0.0, None)
    total = np.zeros_like(x)
    for p in range(2, coef.size):
        fac = gamma(p + 1.0) / gamma(p + 1.0 - alpha)
        total += fac * (coef[p] * s ** (p - alpha) + mirrored[p] * r ** (p - alpha))
    return -total / (2.0 * cos(alpha * pi / 2.0))


def bump(x):
    return P.polyval(np.asarray(x, dtype=float), _BUMP)


def bump_riesz(alpha: float, x):
    return riesz_of_polynomial(_BUMP, alpha, 0.0, 2.0, x)


def example1(alpha: float) -> ProblemDef:
    """Manufactured problem on [0, 2]^2 with exact u = i sin(t) X(x) X(y)."""

    def exact(x, y, t):
        return 1j * np.sin(t) * bump(x) * bump(y)

    def initial(x, y):
        return exact(x, y, 0.0)

    def source(x, y, t):
        X, Y = bump(x), bump(y)
        LX, LY = bump_riesz(alpha, x), bump_riesz(alpha, y)
        s = np.sin(t)
        # g = u_t - i L u - i |u|^2 u
        return 1j * np.cos(t) * X * Y + s * (LX * Y + X * LY) + s**3 * (X * Y) ** 3

    return ProblemDef(initial=initial, source=source, exact=exact, name="example1")


def example2() -> ProblemDef:
    """Gaussian pulse (2/sqrt(pi)) exp(-(x^2 + y^2)) on [-5, 5]^2."""

    def initial(x, y):
        return (2.0 / sqrt(pi)) * np.exp(-(x**2 + y**2)) + 0j

    # the Gaussian is 1.6e-11 on the boundary of [-5, 5]^2
    return ProblemDef(initial=initial, name="example2", boundary_tol=1e-10)


def zero_problem() -> ProblemDef:
    return ProblemDef(initial=lambda x, y: np.zeros(np.broadcast(x, y).shape, dtype=complex),
                      name="zero")


def gaussian(amplitude: float = 1.0, x0: float = 0.0, y0: float = 0.0, width: float = 1.0,
             boundary_tol: float = 1e-12) -> ProblemDef:
    def initial(x, y):
        return amplitude * np.exp(-((x - x0) ** 2 + (y - y0) ** 2) / width**2) + 0j

    return ProblemDef(initial=initial, name="gaussian", boundary_tol=boundary_tol)
