"""Fractional centered-difference weights for the Riesz derivative.

The weights define the second-order stencil

    L^alpha f(x) ~ -h^-alpha * sum_j c_j f(x - j h),

with c_0 > 0, c_j = c_-j <= 0 for j != 0 and sum_j c_j e^{i j theta}
equal to |2 sin(theta/2)|^alpha.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, lgamma

import numpy as np

from fracschrod import _kernels

__all__ = ["FracWeights", "compute_weights", "generating_function_residual"]


@dataclass(frozen=True)
class FracWeights:
    """Half-sequence c_0..c_J of the symmetric weight sequence.

    ``weights[j]`` holds c_j = c_-j. The array is read-only.
    """

    alpha: float
    weights: np.ndarray

    @property
    def J(self) -> int:
        return self.weights.size - 1

    def full(self) -> np.ndarray:
        """Return the two-sided sequence c_-J..c_J."""
        w = self.weights
        return np.concatenate([w[:0:-1], w])

    def scaled(self, h: float) -> np.ndarray:
        """Half-sequence divided by h**alpha."""
        return self.weights / h**self.alpha


def _check_alpha(alpha: float) -> None:
    if not (1.0 < alpha <= 2.0):
        raise ValueError(f"alpha must lie in (1, 2], got {alpha!r}")


def _c0(alpha: float) -> float:
    # Gamma(3) / Gamma(2)^2 = 2 exactly; lgamma keeps other alphas stable.
    if alpha == 2.0:
        return 2.0
    return exp(lgamma(alpha + 1.0) - 2.0 * lgamma(alpha / 2.0 + 1.0))


def compute_weights(alpha: float, count: int) -> FracWeights:
    """Weights c_0..c_{count-1} by the multiplicative recurrence.

    Parameters
    ----------
    alpha : float
        Fractional order in (1, 2].
    count : int
        Number of stored weights (J + 1), at least 1.

    Notes
    -----
    Only c_0 is evaluated from Gamma functions; for s >= 1

        c_s = (1 - (alpha + 1) / (alpha/2 + s)) c_{s-1}.
    """
    _check_alpha(alpha)
    count = int(count)
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    w = _kernels.weight_recurrence(float(alpha), _c0(float(alpha)), count)
    w.setflags(write=False)
    return FracWeights(alpha=float(alpha), weights=w)


def generating_function_residual(w: FracWeights, theta: float) -> float:
    """|sum_{|j|<=J} c_j e^{i j theta} - |2 sin(theta/2)|^alpha|.

    The sequence is symmetric, so the sum is real:
    c_0 + 2 sum_{j>=1} c_j cos(j theta).
    """
    c = w.weights
    j = np.arange(1, c.size)
    # Summation from the small tail upward keeps the partial sums accurate.
    series = c[0] + 2.0 * np.sum((c[1:] * np.cos(j * theta))[::-1])
    target = abs(2.0 * np.sin(theta / 2.0)) ** w.alpha
    return float(abs(series - target))

