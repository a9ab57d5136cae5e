"""Space-time mesh description."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["GridSpec"]


@dataclass(frozen=True)
class GridSpec:
    """Uniform mesh on [a, b] x [c, d] x [0, T].

    Fields are complex arrays of shape ``(Mx - 1, My - 1)`` holding the
    interior nodes, ``U[j - 1, k - 1] = U_{j,k}``; the boundary is zero and
    never stored. Flattening to a vector uses x-fastest order,
    ``U.ravel(order="F")``.
    """

    a: float
    b: float
    c: float
    d: float
    Mx: int
    My: int
    alpha: float
    tau: float
    T: float
    N: int = field(init=False)

    def __post_init__(self):
        if not (self.b > self.a and self.d > self.c):
            raise ValueError("domain must satisfy b > a and d > c")
        if int(self.Mx) != self.Mx or int(self.My) != self.My or self.Mx < 2 or self.My < 2:
            raise ValueError(f"Mx, My must be integers >= 2, got {self.Mx}, {self.My}")
        if not (1.0 < self.alpha <= 2.0):
            raise ValueError(f"alpha must lie in (1, 2], got {self.alpha!r}")
        if not (self.tau > 0 and self.T > 0):
            raise ValueError("tau and T must be positive")
        n = round(self.T / self.tau)
        if n < 1 or abs(n * self.tau - self.T) > 1e-9 * self.T:
            raise ValueError(f"T={self.T} is not an integer multiple of tau={self.tau}")
        object.__setattr__(self, "Mx", int(self.Mx))
        object.__setattr__(self, "My", int(self.My))
        object.__setattr__(self, "N", int(n))

    @classmethod
    def uniform(cls, a, b, c, d, h, alpha, tau, T):
        """Grid with mesh size ``h`` on both axes; ``h`` must divide the sides."""
        mx = round((b - a) / h)
        my = round((d - c) / h)
        if abs(mx * h - (b - a)) > 1e-9 * (b - a) or abs(my * h - (d - c)) > 1e-9 * (d - c):
            raise ValueError(f"h={h} does not divide the domain")
        return cls(a, b, c, d, mx, my, alpha, tau, T)

    @property
    def hx(self) -> float:
        return (self.b - self.a) / self.Mx

    @property
    def hy(self) -> float:
        return (self.d - self.c) / self.My

    @property
    def shape(self) -> tuple[int, int]:
        return (self.Mx - 1, self.My - 1)

    @property
    def size(self) -> int:
        return (self.Mx - 1) * (self.My - 1)

    @property
    def cell_area(self) -> float:
        return self.hx * self.hy

    def x(self) -> np.ndarray:
        return self.a + self.hx * np.arange(1, self.Mx)

    def y(self) -> np.ndarray:
        return self.c + self.hy * np.arange(1, self.My)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Interior node coordinates, ``indexing="ij"``."""
        return np.meshgrid(self.x(), self.y(), indexing="ij")

    def zeros(self) -> np.ndarray:
        return np.zeros(self.shape, dtype=np.complex128)

    def check(self, U: np.ndarray, name: str = "field") -> np.ndarray:
        if np.shape(U) != self.shape:
            raise ValueError(f"{name} has shape {np.shape(U)}, grid expects {self.shape}")
        return U
