"""Matrix-free 2D discrete fractional Laplacian.

On the interior grid the operator is the Kronecker sum

    D = I_{My-1} (x) C_x + C_y (x) I_{Mx-1},   (L_x + L_y) U = -D vec(U),

where C_x, C_y are symmetric Toeplitz matrices built from the weights.
Each line product is done by embedding the Toeplitz matrix in a circulant
and diagonalising it with the FFT.
"""

from __future__ import annotations

import os

import numpy as np
import scipy.fft as sfft

from fracschrod import _kernels
from fracschrod.coeffs import FracWeights, compute_weights
from fracschrod.grid import GridSpec

__all__ = [
    "DEFAULT_DENSE_CAP",
    "DenseCapError",
    "FracLaplacian",
    "assemble_dense",
    "dense_cap",
    "energy_quadratic_form",
    "inner",
]

DEFAULT_DENSE_CAP = 4096

# Below this many multiply-adds per apply the direct sum beats two FFT passes.
_DIRECT_WORK_LIMIT = 60_000


class DenseCapError(ValueError):
    pass


def dense_cap() -> int:
    """Unknown-count cap for dense assembly, ``FRACSCHROD_DENSE_CAP`` overrides."""
    raw = os.environ.get("FRACSCHROD_DENSE_CAP")
    return int(raw) if raw else DEFAULT_DENSE_CAP


def inner(grid: GridSpec, U: np.ndarray, V: np.ndarray) -> complex:
    """Discrete inner product h_x h_y sum U V*."""
    return complex(grid.cell_area * np.vdot(V, U))


def _circulant_symbol(col: np.ndarray, length: int) -> np.ndarray:
    """Eigenvalues of the circulant of ``length`` embedding symmetric Toeplitz(col)."""
    n = col.size
    c = np.zeros(length)
    c[:n] = col
    c[length - n + 1:] = col[:0:-1]
    return sfft.fft(c).real


class FracLaplacian:
    """Apply L_x^alpha + L_y^alpha to interior fields of ``grid``.

    Parameters
    ----------
    grid : GridSpec
    weights : FracWeights, optional
        Must hold at least ``max(Mx, My) - 1`` entries. Computed if omitted.
    method : {"auto", "fft", "direct"}
        ``"direct"`` sums the Toeplitz products explicitly (small grids),
        ``"auto"`` picks by work estimate.
    workers : int, optional
        Thread count handed to ``scipy.fft``.
    """

    def __init__(self, grid: GridSpec, weights: FracWeights | None = None,
                 method: str = "auto", workers: int | None = None):
        nx, ny = grid.shape
        need = max(nx, ny)
        if weights is None:
            weights = compute_weights(grid.alpha, need)
        if weights.alpha != grid.alpha:
            raise ValueError("weights alpha does not match grid alpha")
        if weights.weights.size < need:
            raise ValueError(f"need {need} weights, got {weights.weights.size}")
        if method not in ("auto", "fft", "direct"):
            raise ValueError(f"unknown method {method!r}")
        if method == "auto":
            method = "direct" if nx * ny * (nx + ny) <= _DIRECT_WORK_LIMIT else "fft"
        self.grid = grid
        self.weights = weights
        self.method = method
        self.workers = workers
        # Scaled first columns of C_x and C_y.
        self.wx = np.ascontiguousarray(weights.weights[:nx] / grid.hx**grid.alpha)
        self.wy = np.ascontiguousarray(weights.weights[:ny] / grid.hy**grid.alpha)
        self._nfx = sfft.next_fast_len(2 * nx - 1)
        self._nfy = sfft.next_fast_len(2 * ny - 1)
        self._eigx = _circulant_symbol(self.wx, self._nfx)
        self._eigy = _circulant_symbol(self.wy, self._nfy)

    @property
    def shape(self) -> tuple[int, int]:
        return self.grid.shape

    def _axis_product(self, U, axis, eig, nfft):
        # The Toeplitz factor is real: transform Re and Im as one real batch.
        n = U.shape[axis]
        stacked = np.concatenate([U.real, U.imag], axis=1 - axis)
        F = sfft.rfft(stacked, n=nfft, axis=axis, workers=self.workers)
        F *= eig[: nfft // 2 + 1, None] if axis == 0 else eig[None, : nfft // 2 + 1]
        out = sfft.irfft(F, n=nfft, axis=axis, workers=self.workers, overwrite_x=True)
        out = out[:n] if axis == 0 else out[:, :n]
        m = U.shape[1 - axis]
        if axis == 0:
            return out[:, :m] + 1j * out[:, m:]
        return out[:m] + 1j * out[m:]

    def apply(self, U: np.ndarray) -> np.ndarray:
        """Return (L_x + L_y) U."""
        self.grid.check(U, "U")
        if self.method == "direct":
            return _kernels.toeplitz_direct(U, self.wx, self.wy)
        U = np.asarray(U, dtype=np.complex128)
        return -(self._axis_product(U, 0, self._eigx, self._nfx)
                 + self._axis_product(U, 1, self._eigy, self._nfy))

    __call__ = apply

    def toeplitz_matrices(self) -> tuple[np.ndarray, np.ndarray]:
        """Dense C_x and C_y."""
        jx = np.arange(self.wx.size)
        jy = np.arange(self.wy.size)
        return (self.wx[np.abs(jx[:, None] - jx[None, :])],
                self.wy[np.abs(jy[:, None] - jy[None, :])])


def assemble_dense(op: FracLaplacian, cap: int | None = None) -> np.ndarray:
    """Dense D = -(L_x + L_y) in x-fastest ordering.

    Raises
    ------
    DenseCapError
        If the unknown count exceeds ``cap`` (default :func:`dense_cap`).
    """
    cap = dense_cap() if cap is None else cap
    n = op.grid.size
    if n > cap:
        raise DenseCapError(f"{n} unknowns exceeds dense cap {cap} (FRACSCHROD_DENSE_CAP)")
    Cx, Cy = op.toeplitz_matrices()
    nx, ny = op.shape
    return np.kron(np.eye(ny), Cx) + np.kron(Cy, np.eye(nx))


def energy_quadratic_form(op: FracLaplacian, U: np.ndarray) -> float:
    """||Lambda^alpha U||^2 = Re (-(L_x + L_y) U, U)."""
    LU = op.apply(U)
    return op.grid.cell_area * -float(np.vdot(U, LU).real) + 0.0  # no signed zero
