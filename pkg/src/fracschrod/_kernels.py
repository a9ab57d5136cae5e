"""Hot loops, compiled with numba when available.

Every kernel has a pure-numpy twin. The numpy path is selected when numba
is missing or when ``FRACSCHROD_NUMBA=0`` is set in the environment before
import; :func:`set_backend` switches at runtime (used by the benchmark).
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

__all__ = [
    "backend",
    "set_backend",
    "weight_recurrence",
    "toeplitz_direct",
    "system_combine",
    "rhs_combine",
    "quartic_sum",
]


# ---------------------------------------------------------------- numpy path


def _np_weight_recurrence(alpha, c0, count):
    w = np.empty(count)
    w[0] = c0
    for s in range(1, count):
        w[s] = (1.0 - (alpha + 1.0) / (alpha / 2.0 + s)) * w[s - 1]
    return w


def _np_toeplitz_direct(U, wx, wy):
    nx, ny = U.shape
    jx = np.arange(nx)
    jy = np.arange(ny)
    Cx = wx[np.abs(jx[:, None] - jx[None, :])]
    Cy = wy[np.abs(jy[:, None] - jy[None, :])]
    return -(Cx @ U + U @ Cy)


def _np_system_combine(V, LV, pot, inv_tau):
    return inv_tau * V - 1j * (pot * V + LV)


def _np_rhs_combine(W, LW, pot, inv_tau, src):
    return inv_tau * W + 1j * (pot * W + LW) + src


def _np_quartic_sum(U, V):
    return float(np.sum((U.real**2 + U.imag**2) * (V.real**2 + V.imag**2)))


# ---------------------------------------------------------------- numba path

if numba is not None:
    _jit = numba.njit(cache=True, fastmath=False)

    @_jit
    def _nb_weight_recurrence(alpha, c0, count):
        w = np.empty(count)
        w[0] = c0
        for s in range(1, count):
            w[s] = (1.0 - (alpha + 1.0) / (alpha / 2.0 + s)) * w[s - 1]
        return w

    @_jit
    def _nb_toeplitz_direct(U, wx, wy):
        nx, ny = U.shape
        re = np.zeros((nx, ny))
        im = np.zeros((nx, ny))
        ur = U.real.copy()
        ui = U.imag.copy()
        # x direction: rows of U are contiguous, accumulate whole rows
        for j in range(nx):
            for s in range(nx):
                w = wx[abs(j - s)]
                for k in range(ny):
                    re[j, k] += w * ur[s, k]
                    im[j, k] += w * ui[s, k]
        # y direction: dot products along contiguous rows
        for j in range(nx):
            for k in range(ny):
                ar = 0.0
                ai = 0.0
                for s in range(ny):
                    w = wy[abs(k - s)]
                    ar += w * ur[j, s]
                    ai += w * ui[j, s]
                re[j, k] += ar
                im[j, k] += ai
        out = np.empty((nx, ny), dtype=np.complex128)
        for j in range(nx):
            for k in range(ny):
                out[j, k] = complex(-re[j, k], -im[j, k])
        return out

    @_jit
    def _nb_system_combine(V, LV, pot, inv_tau):
        nx, ny = V.shape
        out = np.empty((nx, ny), dtype=np.complex128)
        for j in range(nx):
            for k in range(ny):
                out[j, k] = inv_tau * V[j, k] - 1j * (pot[j, k] * V[j, k] + LV[j, k])
        return out

    @_jit
    def _nb_rhs_combine(W, LW, pot, inv_tau, src):
        nx, ny = W.shape
        out = np.empty((nx, ny), dtype=np.complex128)
        for j in range(nx):
            for k in range(ny):
                out[j, k] = inv_tau * W[j, k] + 1j * (pot[j, k] * W[j, k] + LW[j, k]) + src[j, k]
        return out

    @_jit
    def _nb_quartic_sum(U, V):
        acc = 0.0
        nx, ny = U.shape
        for j in range(nx):
            for k in range(ny):
                u = U[j, k]
                v = V[j, k]
                acc += (u.real * u.real + u.imag * u.imag) * (v.real * v.real + v.imag * v.imag)
        return acc


_NAMES = ("weight_recurrence", "toeplitz_direct", "system_combine", "rhs_combine", "quartic_sum")
_impl: dict = {}
_backend = ""


def set_backend(name: str) -> None:
    """Select ``"numba"`` or ``"numpy"`` kernels for subsequent calls."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and numba is None:
        raise RuntimeError("numba is not installed")
    prefix = "_nb_" if name == "numba" else "_np_"
    for n in _NAMES:
        _impl[n] = globals()[prefix + n]
    _backend = name


def backend() -> str:
    return _backend


def weight_recurrence(alpha: float, c0: float, count: int) -> np.ndarray:
    return _impl["weight_recurrence"](alpha, c0, count)


def toeplitz_direct(U: np.ndarray, wx: np.ndarray, wy: np.ndarray) -> np.ndarray:
    """(L_x + L_y) U by direct summation; ``wx``, ``wy`` are pre-scaled."""
    return _impl["toeplitz_direct"](np.ascontiguousarray(U, dtype=np.complex128), wx, wy)


def system_combine(V, LV, pot, inv_tau):
    """(1/tau) V - i pot V - i LV."""
    return _impl["system_combine"](V, LV, pot, inv_tau)


def rhs_combine(W, LW, pot, inv_tau, src):
    """(1/tau) W + i pot W + i LW + src."""
    return _impl["rhs_combine"](W, LW, pot, inv_tau, src)


def quartic_sum(U, V) -> float:
    """sum |U|^2 |V|^2."""
    return float(_impl["quartic_sum"](U, V))


_want = os.environ.get("FRACSCHROD_NUMBA", "1").strip().lower()
set_backend("numba" if numba is not None and _want not in ("0", "false", "no", "off") else "numpy")
