"""Snapshot and diagnostics file formats.

Snapshot CSV
    Header ``j,k,x,y,re,im,abs``; one row per interior node, x index
    fastest. ``j``/``k`` are the 1-based node indices.

Snapshot binary (``.fsnap``), little-endian::

    offset  size  content
    0       6     magic b"FSNAP1"
    6       2     zero padding
    8       4     uint32 Mx   (cell count; Mx - 1 interior nodes)
    12      4     uint32 My
    16      8     float64 t
    24      8     zero padding
    32      ...   (Mx - 1)(My - 1) complex64 values (float32 re, float32 im),
                  x index fastest

Diagnostics CSV
    Header ``n,t,mass,energy,linf_error,iterations,residual``. Floats are
    written with 17 significant digits; missing values are empty.
"""

from __future__ import annotations

import csv
import struct
from pathlib import Path

import numpy as np

from fracschrod.diagnostics import DiagnosticsRecord
from fracschrod.grid import GridSpec

__all__ = [
    "DIAGNOSTICS_COLUMNS",
    "SNAPSHOT_MAGIC",
    "fmt",
    "read_diagnostics_csv",
    "read_snapshot_bin",
    "write_diagnostics_csv",
    "write_snapshot_bin",
    "write_snapshot_csv",
]

SNAPSHOT_MAGIC = b"FSNAP1"
_HEADER = struct.Struct("<6s2xIId8x")
DIAGNOSTICS_COLUMNS = ("n", "t", "mass", "energy", "linf_error", "iterations", "residual")


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def write_snapshot_csv(path, grid: GridSpec, U: np.ndarray) -> None:
    grid.check(U, "U")
    nx, ny = grid.shape
    xs, ys = grid.x(), grid.y()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("j", "k", "x", "y", "re", "im", "abs"))
        for k in range(ny):
            for j in range(nx):
                u = U[j, k]
                w.writerow((j + 1, k + 1, fmt(xs[j]), fmt(ys[k]),
                            fmt(u.real), fmt(u.imag), fmt(abs(u))))


def write_snapshot_bin(path, grid: GridSpec, U: np.ndarray, t: float) -> None:
    grid.check(U, "U")
    body = np.asarray(U, dtype="<c8").ravel(order="F")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(SNAPSHOT_MAGIC, grid.Mx, grid.My, float(t)))
        fh.write(body.tobytes())


def read_snapshot_bin(path) -> tuple[int, int, float, np.ndarray]:
    """Return ``(Mx, My, t, U)`` with ``U`` of shape ``(Mx - 1, My - 1)``."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise ValueError(f"{path}: truncated header")
    magic, mx, my, t = _HEADER.unpack_from(data)
    if magic != SNAPSHOT_MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    count = (mx - 1) * (my - 1)
    if len(data) != _HEADER.size + 8 * count:
        raise ValueError(f"{path}: expected {count} values")
    body = np.frombuffer(data, dtype="<c8", offset=_HEADER.size)
    return mx, my, t, body.reshape((mx - 1, my - 1), order="F").astype(np.complex128)


def _row(rec: DiagnosticsRecord):
    s = rec.solver
    return (fmt(rec.n), fmt(rec.t), fmt(rec.mass), fmt(rec.energy), fmt(rec.linf_error),
            fmt(s.iterations) if s else "", fmt(s.final_residual) if s else "")


def write_diagnostics_csv(path, records) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(DIAGNOSTICS_COLUMNS)
        for rec in records:
            w.writerow(_row(rec))


def read_diagnostics_csv(path) -> list[dict]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.append({k: (None if v == "" else (int(v) if k in ("n", "iterations") else float(v)))
                        for k, v in row.items()})
    return out
