"""
Binary grid-data files.

Layout, all little endian::

    b"GPEGRID1"               magic and format version
    uint32 dim, bc, field     bc: 0 dirichlet, 1 periodic; field: 0 real, 1 complex
    int64  counts[dim]        interval counts N_i
    float64 bounds[dim][2]    (a_i, b_i)
    float64 data[...]         grid function values in C order,
                              re/im pairs for complex fields
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import GridDataError
from .grid import BoundaryCondition, Domain, Grid, build_grid

__all__ = ["MAGIC", "GridData", "write_grid_data", "read_grid_data", "load_state"]

logger = logging.getLogger(__name__)

MAGIC = b"GPEGRID1"

_HEADER = np.dtype([("magic", "S8"), ("dim", "<u4"), ("bc", "<u4"), ("field", "<u4")])
_BC_CODES = {BoundaryCondition.DIRICHLET: 0, BoundaryCondition.PERIODIC: 1}
_BC_FROM_CODE = {v: k for k, v in _BC_CODES.items()}


@dataclass(frozen=True)
class GridData:
    grid: Grid
    values: np.ndarray

    @property
    def is_complex(self):
        return np.iscomplexobj(self.values)


def write_grid_data(path, grid, values):
    """
    Write a grid function.

    :param path: destination file
    :param grid: grid the values live on
    :type grid: bectools.groundstate.grid.Grid
    :param values: grid function, shaped like ``grid.shape``
    :type values: numpy.ndarray
    """
    values = np.asarray(values)
    if values.shape != grid.shape:
        raise ValueError(f"Values of shape {values.shape!r} do not fit grid shape {grid.shape!r}.")
    is_complex = np.iscomplexobj(values)

    header = np.zeros(1, dtype=_HEADER)
    header["magic"] = MAGIC
    header["dim"] = grid.dim
    header["bc"] = _BC_CODES[grid.bc]
    header["field"] = int(is_complex)
    counts = np.asarray(grid.n, dtype="<i8")
    bounds = np.asarray(grid.domain.bounds, dtype="<f8")
    if is_complex:
        data = np.ascontiguousarray(values, dtype="<c16").view("<f8")
    else:
        data = np.ascontiguousarray(values, dtype="<f8")

    with open(path, "wb") as f:
        for block in (header, counts, bounds, data):
            f.write(block.tobytes())


def read_grid_data(path):
    """
    Read a grid function written by :func:`write_grid_data`.

    :rtype: GridData
    """
    with open(path, "rb") as f:
        raw = f.read()

    if len(raw) < _HEADER.itemsize or raw[:8] != MAGIC:
        raise GridDataError(f"{str(path)!r} is not a grid-data file.")
    header = np.frombuffer(raw, dtype=_HEADER, count=1)[0]
    dim = int(header["dim"])
    bc_code = int(header["bc"])
    field = int(header["field"])
    if dim not in (1, 2, 3) or bc_code not in _BC_FROM_CODE or field not in (0, 1):
        raise GridDataError(f"Corrupt grid-data header in {str(path)!r}.")

    offset = _HEADER.itemsize
    need = offset + 8 * dim + 16 * dim
    if len(raw) < need:
        raise GridDataError(f"Truncated grid-data header in {str(path)!r}.")
    counts = np.frombuffer(raw, dtype="<i8", count=dim, offset=offset)
    bounds = np.frombuffer(raw, dtype="<f8", count=2 * dim, offset=offset + 8 * dim)

    try:
        domain = Domain(
            bounds=tuple(zip(bounds[0::2], bounds[1::2])), bc=_BC_FROM_CODE[bc_code]
        )
        grid = build_grid(domain, tuple(int(c) for c in counts))
    except ValueError as exc:
        raise GridDataError(f"Invalid grid in {str(path)!r}: {exc}") from exc

    entries = grid.size * (2 if field else 1)
    if len(raw) - need != 8 * entries:
        raise GridDataError(
            f"{str(path)!r} holds {(len(raw) - need) // 8} values, expected {entries}."
        )
    data = np.frombuffer(raw, dtype="<f8", count=entries, offset=need)
    if field:
        values = data.view("<c16").astype(complex)
    else:
        values = data.astype(float)
    return GridData(grid=grid, values=values.reshape(grid.shape))


def load_state(problem, path):
    """
    Read a grid function and turn it into a unit vector for ``problem``.

    :type problem: bectools.groundstate.discretization.DiscreteProblem
    :rtype: numpy.ndarray
    """
    data = read_grid_data(path)
    if data.grid != problem.grid:
        raise GridDataError(
            f"Grid in {str(path)!r} ({data.grid.n!r}, {data.grid.domain.bounds!r}) "
            f"does not match the problem grid ({problem.grid.n!r}, "
            f"{problem.grid.domain.bounds!r})."
        )
    values = data.values
    if data.is_complex and problem.field_kind.value == "real":
        if np.max(np.abs(values.imag)) > 0:
            raise GridDataError(f"{str(path)!r} holds a complex state for a real problem.")
        values = values.real
    x = np.sqrt(problem.cell_volume) * values.astype(problem.dtype)
    norm = float(np.sqrt(np.real(np.vdot(x, x))))
    if not norm > 0:
        raise GridDataError(f"{str(path)!r} holds a zero state.")
    if abs(norm - 1.0) > 1e-10:
        logger.info("Renormalizing state read from %s (norm %.6g).", path, norm)
    return x / norm
