"""
Computational domains and uniform tensor-product grids.

Grid counts are numbers of *intervals* N_i per dimension. Dirichlet grids
store only the N_i - 1 interior nodes (boundary values are zero); periodic
grids store nodes 0..N_i-1, node N_i being identified with node 0.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigError

__all__ = [
    "BoundaryCondition",
    "Domain",
    "Grid",
    "build_grid",
    "refine_grid",
    "node_coordinates",
]


class BoundaryCondition(enum.Enum):
    DIRICHLET = "dirichlet"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class Domain:
    """
    Box ``(a_1, b_1) x ... x (a_d, b_d)`` with a boundary condition kind.
    """

    bounds: tuple[tuple[float, float], ...]
    bc: BoundaryCondition = BoundaryCondition.DIRICHLET

    def __post_init__(self):
        bounds = tuple((float(a), float(b)) for a, b in self.bounds)
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "bc", BoundaryCondition(self.bc))

        if len(bounds) not in (1, 2, 3):
            raise ConfigError(
                f"Domain dimension must be 1, 2 or 3, got {len(bounds)}.",
                field="domain.bounds",
            )
        for a, b in bounds:
            if not (np.isfinite(a) and np.isfinite(b)) or not a < b:
                raise ConfigError(
                    f"Domain extent ({a!r}, {b!r}) must be finite and positive.",
                    field="domain.bounds",
                )

    @property
    def dim(self):
        return len(self.bounds)

    @property
    def lengths(self):
        return tuple(b - a for a, b in self.bounds)


@dataclass(frozen=True)
class Grid:
    domain: Domain
    n: tuple[int, ...]

    @property
    def dim(self):
        return self.domain.dim

    @property
    def bc(self):
        return self.domain.bc

    @property
    def periodic(self):
        return self.domain.bc is BoundaryCondition.PERIODIC

    @cached_property
    def h(self):
        return tuple(length / n for length, n in zip(self.domain.lengths, self.n))

    @cached_property
    def cell_volume(self):
        return float(np.prod(self.h))

    @property
    def shape(self):
        """
        Shape of the stored unknowns.

        :rtype: tuple[int, ...]
        """
        if self.periodic:
            return tuple(self.n)
        return tuple(n - 1 for n in self.n)

    @property
    def size(self):
        return int(np.prod(self.shape))

    def mesh(self):
        """
        Node coordinate arrays broadcast to the full grid shape (``ij`` indexing).

        :rtype: tuple[numpy.ndarray, ...]
        """
        return tuple(np.meshgrid(*node_coordinates(self), indexing="ij"))


def build_grid(domain, n, *, spectral=False):
    """
    Build a uniform grid on ``domain``.

    :param domain: computational domain
    :type domain: Domain
    :param n: interval count, either one int for every dimension or one per dimension
    :type n: int | Sequence[int]
    :param spectral: require even counts (sine and Fourier pseudospectral flavors)
    :type spectral: bool
    :rtype: Grid
    """
    if np.ndim(n) == 0:
        counts = (int(n),) * domain.dim
    else:
        counts = tuple(int(c) for c in n)

    if len(counts) != domain.dim:
        raise ConfigError(
            f"Expected {domain.dim} grid counts, got {len(counts)}.", field="grid.n"
        )
    for count in counts:
        if count < 2:
            raise ConfigError(f"Grid count {count!r} must be at least 2.", field="grid.n")
        if (spectral or domain.bc is BoundaryCondition.PERIODIC) and count % 2:
            raise ConfigError(
                f"Grid count {count!r} must be even for spectral discretizations.",
                field="grid.n",
            )
    return Grid(domain=domain, n=counts)


def refine_grid(grid):
    """
    Halve the mesh size in every dimension.

    The coarse node set is contained in the fine one: coarse node j
    becomes fine node 2j.

    :type grid: Grid
    :rtype: Grid
    """
    return Grid(domain=grid.domain, n=tuple(2 * n for n in grid.n))


def node_coordinates(grid):
    """
    Coordinates of the stored nodes along each dimension.

    Dirichlet grids give ``x_j = a + j h`` for j = 1..N-1, periodic
    grids for j = 0..N-1.

    :type grid: Grid
    :rtype: tuple[numpy.ndarray, ...]
    """
    start = 0 if grid.periodic else 1
    return tuple(
        a + h * np.arange(start, n, dtype=float)
        for (a, _), h, n in zip(grid.domain.bounds, grid.h, grid.n)
    )
