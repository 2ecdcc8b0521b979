"""
Trapping potentials and their samples on a grid.
"""
from __future__ import annotations

import abc
from functools import lru_cache

import numpy as np

from .errors import ConfigError

__all__ = [
    "Potential",
    "HarmonicPotential",
    "LatticePotential",
    "StirrerPotential",
    "TabulatedPotential",
    "sample_potential",
]


def _gammas(values):
    gammas = tuple(float(g) for g in values)
    if not gammas or any(not g > 0 for g in gammas):
        raise ConfigError(
            f"Trap frequencies {gammas!r} must all be positive.",
            field="potential.gammas",
        )
    return gammas


class Potential(metaclass=abc.ABCMeta):
    @abc.abstractmethod
    def evaluate(self, coords):
        """
        Evaluate the potential at points.

        :param coords: one coordinate array per dimension, all of the same shape
        :type coords: tuple[numpy.ndarray, ...]
        :rtype: numpy.ndarray
        """

    @property
    @abc.abstractmethod
    def key(self):
        """
        Tuple identifying the potential, used for equality and hashing.
        """

    def __eq__(self, other):
        if self.__class__ is other.__class__:
            return self.key == other.key
        return NotImplemented

    def __hash__(self):
        return hash((self.__class__.__name__, self.key))


class HarmonicPotential(Potential):
    def __init__(self, gammas=(1.0,)):
        """
        ``V(x) = 1/2 sum_i gamma_i^2 x_i^2``.

        :param gammas: trap frequency per dimension
        :type gammas: Sequence[float]
        """
        self.gammas = _gammas(gammas)

    @property
    def key(self):
        return (self.gammas,)

    def __repr__(self):
        return f"{self.__class__.__name__}(gammas={self.gammas!r})"

    def _check_dim(self, coords):
        if len(coords) != len(self.gammas):
            raise ConfigError(
                f"{len(self.gammas)} trap frequencies given for a "
                f"{len(coords)}-dimensional grid.",
                field="potential.gammas",
            )

    def evaluate(self, coords):
        self._check_dim(coords)
        return 0.5 * sum(g * g * x * x for g, x in zip(self.gammas, coords))


class LatticePotential(HarmonicPotential):
    def __init__(self, gammas=(1.0,), depth=25.0, period=4.0):
        """
        Harmonic trap plus an optical lattice,
        ``V(x) = 1/2 sum_i gamma_i^2 x_i^2 + depth * sum_i sin^2(pi x_i / period)``.

        :param gammas: trap frequency per dimension
        :type gammas: Sequence[float]
        :param depth: lattice depth
        :type depth: float
        :param period: lattice period
        :type period: float
        """
        super().__init__(gammas)
        self.depth = float(depth)
        self.period = float(period)
        if not self.period > 0:
            raise ConfigError(
                f"Lattice period {period!r} must be positive.", field="potential.period"
            )

    @property
    def key(self):
        return (self.gammas, self.depth, self.period)

    def __repr__(self):
        return (
            f"{self.__class__.__name__}("
            f"gammas={self.gammas!r}, "
            f"depth={self.depth!r}, "
            f"period={self.period!r})"
        )

    def evaluate(self, coords):
        lattice = sum(np.sin(np.pi * x / self.period) ** 2 for x in coords)
        return super().evaluate(coords) + self.depth * lattice


class StirrerPotential(HarmonicPotential):
    def __init__(self, gammas=(1.0, 1.0, 2.0), omega0=4.0, width=1.0, r0=1.0):
        """
        Harmonic trap plus a far-blue detuned Gaussian beam along z,
        ``V = 1/2 sum_i gamma_i^2 x_i^2 + omega0 exp(-width ((x - r0)^2 + y^2))``.

        :param gammas: trap frequency per dimension (2 or 3 entries)
        :type gammas: Sequence[float]
        :param omega0: beam strength
        :type omega0: float
        :param width: inverse squared beam waist
        :type width: float
        :param r0: beam offset along x
        :type r0: float
        """
        super().__init__(gammas)
        if len(self.gammas) < 2:
            raise ConfigError(
                "The stirrer potential needs at least two dimensions.",
                field="potential.gammas",
            )
        self.omega0 = float(omega0)
        self.width = float(width)
        self.r0 = float(r0)

    @property
    def key(self):
        return (self.gammas, self.omega0, self.width, self.r0)

    def __repr__(self):
        return (
            f"{self.__class__.__name__}("
            f"gammas={self.gammas!r}, "
            f"omega0={self.omega0!r}, "
            f"width={self.width!r}, "
            f"r0={self.r0!r})"
        )

    def evaluate(self, coords):
        x, y = coords[0], coords[1]
        beam = self.omega0 * np.exp(-self.width * ((x - self.r0) ** 2 + y**2))
        return super().evaluate(coords) + beam


class TabulatedPotential(Potential):
    def __init__(self, values):
        """
        Potential given directly by its samples at the stored grid nodes.

        :param values: samples, shaped like the grid unknowns
        :type values: numpy.ndarray
        """
        values = np.array(values, dtype=float)
        if not np.all(np.isfinite(values)):
            raise ConfigError("Tabulated potential has non finite entries.", field="potential")
        values.setflags(write=False)
        self.values = values

    @property
    def key(self):
        return (id(self.values),)

    def __eq__(self, other):
        return self is other

    __hash__ = object.__hash__

    def __repr__(self):
        return f"{self.__class__.__name__}(shape={self.values.shape!r})"

    def evaluate(self, coords):
        if coords[0].shape != self.values.shape:
            raise ConfigError(
                f"Tabulated potential shape {self.values.shape!r} does not match "
                f"grid shape {coords[0].shape!r}.",
                field="potential",
            )
        return self.values


@lru_cache(maxsize=32)
def sample_potential(potential, grid):
    """
    Samples ``v_j = V(x_j)`` at the stored grid nodes.

    Results are cached per (potential, grid) and returned read-only.

    :type potential: Potential
    :type grid: bectools.groundstate.grid.Grid
    :rtype: numpy.ndarray
    """
    values = np.array(potential.evaluate(grid.mesh()), dtype=float)
    values = np.broadcast_to(values, grid.shape).copy()
    if not np.all(np.isfinite(values)):
        raise ConfigError(f"{potential!r} is not finite on the grid.", field="potential")
    values.setflags(write=False)
    return values
