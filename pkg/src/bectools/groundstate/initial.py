"""
Initial data: the Thomas-Fermi profile, Gaussian and vortex ansatzes and
seeds for asymmetric excited states.

Every constructor returns a unit vector in the unified scaling.
"""
from __future__ import annotations

import enum
import logging
import math

import numpy as np

from .discretization import FieldKind
from .errors import ConfigError
from .gridio import load_state
from .potentials import HarmonicPotential

__all__ = ["InitKind", "thomas_fermi_mu", "thomas_fermi", "ansatz", "initial_state", "normalize"]

logger = logging.getLogger(__name__)


class InitKind(enum.Enum):
    THOMAS_FERMI = "tf"
    GAUSSIAN_A = "a"
    VORTEX_B = "b"
    VORTEX_BBAR = "bbar"
    MIX_C = "c"
    MIX_CBAR = "cbar"
    OMEGA_MIX_D = "d"
    OMEGA_MIX_DBAR = "dbar"
    EXCITED_X = "x"
    EXCITED_Y = "y"
    EXCITED_XY = "xy"
    FROM_FILE = "file"


_VORTEX_KINDS = {
    InitKind.VORTEX_B,
    InitKind.VORTEX_BBAR,
    InitKind.MIX_C,
    InitKind.MIX_CBAR,
    InitKind.OMEGA_MIX_D,
    InitKind.OMEGA_MIX_DBAR,
}
_CONJUGATES = {
    InitKind.VORTEX_BBAR: InitKind.VORTEX_B,
    InitKind.MIX_CBAR: InitKind.MIX_C,
    InitKind.OMEGA_MIX_DBAR: InitKind.OMEGA_MIX_D,
}


def normalize(problem, phi):
    """
    Scale a grid function sample to a unit vector.

    :rtype: numpy.ndarray
    """
    x = np.sqrt(problem.cell_volume) * np.asarray(phi, dtype=problem.dtype)
    norm = float(np.sqrt(np.real(np.vdot(x, x))))
    if not norm > 0:
        raise ConfigError("Initial data vanishes on every grid node.", field="init.kind")
    return x / norm


def thomas_fermi_mu(beta, gammas):
    """
    Thomas-Fermi chemical potential of a harmonic trap.

    :param beta: interaction strength, positive
    :param gammas: trap frequencies, one per dimension
    :rtype: float
    """
    g = math.prod(gammas)
    dim = len(gammas)
    if dim == 1:
        return 0.5 * (1.5 * beta * g) ** (2.0 / 3.0)
    if dim == 2:
        return (beta * g / math.pi) ** 0.5
    return 0.5 * (15.0 * beta * g / (4.0 * math.pi)) ** 0.4


def thomas_fermi(problem):
    """
    ``sqrt(max(mu_TF - V, 0) / beta)`` sampled at the nodes and normalized.

    :type problem: bectools.groundstate.discretization.DiscreteProblem
    :rtype: numpy.ndarray
    """
    if not problem.beta > 0:
        raise ConfigError(
            f"Thomas-Fermi data needs beta > 0 (got {problem.beta!r}); use init kind 'a'.",
            field="init.kind",
        )
    if isinstance(problem.potential, HarmonicPotential):
        gammas = problem.potential.gammas
    else:
        gammas = (1.0,) * problem.grid.dim
    mu = thomas_fermi_mu(problem.beta, gammas)
    phi = np.sqrt(np.maximum(mu - problem.v, 0.0) / problem.beta)
    return normalize(problem, phi)


def _gaussian(coords):
    r2 = sum(x * x for x in coords)
    return math.pi ** (-len(coords) / 4.0) * np.exp(-0.5 * r2)


def _sample(kind, problem):
    coords = problem.grid.mesh()
    phi_a = _gaussian(coords)
    if kind is InitKind.GAUSSIAN_A:
        return phi_a
    if kind is InitKind.EXCITED_X:
        return math.sqrt(2.0) * coords[0] * phi_a
    if kind is InitKind.EXCITED_Y:
        return math.sqrt(2.0) * coords[1] * phi_a
    if kind is InitKind.EXCITED_XY:
        return 2.0 * coords[0] * coords[1] * phi_a

    phi_b = (coords[0] + 1j * coords[1]) * phi_a
    if kind is InitKind.VORTEX_B:
        return phi_b
    if kind is InitKind.MIX_C:
        return 0.5 * (phi_a + phi_b)
    # OMEGA_MIX_D
    omega = problem.omega
    return (1.0 - omega) * phi_a + omega * phi_b


def ansatz(kind, problem):
    """
    Sample one of the analytic initial functions and normalize it.

    Conjugate kinds (``bbar``, ``cbar``, ``dbar``) are the complex conjugates
    of their plain counterparts.

    :param kind: ansatz kind (not ``tf`` or ``file``)
    :type kind: InitKind | str
    :type problem: bectools.groundstate.discretization.DiscreteProblem
    :rtype: numpy.ndarray
    """
    kind = InitKind(kind)
    if kind in (InitKind.THOMAS_FERMI, InitKind.FROM_FILE):
        raise ValueError(f"{kind.value!r} is not an analytic ansatz.")
    needs_2d = kind in _VORTEX_KINDS or kind in (InitKind.EXCITED_Y, InitKind.EXCITED_XY)
    if needs_2d and problem.grid.dim < 2:
        raise ConfigError(
            f"Initial data {kind.value!r} needs at least two dimensions.", field="init.kind"
        )
    if kind in _VORTEX_KINDS and problem.field_kind is not FieldKind.COMPLEX:
        raise ConfigError(
            f"Vortex initial data {kind.value!r} needs a complex field.", field="init.kind"
        )

    base = _CONJUGATES.get(kind, kind)
    phi = _sample(base, problem)
    if base is not kind:
        phi = np.conj(phi)
    return normalize(problem, phi)


def initial_state(kind, problem, path=None):
    """
    Build the initial unit vector for any :class:`InitKind`.

    :param path: grid-data file for ``kind="file"``
    :rtype: numpy.ndarray
    """
    kind = InitKind(kind)
    if kind is InitKind.THOMAS_FERMI:
        return thomas_fermi(problem)
    if kind is InitKind.FROM_FILE:
        if path is None:
            raise ConfigError("Initial data kind 'file' needs init.path.", field="init.path")
        return load_state(problem, path)
    return ansatz(kind, problem)
