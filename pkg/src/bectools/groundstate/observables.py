"""
Physical observables of a state and a second order stationarity probe.

States are unit vectors in the unified scaling; results are reported for the
grid function ``phi = X / sqrt(cell_volume)``.
"""
from __future__ import annotations

import numpy as np

from .discretization import FieldKind, Flavor, chemical_potential, hessian_form
from .grid import node_coordinates

__all__ = [
    "rms",
    "density",
    "max_density",
    "second_order_probe",
    "energy_components",
    "angular_momentum",
    "align_phase",
    "attach_observables",
]


def rms(problem, x, axis):
    """
    ``sqrt(h sum x_axis^2 |phi|^2)``.

    :param axis: 0 for x, 1 for y, 2 for z
    :rtype: float
    """
    if not 0 <= axis < problem.grid.dim:
        raise ValueError(f"Axis {axis!r} out of range for a {problem.grid.dim}D grid.")
    coord = node_coordinates(problem.grid)[axis]
    shape = [1] * problem.grid.dim
    shape[axis] = coord.size
    return float(np.sqrt(np.sum(coord.reshape(shape) ** 2 * np.abs(x) ** 2)))


def density(problem, x):
    """
    ``|phi_j|^2`` at the stored nodes.

    :rtype: numpy.ndarray
    """
    return np.abs(x) ** 2 / problem.cell_volume


def max_density(problem, x):
    return float(np.max(density(problem, x)))


def energy_components(problem, x):
    """
    Split the energy into kinetic, potential, interaction and rotation parts.

    :return: mapping of part name to value; the parts sum to the energy
    :rtype: dict[str, float]
    """
    dens = np.abs(x) ** 2
    parts = {
        "kinetic": float(np.real(np.vdot(x, problem.apply_kinetic(x)))),
        "potential": float(np.sum(problem.v * dens)),
        "interaction": problem.alpha * float(np.sum(dens * dens)),
        "rotation": 0.0,
    }
    if problem.omega:
        parts["rotation"] = float(np.real(np.vdot(x, problem.apply_rotation(x))))
    return parts


def angular_momentum(problem, x):
    """
    Expectation value ``<L_z>`` of a unit state.

    :rtype: float
    """
    return float(np.real(np.vdot(x, problem.apply_angular_momentum(x))))


def align_phase(reference, state):
    """
    Multiply ``state`` by the unit phase maximizing ``Re <reference, state>``.

    For real arrays this is a global sign.

    :rtype: numpy.ndarray
    """
    overlap = np.vdot(reference, state)
    size = abs(overlap)
    if size == 0:
        return state
    if np.iscomplexobj(state) or np.iscomplexobj(reference):
        return state * (np.conj(overlap) / size)
    return state * np.sign(overlap.real)


def second_order_probe(problem, x, n_dirs=20, seed=0):
    """
    Sample ``Hess F(X)[D, D] - theta D* D`` over random unit tangent directions.

    Tangency is in the real sense, ``Re(X* D) = 0``. A ground state gives a
    nonnegative minimum up to roundoff.

    :param n_dirs: number of random directions
    :param seed: seed of the direction generator
    :return: ``(theta, minimum sampled curvature)``
    :rtype: tuple[float, float]
    """
    _, g = problem.evaluate(x)
    theta = float(np.real(np.vdot(x, g)))
    rng = np.random.default_rng(seed)
    lowest = np.inf
    for _ in range(n_dirs):
        d = rng.standard_normal(x.shape)
        if problem.field_kind is FieldKind.COMPLEX:
            d = d + 1j * rng.standard_normal(x.shape)
        d = d - float(np.real(np.vdot(x, d))) * x
        d /= np.linalg.norm(d)
        lowest = min(lowest, hessian_form(problem, x, d) - theta)
    return theta, float(lowest)


def attach_observables(problem, report, *, probe_dirs=0, seed=0):
    """
    Fill the observable fields of a report from its final state.

    :param probe_dirs: directions for :func:`second_order_probe`, 0 to skip it
    :param seed: probe seed, recorded in the report
    :type report: bectools.groundstate.report.SolveReport
    :rtype: bectools.groundstate.report.SolveReport
    """
    x = report.state
    report.chemical_potential = chemical_potential(problem, x)
    report.rms = tuple(rms(problem, x, axis) for axis in range(problem.grid.dim))
    report.max_density = max_density(problem, x)
    if problem.flavor is Flavor.FP and problem.grid.dim >= 2:
        report.angular_momentum = angular_momentum(problem, x)
    if probe_dirs:
        theta, curvature = second_order_probe(problem, x, probe_dirs, seed)
        report.probe = {
            "theta": theta,
            "min_curvature": curvature,
            "directions": probe_dirs,
            "seed": seed,
        }
    return report
