"""
Discrete Gross-Pitaevskii energies for the finite difference (FD), sine
pseudospectral (SP) and Fourier pseudospectral (FP) flavors.

A grid function ``phi`` relates to the unit vector the optimizers work on by
``X = sqrt(cell_volume) * phi``. In that scaling every flavor reads

    F(X) = 1/2 X* A X + alpha sum_j |X_j|^4,    A = 2 H,  alpha = beta / (2 cell_volume)

with ``H = -1/2 Laplacian + V - Omega L_z`` applied matrix free. Gradients of
complex fields follow the convention that the real directional derivative
along ``D`` is ``Re(D* G)``.
"""
from __future__ import annotations

import enum
import logging

import numpy as np

from .errors import ConfigError, FlavorMismatchError, NumericalOverflowError
from .grid import BoundaryCondition
from .potentials import sample_potential
from .transforms import (
    dft_axis,
    dst_axis,
    fourier_frequencies,
    idft_axis,
    idst_axis,
    sine_eigenvalues,
)

__all__ = [
    "Flavor",
    "FieldKind",
    "DiscreteProblem",
    "build_problem",
    "fd_energy",
    "fd_gradient",
    "sp_energy",
    "sp_gradient",
    "fp_energy",
    "fp_gradient",
    "to_unified",
    "from_unified",
    "evaluate",
    "chemical_potential",
    "directional_derivative",
    "hessian_form",
]

logger = logging.getLogger(__name__)


class Flavor(enum.Enum):
    FD = "fd"
    SP = "sp"
    FP = "fp"


class FieldKind(enum.Enum):
    REAL = "real"
    COMPLEX = "complex"


def _axis_shape(ndim, axis, n):
    shape = [1] * ndim
    shape[axis] = n
    return tuple(shape)


def _second_difference(phi, axis):
    # Dirichlet stencil phi_{j+1} - 2 phi_j + phi_{j-1} with zero boundary values
    out = -2.0 * phi
    lower = [slice(None)] * phi.ndim
    upper = [slice(None)] * phi.ndim
    lower[axis] = slice(1, None)
    upper[axis] = slice(None, -1)
    out[tuple(lower)] += phi[tuple(upper)]
    out[tuple(upper)] += phi[tuple(lower)]
    return out


class DiscreteProblem:
    def __init__(self, grid, flavor, potential, beta, omega=0.0, field_kind=None):
        """
        A discretized energy functional on a grid.

        Prefer :func:`build_problem`, which accepts plain strings for the enums.

        :param grid: computational grid
        :type grid: bectools.groundstate.grid.Grid
        :param flavor: discretization flavor
        :type flavor: Flavor
        :param potential: trapping potential
        :type potential: bectools.groundstate.potentials.Potential
        :param beta: interaction strength
        :type beta: float
        :param omega: rotation speed, nonzero only for FP in 2D/3D
        :type omega: float
        :param field_kind: real or complex unknowns, complex by default when rotating
        :type field_kind: FieldKind | None
        """
        flavor = Flavor(flavor)
        omega = float(omega)
        if field_kind is None:
            field_kind = FieldKind.COMPLEX if omega else FieldKind.REAL
        field_kind = FieldKind(field_kind)

        if flavor is Flavor.FP and grid.bc is not BoundaryCondition.PERIODIC:
            raise ConfigError(
                "The Fourier pseudospectral flavor needs a periodic domain.",
                field="domain.bc",
            )
        if flavor is not Flavor.FP and grid.bc is not BoundaryCondition.DIRICHLET:
            raise ConfigError(
                f"The {flavor.value!r} flavor needs a Dirichlet domain.", field="domain.bc"
            )
        if flavor is not Flavor.FD and any(n % 2 for n in grid.n):
            raise ConfigError(
                f"Grid counts {grid.n!r} must be even for spectral flavors.", field="grid.n"
            )
        if omega:
            if flavor is not Flavor.FP or grid.dim == 1:
                raise ConfigError(
                    "Rotation needs the Fourier pseudospectral flavor in 2D or 3D.",
                    field="problem.omega",
                )
            if field_kind is not FieldKind.COMPLEX:
                raise ConfigError(
                    "Rotating problems need a complex field.", field="problem.field"
                )

        self.grid = grid
        self.flavor = flavor
        self.potential = potential
        self.beta = float(beta)
        self.omega = omega
        self.field_kind = field_kind
        self.v = sample_potential(potential, grid)
        self.alpha = self.beta / (2.0 * grid.cell_volume)
        self._setup_operators()

    def _setup_operators(self):
        grid = self.grid
        ndim = grid.dim
        self._k2 = []
        self._k1 = []
        if self.flavor is Flavor.FD:
            self._inv_h2 = [1.0 / (h * h) for h in grid.h]
        elif self.flavor is Flavor.SP:
            for axis, (n, length) in enumerate(zip(grid.n, grid.domain.lengths)):
                lam = sine_eigenvalues(n, length)
                self._k2.append((lam * lam).reshape(_axis_shape(ndim, axis, n - 1)))
        else:
            for axis, (n, length) in enumerate(zip(grid.n, grid.domain.lengths)):
                lam = fourier_frequencies(n, length)
                shape = _axis_shape(ndim, axis, n)
                self._k2.append((lam * lam).reshape(shape))
                # the unmatched -N/2 mode carries no first derivative
                first = lam.copy()
                first[n // 2] = 0.0
                self._k1.append(first.reshape(shape))
            if ndim >= 2:
                coords = grid.mesh()
                self._x = coords[0]
                self._y = coords[1]

    def __repr__(self):
        return (
            f"{self.__class__.__name__}("
            f"grid={self.grid!r}, "
            f"flavor={self.flavor.value!r}, "
            f"potential={self.potential!r}, "
            f"beta={self.beta!r}, "
            f"omega={self.omega!r}, "
            f"field_kind={self.field_kind.value!r})"
        )

    @property
    def dtype(self):
        return complex if self.field_kind is FieldKind.COMPLEX else float

    @property
    def shape(self):
        return self.grid.shape

    @property
    def cell_volume(self):
        return self.grid.cell_volume

    def as_field(self, values):
        if self.field_kind is FieldKind.REAL:
            return np.ascontiguousarray(np.real(values))
        return values

    # -- linear operators, applied matrix free --------------------------------

    def apply_kinetic(self, phi):
        """
        Apply ``-1/2 Laplacian`` with the flavor's boundary treatment.

        :rtype: numpy.ndarray
        """
        out = np.zeros(phi.shape, dtype=np.result_type(phi, float))
        if self.flavor is Flavor.FD:
            for axis, inv_h2 in enumerate(self._inv_h2):
                out -= 0.5 * inv_h2 * _second_difference(phi, axis)
            return out
        if self.flavor is Flavor.SP:
            for axis, k2 in enumerate(self._k2):
                out += 0.5 * idst_axis(k2 * dst_axis(phi, axis), axis)
            return out
        out = out.astype(complex)
        for axis, k2 in enumerate(self._k2):
            out += 0.5 * idft_axis(k2 * dft_axis(phi, axis), axis)
        return self.as_field(out)

    def apply_rotation(self, phi):
        """
        Apply ``-Omega L_z = i Omega (x d/dy - y d/dx)``; zero unless rotating.

        :rtype: numpy.ndarray
        """
        if not self.omega:
            return np.zeros_like(phi)
        return -self.omega * self.apply_angular_momentum(phi)

    def apply_angular_momentum(self, phi):
        """
        Apply ``L_z = -i (x d/dy - y d/dx)`` spectrally.

        :rtype: numpy.ndarray
        """
        if self.flavor is not Flavor.FP or self.grid.dim < 2:
            raise FlavorMismatchError(
                "Angular momentum needs the Fourier pseudospectral flavor in 2D or 3D."
            )
        dx = idft_axis(1j * self._k1[0] * dft_axis(phi, 0), 0)
        dy = idft_axis(1j * self._k1[1] * dft_axis(phi, 1), 1)
        return -1j * (self._x * dy - self._y * dx)

    def apply_hamiltonian(self, phi):
        """
        Apply ``H = -1/2 Laplacian + V - Omega L_z``.

        ``H`` is linear, so it acts the same on grid functions and on
        unified vectors.

        :rtype: numpy.ndarray
        """
        out = self.apply_kinetic(phi) + self.v * phi
        if self.omega:
            out = out + self.apply_rotation(phi)
        return out

    def apply_a(self, x):
        """
        Apply the Hermitian operator ``A = 2H`` of the unified form.

        :rtype: numpy.ndarray
        """
        return 2.0 * self.apply_hamiltonian(x)

    # -- unified objective ----------------------------------------------------

    def evaluate(self, x):
        """
        Energy and gradient of a unit vector in the unified scaling.

        One application of ``H`` is shared between both results.

        :param x: unit norm state, shaped like the grid unknowns
        :type x: numpy.ndarray
        :return: ``(F, G)``
        :rtype: tuple[float, numpy.ndarray]
        """
        hx = self.apply_hamiltonian(x)
        dens = np.abs(x) ** 2
        f = float(np.real(np.vdot(x, hx))) + self.alpha * float(np.sum(dens * dens))
        g = self.as_field(2.0 * hx + 4.0 * self.alpha * dens * x)
        if not (np.isfinite(f) and np.all(np.isfinite(g))):
            raise NumericalOverflowError(
                f"Non finite energy {f!r} while evaluating {self!r}.", iterate=np.copy(x)
            )
        return f, g


def build_problem(grid, flavor, potential, beta, omega=0.0, field_kind=None):
    """
    Build a :class:`DiscreteProblem`, accepting enum values or their names.

    :rtype: DiscreteProblem
    """
    if isinstance(flavor, str):
        flavor = flavor.lower()
    if isinstance(field_kind, str):
        field_kind = field_kind.lower()
    try:
        flavor = Flavor(flavor)
    except ValueError:
        raise ConfigError(f"Unknown flavor {flavor!r}.", field="problem.flavor") from None
    try:
        field_kind = None if field_kind is None else FieldKind(field_kind)
    except ValueError:
        raise ConfigError(f"Unknown field kind {field_kind!r}.", field="problem.field") from None
    return DiscreteProblem(grid, flavor, potential, beta, omega, field_kind)


def _require(problem, flavor):
    if problem.flavor is not flavor:
        raise FlavorMismatchError(
            f"Expected a {flavor.value!r} problem, got {problem.flavor.value!r}."
        )


def _local_terms(problem, phi):
    dens = np.abs(phi) ** 2
    return float(np.sum(problem.v * dens) + 0.5 * problem.beta * np.sum(dens * dens))


def _gradient(problem, phi):
    # 2 h (H phi + beta |phi|^2 phi) for grid functions
    hphi = problem.apply_hamiltonian(phi)
    return problem.as_field(
        2.0 * problem.cell_volume * (hphi + problem.beta * np.abs(phi) ** 2 * phi)
    )


def fd_energy(problem, phi):
    """
    FD energy ``h [phi^T A phi + beta/2 sum phi^4]`` via the difference form
    ``h sum 1/2 ((phi_{j+1} - phi_j)/h)^2`` summed over dimensions.

    :type problem: DiscreteProblem
    :param phi: grid function on the interior nodes
    :type phi: numpy.ndarray
    :rtype: float
    """
    _require(problem, Flavor.FD)
    kinetic = 0.0
    for axis, h in enumerate(problem.grid.h):
        pad = [(0, 0)] * phi.ndim
        pad[axis] = (1, 1)
        diffs = np.diff(np.pad(phi, pad), axis=axis)
        kinetic += 0.5 * float(np.sum(np.abs(diffs) ** 2)) / (h * h)
    return problem.cell_volume * (kinetic + _local_terms(problem, phi))


def fd_gradient(problem, phi):
    """
    FD gradient ``2h (A phi + beta phi^3)``.

    :rtype: numpy.ndarray
    """
    _require(problem, Flavor.FD)
    return _gradient(problem, phi)


def sp_energy(problem, phi):
    """
    SP energy with the kinetic part ``(N/4) sum lambda_l^2 phi~_l^2`` taken
    through the sine transform along each dimension.

    :rtype: float
    """
    _require(problem, Flavor.SP)
    kinetic = 0.0
    for axis, (n, k2) in enumerate(zip(problem.grid.n, problem._k2)):
        coeffs = dst_axis(phi, axis)
        kinetic += 0.25 * n * float(np.sum(k2 * np.abs(coeffs) ** 2))
    return problem.cell_volume * (kinetic + _local_terms(problem, phi))


def sp_gradient(problem, phi):
    """
    SP gradient ``2h (1/N C Lambda C phi + V phi + beta phi^3)``.

    :rtype: numpy.ndarray
    """
    _require(problem, Flavor.SP)
    return _gradient(problem, phi)


def fp_energy(problem, phi):
    """
    FP energy from the per-dimension Fourier sums

    ``N_1 sum (lambda_p^2/2 + y lambda_p Omega) |phi~(1)|^2`` and
    ``N_2 sum (eta_q^2/2 - x eta_q Omega) |phi~(2)|^2``

    plus the pointwise potential and interaction sums, with uniform
    weights over the periodic nodes.

    :rtype: float
    """
    _require(problem, Flavor.FP)
    if problem.omega and problem.grid.dim == 1:
        raise ConfigError("Rotation is undefined in one dimension.", field="problem.omega")
    kinetic = 0.0
    for axis, (n, k2) in enumerate(zip(problem.grid.n, problem._k2)):
        weight = 0.5 * k2
        if problem.omega and axis == 0:
            weight = weight + problem.omega * problem._y * problem._k1[0]
        elif problem.omega and axis == 1:
            weight = weight - problem.omega * problem._x * problem._k1[1]
        coeffs = dft_axis(phi.astype(complex), axis)
        kinetic += n * float(np.sum(weight * np.abs(coeffs) ** 2))
    return problem.cell_volume * (kinetic + _local_terms(problem, phi))


def fp_gradient(problem, phi):
    """
    FP gradient ``2h (H phi + beta |phi|^2 phi)`` with ``H`` applied spectrally.

    :rtype: numpy.ndarray
    """
    _require(problem, Flavor.FP)
    return _gradient(problem, phi)


def to_unified(problem, phi, tol=1e-10):
    """
    Rescale a normalized grid function to a unit vector.

    :param phi: grid function with ``h sum |phi|^2 = 1``
    :type phi: numpy.ndarray
    :return: ``(X, alpha)``
    :rtype: tuple[numpy.ndarray, float]
    """
    norm2 = problem.cell_volume * float(np.sum(np.abs(phi) ** 2))
    if abs(norm2 - 1.0) > tol:
        raise ValueError(f"Grid function has weighted norm^2 {norm2!r}, expected 1.")
    return np.sqrt(problem.cell_volume) * phi, problem.alpha


def from_unified(problem, x):
    """
    Grid function ``phi = X / sqrt(cell_volume)``.

    :rtype: numpy.ndarray
    """
    return x / np.sqrt(problem.cell_volume)


def evaluate(problem, x):
    """
    Energy and unified gradient of the unit vector ``x``.

    :type problem: DiscreteProblem
    :rtype: tuple[float, numpy.ndarray]
    """
    return problem.evaluate(x)


def chemical_potential(problem, x):
    """
    ``mu = E + beta/2 h sum |phi|^4``, equal to ``F + alpha sum |X|^4``.

    :rtype: float
    """
    f, _ = problem.evaluate(x)
    return f + problem.alpha * float(np.sum(np.abs(x) ** 4))


def directional_derivative(problem, x, d):
    """
    ``Re(D* grad F(X))``.

    :rtype: float
    """
    _, g = problem.evaluate(x)
    return float(np.real(np.vdot(d, g)))


def hessian_form(problem, x, d):
    """
    Second order directional derivative
    ``D* A D + 4 alpha sum (|X_j|^2 |D_j|^2 + 2 Re(conj(X_j) D_j)^2)``.

    :rtype: float
    """
    quad = float(np.real(np.vdot(d, problem.apply_a(d))))
    proj = np.real(np.conj(x) * d)
    quartic = np.sum(np.abs(x) ** 2 * np.abs(d) ** 2 + 2.0 * proj * proj)
    return quad + 4.0 * problem.alpha * float(quartic)
