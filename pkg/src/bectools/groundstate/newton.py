"""
Regularized Newton method on the unit sphere and the cascadic multigrid driver.

Each outer step minimizes, over the sphere, the second order model of the
energy around the current iterate ``X_k`` plus the proximal term
``delta/2 ||X - X_k||^2``. The ratio of actual to predicted decrease decides
acceptance and how ``delta`` changes.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, replace

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .discretization import Flavor
from .errors import ConfigError, StepFailureError
from .grid import node_coordinates, refine_grid
from .report import SolveReport, TraceRecord
from .sphere import GradParams, _descend, gradient_descent, multiplier_and_residual
from .transforms import dft_axis, dst_axis, idft_axis, idst_axis

__all__ = [
    "NewtonParams",
    "NewtonModel",
    "SubproblemResult",
    "model_value",
    "model_gradient",
    "solve_subproblem",
    "tr_ratio",
    "update_step",
    "update_regularization",
    "newton_solve",
    "prolong",
    "cascadic_solve",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NewtonParams:
    """
    Parameters of the regularized Newton method.

    :param eta1: acceptance threshold on the ratio
    :param eta2: threshold for a very successful step
    :param gamma1: regularization growth on ordinary steps
    :param gamma2: regularization growth on rejected steps
    :param delta0: initial regularization, ``max(1, ||G(X_1)||)`` when None
    :param delta_stop: stop once accepted steps move less than this in max norm
    :param k_init: gradient iterations used to warm start
    :param k_sub: iteration cap of each subproblem
    :param max_iter: outer iteration cap
    :param delta_min: floor applied when ``delta`` is halved
    """

    eta1: float = 0.01
    eta2: float = 0.9
    gamma1: float = 2.0
    gamma2: float = 4.0
    delta0: float | None = None
    delta_stop: float = 1e-8
    k_init: int = 100
    k_sub: int = 200
    max_iter: int = 500
    delta_min: float = 1e-12

    def __post_init__(self):
        if not 0.0 < self.eta1 <= self.eta2 < 1.0:
            raise ConfigError(
                f"Need 0 < eta1 <= eta2 < 1, got ({self.eta1!r}, {self.eta2!r}).",
                field="newton.eta1",
            )
        if not 1.0 < self.gamma1 <= self.gamma2:
            raise ConfigError(
                f"Need 1 < gamma1 <= gamma2, got ({self.gamma1!r}, {self.gamma2!r}).",
                field="newton.gamma1",
            )
        if self.delta0 is not None and not self.delta0 > 0:
            raise ConfigError(
                f"delta0 must be positive, got {self.delta0!r}.", field="newton.delta0"
            )
        if not self.delta_stop > 0:
            raise ConfigError(
                f"delta_stop must be positive, got {self.delta_stop!r}.", field="newton.delta_stop"
            )
        for name in ("k_init", "k_sub", "max_iter"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be nonnegative.", field=f"newton.{name}")


class NewtonModel:
    def __init__(self, problem, xk, gk, fk, delta):
        """
        Regularized second order model of the energy anchored at ``xk``.

        :param problem: the problem being minimized
        :type problem: bectools.groundstate.discretization.DiscreteProblem
        :param xk: anchor, unit norm
        :param gk: gradient at the anchor
        :param fk: energy at the anchor
        :param delta: proximal weight
        """
        if not delta > 0:
            raise ValueError(f"Regularization must be positive, got {delta!r}.")
        self.problem = problem
        self.xk = xk
        self.gk = gk
        self.fk = fk
        self.delta = delta
        self._dens = np.abs(xk) ** 2
        self._axk = problem.apply_a(xk)
        self.anchor_value = 0.5 * float(np.real(np.vdot(xk, self._axk)))

    def __repr__(self):
        return f"{self.__class__.__name__}(problem={self.problem!r}, delta={self.delta!r})"

    def evaluate(self, x):
        """
        Model value and gradient at ``x``, sharing one application of ``A``.

        :rtype: tuple[float, numpy.ndarray]
        """
        alpha = self.problem.alpha
        ax = self.problem.apply_a(x)
        d = x - self.xk
        proj = np.real(np.conj(self.xk) * d)
        value = (
            0.5 * float(np.real(np.vdot(x, ax)))
            + 4.0 * alpha * float(np.sum(self._dens * proj))
            + 2.0 * alpha * float(np.sum(self._dens * np.abs(d) ** 2 + 2.0 * proj * proj))
            + 0.5 * self.delta * float(np.real(np.vdot(d, d)))
        )
        grad = (
            ax
            + 4.0 * alpha * self._dens * x
            + 8.0 * alpha * proj * self.xk
            + self.delta * d
        )
        return value, self.problem.as_field(grad)


def model_value(model, x):
    """
    :type model: NewtonModel
    :rtype: float
    """
    return model.evaluate(x)[0]


def model_gradient(model, x):
    """
    :type model: NewtonModel
    :rtype: numpy.ndarray
    """
    return model.evaluate(x)[1]


@dataclass(frozen=True)
class SubproblemResult:
    z: np.ndarray
    value: float
    iterations: int
    evaluations: int
    failed: bool = False


def solve_subproblem(model, x_start, cap, *, tol=None):
    """
    Approximately minimize the model over the sphere with the gradient method.

    The result never has a larger model value than ``x_start``; if the
    nonmonotone run ends higher, the best iterate seen is returned. A failed
    line search gives back ``x_start`` with ``failed`` set.

    :param model: model to minimize
    :type model: NewtonModel
    :param x_start: unit norm start
    :param cap: iteration cap
    :type cap: int
    :param tol: residual tolerance, ``max(1e-2 r0, 1e-8 ||G_k||)`` when None
    :type tol: float | None
    :rtype: SubproblemResult
    """
    w0, g0 = model.evaluate(x_start)
    _, r0 = multiplier_and_residual(x_start, g0)
    if tol is None:
        tol = max(1e-2 * float(np.linalg.norm(r0)), 1e-8 * float(np.linalg.norm(model.gk)))
    params = GradParams(eps0=tol, max_iter=cap, residual_tol=tol)
    try:
        run = _descend(model, x_start, params)
    except StepFailureError as exc:
        logger.debug("Subproblem search failed (%s), keeping the start point.", exc)
        return SubproblemResult(np.array(x_start, copy=True), w0, 0, 1, failed=True)

    z, w = run.state.x, run.state.f
    if w > w0:
        logger.debug("Subproblem ended above its start (%.6g > %.6g), using best iterate.", w, w0)
        z, w = run.best_x, run.best_f
    return SubproblemResult(z, w, run.state.k, run.evaluations + 1)


def tr_ratio(problem, model, z, f_z=None, w_z=None):
    """
    ``rho = (F(Z) - F(X_k)) / (W(Z) - W(X_k))``.

    Returns ``-inf`` when the predicted change is below roundoff.

    :param f_z: energy at ``z`` when already known
    :param w_z: model value at ``z`` when already known
    :rtype: float
    """
    if f_z is None:
        f_z, _ = problem.evaluate(z)
    if w_z is None:
        w_z = model_value(model, z)
    predicted = w_z - model.anchor_value
    if abs(predicted) <= 1e-16 * max(1.0, abs(model.anchor_value)):
        return float("-inf")
    return (f_z - model.fk) / predicted


def update_step(xk, z, rho, params):
    """
    Accept ``z`` when ``rho >= eta1``, otherwise keep ``xk``.
    """
    return z if rho >= params.eta1 else xk


def update_regularization(delta, rho, params):
    """
    Halve ``delta`` after a very successful step, grow it by ``gamma1``
    after an acceptable one and by ``gamma2`` otherwise.

    :rtype: float
    """
    if rho > params.eta2:
        return min(delta, max(0.5 * delta, params.delta_min))
    if rho >= params.eta1:
        return params.gamma1 * delta
    return params.gamma2 * delta


def newton_solve(problem, x0, params=None, grad_params=None, *, trace=False, level=0):
    """
    Regularized Newton method, warm started by ``k_init`` gradient iterations.

    Stops when an accepted step moves less than ``delta_stop`` in max norm,
    when the model predicts no change and the energy stagnates too, or at
    ``max_iter`` outer iterations.

    :param problem: discretized problem
    :type problem: bectools.groundstate.discretization.DiscreteProblem
    :param x0: unit norm initial state
    :param params: Newton parameters
    :type params: NewtonParams | None
    :param grad_params: gradient parameters for the warm start
    :type grad_params: GradParams | None
    :rtype: bectools.groundstate.report.SolveReport
    """
    params = NewtonParams() if params is None else params
    grad_params = GradParams() if grad_params is None else grad_params
    start = time.perf_counter()

    warm = _descend(problem, x0, replace(grad_params, max_iter=params.k_init), level=level)
    logger.debug(
        "Warm start: %d gradient iterations, residual %.3e.", warm.state.k, warm.state.residual
    )
    x = warm.state.x
    f, g = problem.evaluate(x)
    evaluations = warm.evaluations + 1
    theta, r = multiplier_and_residual(x, g)
    delta = params.delta0 if params.delta0 is not None else max(1.0, float(np.linalg.norm(g)))

    records = []
    if trace:
        records.append(TraceRecord(level, 0, f, float(np.linalg.norm(r)), delta))

    converged = False
    rejected = 0
    k = 0
    while k < params.max_iter:
        k += 1
        model = NewtonModel(problem, x, g, f, delta)
        sub = solve_subproblem(model, x, params.k_sub)
        if sub.failed:
            rejected += 1
            delta = params.gamma2 * delta
            evaluations += sub.evaluations
            logger.debug("Subproblem failed at k=%d, growing delta to %.3e.", k, delta)
            if trace:
                records.append(
                    TraceRecord(
                        level, k, f, float(np.linalg.norm(r)), delta, 0, False, float("-inf")
                    )
                )
            continue

        f_z, g_z = problem.evaluate(sub.z)
        evaluations += sub.evaluations + 1
        rho = tr_ratio(problem, model, sub.z, f_z=f_z, w_z=sub.value)

        if rho == float("-inf") and abs(f_z - f) <= 1e-14 * max(1.0, abs(f)):
            converged = True
            if trace:
                records.append(
                    TraceRecord(level, k, f, float(np.linalg.norm(r)), delta, 0, False, rho)
                )
            logger.debug("Model and energy stagnate at k=%d, stopping.", k)
            break

        accepted = rho >= params.eta1
        x_next = update_step(x, sub.z, rho, params)
        new_delta = update_regularization(delta, rho, params)
        if accepted:
            step = float(np.max(np.abs(x_next - x)))
            x, f, g = x_next, f_z, g_z
            theta, r = multiplier_and_residual(x, g)
        else:
            rejected += 1
            logger.debug("Rejected Newton step k=%d (rho=%.3g, delta=%.3g).", k, rho, delta)
        logger.debug(
            "newton k=%d F=%.15g rho=%.4g delta=%.3e sub_iter=%d",
            k, f, rho, delta, sub.iterations,
        )
        delta = new_delta
        if trace:
            records.append(
                TraceRecord(level, k, f, float(np.linalg.norm(r)), delta, 0, accepted, rho)
            )
        if accepted and step <= params.delta_stop:
            converged = True
            break

    if converged:
        logger.info("Newton method converged in %d iterations, F=%.12g.", k, f)
    else:
        logger.warning("Newton method hit max_iter=%d, F=%.12g.", params.max_iter, f)

    return SolveReport(
        method="newton",
        energy=f,
        residual=float(np.linalg.norm(r)),
        theta=theta,
        iterations=k,
        function_evaluations=evaluations,
        converged=converged,
        state=x,
        rejected_steps=rejected,
        trace=records,
        wall_time=time.perf_counter() - start,
    )


def _fd_interpolate(phi, coarse, fine):
    # multilinear over the coarse nodes including the Dirichlet zeros
    axes = tuple(
        np.linspace(a, b, n + 1) for (a, b), n in zip(coarse.domain.bounds, coarse.n)
    )
    padded = np.pad(phi, 1)
    points = np.stack(np.meshgrid(*node_coordinates(fine), indexing="ij"), axis=-1)

    def interpolate(values):
        return RegularGridInterpolator(axes, values, method="linear")(points)

    if np.iscomplexobj(padded):
        return interpolate(padded.real) + 1j * interpolate(padded.imag)
    return interpolate(padded)


def _sine_pad_axis(values, axis):
    coeffs = np.moveaxis(dst_axis(values, axis), axis, 0)
    padded = np.zeros((2 * coeffs.shape[0] + 1,) + coeffs.shape[1:], dtype=coeffs.dtype)
    padded[: coeffs.shape[0]] = coeffs
    return idst_axis(np.moveaxis(padded, 0, axis), axis)


def _fourier_pad_axis(values, axis):
    n = values.shape[axis]
    coeffs = np.fft.fftshift(np.moveaxis(dft_axis(values, axis), axis, 0), axes=0)
    padded = np.zeros((2 * n,) + coeffs.shape[1:], dtype=complex)
    offset = n // 2
    padded[offset : offset + n] = coeffs
    # share the unmatched -N/2 mode between -N/2 and +N/2
    padded[offset] *= 0.5
    padded[offset + n] = padded[offset]
    fine = np.fft.ifftshift(padded, axes=0)
    return idft_axis(np.moveaxis(fine, 0, axis), axis)


def prolong(x, coarse, fine, flavor):
    """
    Carry a coarse unit vector to the refined grid and renormalize.

    Finite differences interpolate multilinearly between the nodes; the
    pseudospectral flavors pad the spectrum with zeros.

    :param x: unit vector on ``coarse``
    :param coarse: coarse grid
    :type coarse: bectools.groundstate.grid.Grid
    :param fine: ``refine_grid(coarse)``
    :type fine: bectools.groundstate.grid.Grid
    :param flavor: discretization flavor
    :type flavor: bectools.groundstate.discretization.Flavor | str
    :rtype: numpy.ndarray
    """
    flavor = Flavor(flavor)
    if fine.domain != coarse.domain or fine.n != tuple(2 * n for n in coarse.n):
        raise ValueError(f"{fine!r} is not the refinement of {coarse!r}.")
    if x.shape != coarse.shape:
        raise ValueError(f"State shape {x.shape!r} does not match grid shape {coarse.shape!r}.")

    is_real = not np.iscomplexobj(x)
    phi = x / np.sqrt(coarse.cell_volume)
    if flavor is Flavor.FD:
        phi = _fd_interpolate(phi, coarse, fine)
    else:
        pad_axis = _sine_pad_axis if flavor is Flavor.SP else _fourier_pad_axis
        for axis in range(coarse.dim):
            phi = pad_axis(phi, axis)
    if is_real:
        phi = np.real(phi)
    y = phi * np.sqrt(fine.cell_volume)
    return y / np.sqrt(float(np.real(np.vdot(y, y))))


def cascadic_solve(
    build,
    grid,
    levels,
    x0,
    params=None,
    grad_params=None,
    *,
    method="newton",
    trace=False,
):
    """
    Solve on ``grid``, prolong to the refined grid and solve again,
    ``levels`` times in total.

    :param build: callable returning the problem for a grid
    :type build: Callable[[Grid], DiscreteProblem]
    :param grid: coarsest grid
    :type grid: bectools.groundstate.grid.Grid
    :param levels: number of grids, at least 1
    :type levels: int
    :param x0: initial state on the coarsest grid, or a callable building it
        from the coarsest problem
    :param params: Newton parameters
    :type params: NewtonParams | None
    :param grad_params: gradient parameters
    :type grad_params: GradParams | None
    :param method: ``"newton"`` or ``"gradient"`` on every level
    :type method: str
    :return: report of the finest level, with every level report in ``levels``
    :rtype: bectools.groundstate.report.SolveReport
    """
    if levels < 1:
        raise ConfigError(f"Need at least one level, got {levels!r}.", field="solver.levels")
    if method not in ("newton", "gradient"):
        raise ConfigError(f"Unknown level method {method!r}.", field="solver.level_method")

    start = time.perf_counter()
    reports = []
    x = None
    previous = None
    for level in range(levels):
        problem = build(grid)
        if previous is None:
            x = x0(problem) if callable(x0) else x0
        else:
            x = prolong(x, previous, grid, problem.flavor)
        if method == "newton":
            report = newton_solve(problem, x, params, grad_params, trace=trace, level=level)
        else:
            report = gradient_descent(problem, x, grad_params, trace=trace, level=level)
        logger.info(
            "level %d grid %r: F=%.12g, %d iterations",
            level, grid.n, report.energy, report.iterations,
        )
        reports.append(report)
        x = report.state
        previous = grid
        grid = refine_grid(grid)

    finest = reports[-1]
    return replace(
        finest,
        method=f"cascadic-{method}",
        levels=reports,
        trace=[],
        wall_time=time.perf_counter() - start,
    )
