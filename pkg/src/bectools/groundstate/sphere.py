"""
Feasible gradient method on the unit sphere.

Iterates move along the curve ``Y(tau) = (I + tau A(X))^{-1} (I - tau A(X)) X``
with ``A(X) = G X* - X G*``, which keeps ``||Y|| = ||X||`` exactly. Steps come
from alternating Barzilai-Borwein formulas, safeguarded by a nonmonotone
curvilinear backtracking search.

Complex vectors are treated as real vectors of twice the length, so every
inner product entering the geometry is ``Re(u* v)``.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, StepFailureError
from .report import SolveReport, TraceRecord

__all__ = [
    "GradParams",
    "OptimState",
    "SearchResult",
    "multiplier_and_residual",
    "feasible_point",
    "bb_step",
    "nonmonotone_search",
    "gradient_descent",
]

logger = logging.getLogger(__name__)

# Drift of ||X||^2 from 1 that triggers a renormalization
RENORMALIZE_TOL = 1e-14


def _rdot(u, v):
    return float(np.real(np.vdot(u, v)))


@dataclass(frozen=True)
class GradParams:
    """
    Parameters of the feasible gradient method.

    :param eta: memory of the nonmonotone reference value
    :param rho1: sufficient decrease constant
    :param delta_back: backtracking factor
    :param eps0: stopping tolerance on ``||X_{k+1} - X_k||_inf / tau``
    :param max_iter: iteration cap K
    :param tau_min: lower safeguard for BB steps
    :param tau_max: upper safeguard for BB steps
    :param monotone: use the plain Armijo test against ``F(X_k)``
    :param residual_tol: optional extra stop once ``||A(X)X||_2`` falls below it
    :param max_backtracks: backtracking steps allowed before giving up
    """

    eta: float = 0.85
    rho1: float = 1e-4
    delta_back: float = 0.5
    eps0: float = 1e-6
    max_iter: int = 2000
    tau_min: float = 1e-10
    tau_max: float = 1e10
    monotone: bool = False
    residual_tol: float | None = None
    max_backtracks: int = 50

    def __post_init__(self):
        for name in ("eta", "rho1", "delta_back"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ConfigError(
                    f"{name} must lie in (0, 1), got {value!r}.", field=f"solver.{name}"
                )
        if not self.eps0 > 0:
            raise ConfigError(f"eps0 must be positive, got {self.eps0!r}.", field="solver.eps0")
        if self.max_iter < 0:
            raise ConfigError(
                f"max_iter must be nonnegative, got {self.max_iter!r}.", field="solver.max_iter"
            )
        if not 0.0 < self.tau_min <= self.tau_max:
            raise ConfigError(
                f"Step bounds ({self.tau_min!r}, {self.tau_max!r}) must satisfy "
                f"0 < tau_min <= tau_max.",
                field="solver.tau_min",
            )


@dataclass
class OptimState:
    x: np.ndarray
    g: np.ndarray
    f: float
    theta: float
    r: np.ndarray
    tau: float = 0.0
    c: float = 0.0
    q: float = 1.0
    k: int = 0
    prev_x: np.ndarray | None = None
    prev_r: np.ndarray | None = None

    @property
    def residual(self):
        return float(np.linalg.norm(self.r))


@dataclass(frozen=True)
class SearchResult:
    x: np.ndarray
    f: float
    g: np.ndarray
    tau: float
    backtracks: int
    c: float
    q: float
    evaluations: int


def multiplier_and_residual(x, g):
    """
    Lagrange multiplier and projected gradient.

    :param x: unit vector
    :param g: gradient at ``x``
    :return: ``(theta, R)`` with ``theta = Re(X* G)`` and
        ``R = A(X) X = G (X* X) - X Re(X* G)``
    :rtype: tuple[float, numpy.ndarray]
    """
    theta = _rdot(x, g)
    return theta, g * _rdot(x, x) - theta * x


def feasible_point(x, g, tau):
    """
    Closed form of the curvilinear update, ``Y(tau) = a(tau) X + b(tau) G``.

    :param x: unit vector
    :param g: gradient at ``x``
    :param tau: step, ``tau >= 0``
    :rtype: numpy.ndarray
    """
    xg = _rdot(x, g)
    xx = _rdot(x, x)
    gg = _rdot(g, g)
    t2 = tau * tau
    denom = 1.0 - t2 * xg * xg + t2 * xx * gg
    if denom < 1.0 - 1e-12:
        raise ValueError(f"Cayley denominator {denom!r} below 1; is X normalized?")
    a = ((1.0 + tau * xg) ** 2 - t2 * xx * gg) / denom
    b = -2.0 * tau * xx / denom
    return a * x + b * g


def bb_step(s_prev, w_prev, variant, tau_min=1e-10, tau_max=1e10):
    """
    Barzilai-Borwein step from ``S = X_k - X_{k-1}`` and ``W = R_k - R_{k-1}``.

    Variant 1 is ``S*S / |S*W|``, variant 2 is ``|S*W| / W*W``. Non finite
    values fall back to ``tau_max``; others are clipped to the bounds.

    :rtype: float
    """
    ss = _rdot(s_prev, s_prev)
    sw = abs(_rdot(s_prev, w_prev))
    ww = _rdot(w_prev, w_prev)
    with np.errstate(divide="ignore", invalid="ignore"):
        if variant == 1:
            tau = np.divide(ss, sw)
        elif variant == 2:
            tau = np.divide(sw, ww)
        else:
            raise ValueError(f"BB variant must be 1 or 2, got {variant!r}.")
    tau = float(tau)
    if not np.isfinite(tau):
        return float(tau_max)
    return float(min(max(tau, tau_min), tau_max))


def nonmonotone_search(objective, state, tau0, params):
    """
    Backtrack along the curve until
    ``F(Y(tau)) <= C - rho1 tau ||A(X)X||^2`` with ``tau = tau0/2 delta^m``.

    ``C`` is ``F(X_k)`` in monotone mode.

    :param objective: anything with ``evaluate(x) -> (F, G)``
    :param state: current iterate
    :type state: OptimState
    :param tau0: initial (BB) step
    :type tau0: float
    :type params: GradParams
    :return: accepted point with the updated reference value ``C`` and weight ``Q``
    :rtype: SearchResult
    """
    rnorm2 = _rdot(state.r, state.r)
    reference = state.f if params.monotone else state.c
    # tolerate roundoff once the decrease falls below machine resolution
    slack = 1e-15 * max(1.0, abs(reference))

    tau = 0.5 * tau0
    for m in range(params.max_backtracks + 1):
        y = feasible_point(state.x, state.g, tau)
        norm2 = _rdot(y, y)
        if abs(norm2 - 1.0) > RENORMALIZE_TOL:
            y = y / np.sqrt(norm2)
        f, g = objective.evaluate(y)
        if f <= reference - params.rho1 * tau * rnorm2 + slack:
            if params.monotone:
                c, q = f, 1.0
            else:
                q = params.eta * state.q + 1.0
                c = (params.eta * state.q * state.c + f) / q
            return SearchResult(
                x=y, f=f, g=g, tau=tau, backtracks=m, c=c, q=q, evaluations=m + 1
            )
        tau *= params.delta_back

    residual = float(np.sqrt(rnorm2))
    raise StepFailureError(
        f"No acceptable step after {params.max_backtracks} backtracks "
        f"(residual {residual:.3e}).",
        residual=residual,
    )


@dataclass
class _Descent:
    state: OptimState
    best_x: np.ndarray
    best_f: float
    evaluations: int
    converged: bool
    records: list


def _descend(objective, x0, params, *, trace=False, level=0):
    x = np.array(x0, copy=True)
    norm2 = _rdot(x, x)
    if abs(norm2 - 1.0) > 1e-10:
        raise ValueError(f"Initial state has norm^2 {norm2!r}, expected 1.")
    if abs(norm2 - 1.0) > RENORMALIZE_TOL:
        x /= np.sqrt(norm2)

    f, g = objective.evaluate(x)
    theta, r = multiplier_and_residual(x, g)
    state = OptimState(x=x, g=g, f=f, theta=theta, r=r, c=f)
    evaluations = 1
    best_x, best_f = x, f
    records = []
    if trace:
        records.append(TraceRecord(level, 0, f, state.residual, 0.0))

    converged = False
    while state.k < params.max_iter:
        if np.max(np.abs(state.r)) <= 0.5 * params.eps0 or (
            params.residual_tol is not None and state.residual <= params.residual_tol
        ):
            converged = True
            break

        if state.prev_x is None:
            tau0 = min(1e-2, 1.0 / (float(np.linalg.norm(state.g)) + 1.0))
        else:
            variant = 2 if state.k % 2 else 1
            tau0 = bb_step(
                state.x - state.prev_x,
                state.r - state.prev_r,
                variant,
                params.tau_min,
                params.tau_max,
            )

        found = nonmonotone_search(objective, state, tau0, params)
        evaluations += found.evaluations
        step = float(np.max(np.abs(found.x - state.x)))

        theta, r = multiplier_and_residual(found.x, found.g)
        state.prev_x, state.prev_r = state.x, state.r
        state.x, state.g, state.f = found.x, found.g, found.f
        state.theta, state.r, state.tau = theta, r, found.tau
        state.c, state.q = found.c, found.q
        state.k += 1
        if found.f < best_f:
            best_x, best_f = found.x, found.f

        logger.debug(
            "k=%d F=%.15g |R|=%.3e tau=%.3e m=%d",
            state.k, state.f, state.residual, found.tau, found.backtracks,
        )
        if trace:
            records.append(
                TraceRecord(level, state.k, state.f, state.residual, found.tau, found.backtracks)
            )
        if step / found.tau <= params.eps0:
            converged = True
            break

    return _Descent(state, best_x, best_f, evaluations, converged, records)


def gradient_descent(problem, x0, params=None, *, trace=False, level=0):
    """
    Minimize the energy of ``problem`` over the unit sphere starting at ``x0``.

    Stops once ``||X_{k+1} - X_k||_inf / tau_k <= eps0``, or earlier when the
    projected gradient is already below ``eps0 / 2``. Running out of
    iterations is reported through ``converged=False``.

    :param problem: discretized problem, or any object with ``evaluate``
    :type problem: bectools.groundstate.discretization.DiscreteProblem
    :param x0: unit norm initial state
    :type x0: numpy.ndarray
    :param params: method parameters, defaults when omitted
    :type params: GradParams | None
    :param trace: keep per-iteration trace records
    :type trace: bool
    :param level: level index written to the trace records
    :type level: int
    :rtype: bectools.groundstate.report.SolveReport
    """
    params = GradParams() if params is None else params
    start = time.perf_counter()
    run = _descend(problem, x0, params, trace=trace, level=level)
    state = run.state
    if not run.converged:
        logger.warning(
            "Gradient method stopped after %d iterations with residual %.3e.",
            state.k, state.residual,
        )
    else:
        logger.info(
            "Gradient method converged in %d iterations, F=%.12g.", state.k, state.f
        )
    return SolveReport(
        method="gradient",
        energy=state.f,
        residual=state.residual,
        theta=state.theta,
        iterations=state.k,
        function_evaluations=run.evaluations,
        converged=run.converged,
        state=state.x,
        trace=run.records,
        wall_time=time.perf_counter() - start,
    )
