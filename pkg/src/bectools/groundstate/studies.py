"""
Config driven solves and the reproduction studies built on them:
initial data comparisons and mesh convergence tables.
"""
from __future__ import annotations

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .discretization import chemical_potential
from .errors import ConfigError
from .initial import initial_state
from .newton import cascadic_solve, newton_solve
from .observables import align_phase, attach_observables
from .sphere import gradient_descent

__all__ = [
    "solve_config",
    "InitComparison",
    "compare_init",
    "ConvergenceRow",
    "ConvergenceTable",
    "convergence_study",
]

logger = logging.getLogger(__name__)

DAGGER = "†"


def _counts(config, n=None):
    n = config.grid.n if n is None else n
    if isinstance(n, (tuple, list)):
        return tuple(int(c) for c in n)
    return (int(n),) * config.dim


def solve_config(config, *, trace=None):
    """
    Build and solve the problem a configuration describes.

    For the cascadic method ``grid.n`` is the finest grid; coarser levels
    halve it ``solver.levels - 1`` times.

    :param config: run configuration
    :type config: bectools.groundstate.config.RunConfig
    :param trace: keep trace records, defaults to ``output.trace``
    :type trace: bool | None
    :return: the finest problem and its report with observables attached
    :rtype: tuple[DiscreteProblem, SolveReport]
    """
    trace = config.output.trace if trace is None else trace
    method = config.solver.method
    kind, path = config.init.kind, config.init.path

    if method == "cascadic":
        levels = config.solver.levels
        fine = _counts(config)
        scale = 2 ** (levels - 1)
        if any(c % scale for c in fine):
            raise ConfigError(
                f"Grid counts {fine!r} cannot be halved {levels - 1} times.", field="grid.n"
            )
        coarse = config.build_grid(tuple(c // scale for c in fine))
        report = cascadic_solve(
            config.build_problem,
            coarse,
            levels,
            lambda problem: initial_state(kind, problem, path),
            config.newton_params(),
            config.grad_params(),
            method=config.solver.level_method,
            trace=trace,
        )
        problem = config.build_problem(config.build_grid(fine))
    else:
        problem = config.build_problem(config.build_grid())
        x0 = initial_state(kind, problem, path)
        if method == "newton":
            report = newton_solve(
                problem, x0, config.newton_params(), config.grad_params(), trace=trace
            )
        else:
            report = gradient_descent(problem, x0, config.grad_params(), trace=trace)

    attach_observables(problem, report, probe_dirs=config.solver.probe_dirs, seed=config.seed)
    report.config = config.to_dict()
    return problem, report


def _map(func, items, threads):
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


@dataclass
class InitComparison:
    """
    Energies reached from several initial data; the lowest is flagged.
    """

    rows: list

    @property
    def minimum(self):
        return min(self.rows, key=lambda row: row["energy"])

    def write_csv(self, path):
        columns = ["kind", "energy", "chemical_potential", "iterations", "converged", "flag"]
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.DictWriter(f, columns, lineterminator="\n")
            writer.writeheader()
            for row in self.rows:
                writer.writerow({name: row[name] for name in columns})


def compare_init(config, kinds=None, threads=None):
    """
    Solve one problem from each initial data kind.

    :param config: base configuration
    :type config: bectools.groundstate.config.RunConfig
    :param kinds: init kinds, defaults to ``study.kinds``
    :type kinds: Sequence[str] | None
    :param threads: worker threads, defaults to ``threads``
    :type threads: int | None
    :rtype: InitComparison
    """
    kinds = list(config.study.kinds if kinds is None else kinds)
    if not kinds:
        raise ConfigError("No initial data kinds to compare.", field="study.kinds")
    threads = config.threads if threads is None else threads

    def run(kind):
        _, report = solve_config(config.with_overrides(init={"kind": kind}), trace=False)
        return report

    reports = _map(run, kinds, threads)
    rows = [
        {
            "kind": kind,
            "energy": report.energy,
            "chemical_potential": report.chemical_potential,
            "iterations": report.total_iterations,
            "converged": report.converged,
            "flag": "",
        }
        for kind, report in zip(kinds, reports)
    ]
    result = InitComparison(rows)
    result.minimum["flag"] = DAGGER
    best = result.minimum
    logger.info("Lowest energy %.10g from init %r.", best["energy"], best["kind"])
    return result


@dataclass
class ConvergenceRow:
    n: tuple
    h: float
    phi_error: float
    energy_error: float
    mu_error: float
    phi_order: float | None = None
    energy_order: float | None = None
    mu_order: float | None = None
    converged: bool = True


@dataclass
class ConvergenceTable:
    reference: tuple
    reference_energy: float
    reference_mu: float
    rows: list
    reference_converged: bool = True

    @property
    def converged(self):
        return self.reference_converged and all(row.converged for row in self.rows)

    def write_csv(self, path):
        columns = [
            "n", "h", "phi_error", "energy_error", "mu_error",
            "phi_order", "energy_order", "mu_order",
        ]
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(columns)
            for row in self.rows:
                values = [getattr(row, name) for name in columns]
                values[0] = "x".join(str(c) for c in row.n)
                writer.writerow(["" if v is None else v for v in values])


def _shared_nodes(reference, ratio, periodic):
    # coarse node j sits at fine node j * ratio
    index = []
    for r in ratio:
        index.append(slice(0, None, r) if periodic else slice(r - 1, None, r))
    return reference[tuple(index)]


def _order(previous, current, n_previous, n_current):
    if previous is None or not previous > 0 or not current > 0:
        return None
    return math.log(previous / current) / math.log(n_current / n_previous)


def convergence_study(config, meshes=None, reference=None, threads=None):
    """
    Errors of the ground state on a sequence of meshes against a reference
    solution on a finer nested mesh.

    The reference uses the sine pseudospectral flavor for Dirichlet problems
    and the Fourier one for periodic problems. States are compared at the
    nodes shared with the reference, after phase alignment.

    :param config: base configuration
    :type config: bectools.groundstate.config.RunConfig
    :param meshes: grid counts, coarse to fine, defaults to ``study.meshes``
    :param reference: reference grid count, defaults to ``study.reference``
        or the finest mesh
    :rtype: ConvergenceTable
    """
    meshes = [_counts(config, n) for n in (config.study.meshes if meshes is None else meshes)]
    if not meshes:
        raise ConfigError("No meshes given for the convergence study.", field="study.meshes")
    if reference is None:
        reference = config.study.reference
    ref_n = _counts(config, reference if reference is not None else max(meshes, key=sum))
    for n in meshes:
        if any(r % c for r, c in zip(ref_n, n)):
            raise ConfigError(
                f"Mesh {n!r} is not nested in the reference mesh {ref_n!r}.",
                field="study.meshes",
            )
    threads = config.threads if threads is None else threads

    ref_flavor = "fp" if config.bc == "periodic" else "sp"
    method = "newton" if config.solver.method == "cascadic" else config.solver.method
    base = config.with_overrides(solver={"method": method, "probe_dirs": 0})
    jobs = [(ref_flavor, ref_n)] + [(config.problem.flavor, n) for n in meshes]

    def run(job):
        flavor, n = job
        return solve_config(
            base.with_overrides(problem={"flavor": flavor}, grid={"n": list(n)}), trace=False
        )

    results = _map(run, jobs, threads)
    ref_problem, ref_report = results[0]
    ref_phi = ref_report.state / math.sqrt(ref_problem.cell_volume)
    ref_mu = chemical_potential(ref_problem, ref_report.state)
    periodic = ref_problem.grid.periodic

    rows = []
    previous = None
    for n, (problem, report) in zip(meshes, results[1:]):
        ratio = tuple(r // c for r, c in zip(ref_n, n))
        target = _shared_nodes(ref_phi, ratio, periodic)
        phi = align_phase(target, report.state / math.sqrt(problem.cell_volume))
        row = ConvergenceRow(
            n=n,
            h=max(problem.grid.h),
            phi_error=float(np.max(np.abs(target - phi))),
            energy_error=abs(ref_report.energy - report.energy),
            mu_error=abs(ref_mu - report.chemical_potential),
            converged=report.converged,
        )
        if previous is not None:
            prev_n = sum(previous.n)
            row.phi_order = _order(previous.phi_error, row.phi_error, prev_n, sum(n))
            row.energy_order = _order(previous.energy_error, row.energy_error, prev_n, sum(n))
            row.mu_order = _order(previous.mu_error, row.mu_error, prev_n, sum(n))
        rows.append(row)
        previous = row
        logger.info("mesh %r: energy error %.3e", n, row.energy_error)

    table = ConvergenceTable(ref_n, ref_report.energy, ref_mu, rows, ref_report.converged)
    if not table.converged:
        logger.warning("Some convergence study solves did not converge.")
    return table
