"""
Solve reports and per-iteration trace records.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, fields

import numpy as np

__all__ = ["TraceRecord", "SolveReport", "write_trace"]


@dataclass
class TraceRecord:
    """
    One iteration of a solver.

    ``step`` is the accepted step size for gradient iterations and the
    regularization parameter for Newton iterations.
    """

    level: int
    k: int
    energy: float
    residual: float
    step: float
    backtracks: int = 0
    accepted: bool = True
    rho: float | None = None


TRACE_FIELDS = [f.name for f in fields(TraceRecord)]


def _scalar(value):
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


@dataclass
class SolveReport:
    """
    Result of a solve: the final state, its energy and solver statistics.

    Observables (``chemical_potential``, ``rms``, ...) are filled in by
    :func:`bectools.groundstate.observables.attach_observables`.
    """

    method: str
    energy: float
    residual: float
    theta: float
    iterations: int
    function_evaluations: int
    converged: bool
    state: np.ndarray = field(repr=False)
    rejected_steps: int = 0
    chemical_potential: float | None = None
    rms: tuple = ()
    max_density: float | None = None
    angular_momentum: float | None = None
    probe: dict | None = None
    levels: list = field(default_factory=list, repr=False)
    trace: list = field(default_factory=list, repr=False)
    config: dict | None = field(default=None, repr=False)
    wall_time: float = 0.0

    @property
    def total_iterations(self):
        if self.levels:
            return sum(level.total_iterations for level in self.levels)
        return self.iterations

    def to_dict(self):
        """
        JSON ready view of the report.

        The state, the trace and the wall time are left out so identical runs
        produce identical documents.

        :rtype: dict
        """
        data = {
            "method": self.method,
            "converged": bool(self.converged),
            "energy": _scalar(self.energy),
            "chemical_potential": _scalar(self.chemical_potential),
            "rms": [_scalar(v) for v in self.rms],
            "max_density": _scalar(self.max_density),
            "angular_momentum": _scalar(self.angular_momentum),
            "residual": _scalar(self.residual),
            "theta": _scalar(self.theta),
            "iterations": int(self.iterations),
            "function_evaluations": int(self.function_evaluations),
            "rejected_steps": int(self.rejected_steps),
        }
        if self.probe is not None:
            data["probe"] = {k: _scalar(v) for k, v in self.probe.items()}
        if self.levels:
            data["levels"] = [level.to_dict() for level in self.levels]
        if self.config is not None:
            data["config"] = self.config
        return data

    def write_json(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(self.to_dict(), f, indent=2)
            f.write("\n")

    def write_timing(self, path):
        timing = {"wall_time": self.wall_time}
        if self.levels:
            timing["levels"] = [level.wall_time for level in self.levels]
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(timing, f, indent=2)
            f.write("\n")

    def all_trace(self):
        """
        Trace records of this report, or of every level in order for a
        cascadic solve.

        :rtype: list[TraceRecord]
        """
        if self.levels:
            return [record for level in self.levels for record in level.all_trace()]
        return list(self.trace)


def write_trace(records, path):
    """
    Write trace records as comma separated text with a header row.

    :param records: trace records
    :type records: Iterable[TraceRecord]
    :param path: destination
    """
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TRACE_FIELDS)
        for record in records:
            writer.writerow(
                ["" if getattr(record, name) is None else getattr(record, name)
                 for name in TRACE_FIELDS]
            )
