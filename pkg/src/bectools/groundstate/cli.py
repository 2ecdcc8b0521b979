"""
Command line front end.

    bec-groundstate solve --config case1.toml --out results/
    bec-groundstate refine --config rotating.toml --levels 4
    bec-groundstate compare-init --config rotating.toml --kinds a,b,bbar --threads 3
    bec-groundstate convergence-study --config case1.toml --meshes 32,64,128 --reference 512

Exit codes: 0 success, 2 configuration error, 3 nonconvergence or solver
failure, 4 I/O error.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from ducktools.lazyimporter import FromImport, LazyImporter, ModuleImport

from . import __version__
from .errors import ConfigError, GridDataError, GroundStateError

__all__ = [
    "EXIT_OK",
    "EXIT_CONFIG",
    "EXIT_NONCONVERGED",
    "EXIT_IO",
    "build_parser",
    "solve_command",
    "compare_init_command",
    "convergence_study_command",
    "main",
]

_laz = LazyImporter(
    [
        ModuleImport(".studies", "studies"),
        FromImport(".config", "load_config"),
        FromImport(".config", "dump_toml"),
        FromImport(".config", "RunConfig"),
        FromImport(".discretization", "from_unified"),
        FromImport(".gridio", "write_grid_data"),
        FromImport(".report", "write_trace"),
    ],
    globs=globals(),
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NONCONVERGED = 3
EXIT_IO = 4

REPORT_NAME = "report.json"
TIMING_NAME = "timing.json"
STATE_NAME = "state.gpegrid"
TRACE_NAME = "trace.csv"
CONFIG_NAME = "config.toml"
COMPARE_NAME = "compare_init.csv"
CONVERGENCE_NAME = "convergence.csv"


def _int_list(text):
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma separated integers, got {text!r}"
        ) from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bec-groundstate",
        description="Ground states of Bose-Einstein condensates by energy minimization "
        "on the unit sphere.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config", type=Path, required=True, help="TOML (or JSON) run configuration"
    )
    common.add_argument(
        "--out", type=Path, default=None, help="output directory (default: output.dir)"
    )
    common.add_argument(
        "--trace", action="store_true", default=None, help="write per-iteration trace"
    )
    common.add_argument("--seed", type=int, default=None, help="seed for the stationarity probe")
    common.add_argument("--threads", type=int, default=None, help="worker threads for studies")
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="more logging, repeatable"
    )

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="solve one configuration")

    refine = sub.add_parser("refine", parents=[common], help="cascadic multigrid solve")
    refine.add_argument(
        "--levels", type=int, default=None, help="number of grids (default: solver.levels)"
    )

    compare = sub.add_parser("compare-init", parents=[common], help="compare initial data")
    compare.add_argument("--kinds", type=lambda s: [k for k in s.split(",") if k], default=None,
                         help="comma separated init kinds (default: study.kinds)")

    study = sub.add_parser("convergence-study", parents=[common], help="mesh convergence table")
    study.add_argument("--meshes", type=_int_list, default=None,
                       help="comma separated grid counts, coarse to fine (default: study.meshes)")
    study.add_argument("--reference", type=int, default=None,
                       help="reference grid count (default: study.reference)")
    return parser


def _configure_logging(verbose):
    if verbose:
        level = logging.WARNING - 10 * min(verbose, 2)
    else:
        level = os.environ.get("BECTOOLS_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _apply_flags(config, args):
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.threads is not None:
        overrides["threads"] = args.threads
    output = {}
    if args.out is not None:
        output["dir"] = str(args.out)
    if args.trace:
        output["trace"] = True
    if output:
        overrides["output"] = output
    if getattr(args, "levels", None) is not None:
        overrides["solver"] = {"levels": args.levels}
    if args.command == "refine":
        overrides.setdefault("solver", {})["method"] = "cascadic"
    return config.with_overrides(**overrides) if overrides else config


def _out_dir(config):
    out = Path(config.output.dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def solve_command(config):
    """
    Solve a configuration and write its artifacts to ``output.dir``:
    the report, the wall time, the final state as grid data, the
    effective configuration and, when enabled, the trace.

    :type config: bectools.groundstate.config.RunConfig
    :rtype: bectools.groundstate.report.SolveReport
    """
    problem, report = _laz.studies.solve_config(config)
    out = _out_dir(config)
    report.write_json(out / REPORT_NAME)
    report.write_timing(out / TIMING_NAME)
    _laz.write_grid_data(out / STATE_NAME, problem.grid, _laz.from_unified(problem, report.state))
    (out / CONFIG_NAME).write_text(_laz.dump_toml(config), encoding="utf-8")
    if config.output.trace:
        _laz.write_trace(report.all_trace(), out / TRACE_NAME)
    return report


def compare_init_command(config, kinds=None):
    """
    :rtype: bectools.groundstate.studies.InitComparison
    """
    result = _laz.studies.compare_init(config, kinds)
    result.write_csv(_out_dir(config) / COMPARE_NAME)
    return result


def convergence_study_command(config, meshes=None, reference=None):
    """
    :rtype: bectools.groundstate.studies.ConvergenceTable
    """
    table = _laz.studies.convergence_study(config, meshes, reference)
    table.write_csv(_out_dir(config) / CONVERGENCE_NAME)
    return table


def _print_report(report):
    print(f"energy              {report.energy!r}")
    print(f"chemical potential  {report.chemical_potential!r}")
    for axis, value in zip("xyz", report.rms):
        print(f"{axis}_rms               {value!r}")
    print(f"max density         {report.max_density!r}")
    print(f"residual            {report.residual!r}")
    print(f"iterations          {report.total_iterations}")
    print(f"converged           {report.converged}")


def _run(args):
    config = _apply_flags(_laz.load_config(args.config), args)

    if args.command in ("solve", "refine"):
        report = solve_command(config)
        _print_report(report)
        return EXIT_OK if report.converged else EXIT_NONCONVERGED

    if args.command == "compare-init":
        result = compare_init_command(config, args.kinds)
        for row in result.rows:
            print(f"{row['kind']:>6} {row['energy']!r:>22} {row['flag']}")
        return EXIT_OK if all(row["converged"] for row in result.rows) else EXIT_NONCONVERGED

    table = convergence_study_command(config, args.meshes, args.reference)
    for row in table.rows:
        print(f"h={row.h!r:<10} {row.phi_error:.2e} {row.energy_error:.2e} {row.mu_error:.2e}")
    return EXIT_OK if table.converged else EXIT_NONCONVERGED


def main(argv=None):
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GridDataError, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except GroundStateError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED


if __name__ == "__main__":
    sys.exit(main())
