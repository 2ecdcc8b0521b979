"""
Run configuration.

Configurations are TOML files, either with ``[section]`` tables or with flat
dotted keys such as ``solver.eps0 = 1e-6``. A JSON document is accepted as
well, in which case the ``config`` block of a report can be fed back as is.

Every value not given keeps its default, and the effective configuration is
echoed into each report so a run can be reproduced from its output.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from ducktools.lazyimporter import FromImport, LazyImporter, ModuleImport, TryExceptImport

from .errors import ConfigError

__all__ = [
    "DomainConfig",
    "GridConfig",
    "ProblemConfig",
    "PotentialConfig",
    "InitConfig",
    "SolverConfig",
    "NewtonConfig",
    "OutputConfig",
    "StudyConfig",
    "RunConfig",
    "config_from_dict",
    "load_config",
    "dump_toml",
]

_laz = LazyImporter(
    [
        TryExceptImport("tomllib", "tomli", "tomllib"),
        ModuleImport(".grid", "grid"),
        ModuleImport(".potentials", "potentials"),
        FromImport(".gridio", "read_grid_data"),
        FromImport(".discretization", "build_problem"),
        FromImport(".sphere", "GradParams"),
        FromImport(".newton", "NewtonParams"),
    ],
    globs=globals(),
)


@dataclass(frozen=True)
class DomainConfig:
    bounds: tuple = ((-8.0, 8.0),)
    bc: str | None = None


@dataclass(frozen=True)
class GridConfig:
    n: object = 128


@dataclass(frozen=True)
class ProblemConfig:
    flavor: str = "sp"
    beta: float = 0.0
    omega: float = 0.0
    field: str | None = None


@dataclass(frozen=True)
class PotentialConfig:
    kind: str = "harmonic"
    gammas: tuple | None = None
    depth: float = 25.0
    period: float = 4.0
    omega0: float = 4.0
    width: float = 1.0
    r0: float = 1.0
    path: str | None = None


@dataclass(frozen=True)
class InitConfig:
    kind: str = "tf"
    path: str | None = None


@dataclass(frozen=True)
class SolverConfig:
    method: str = "gradient"
    levels: int = 1
    level_method: str = "newton"
    eps0: float = 1e-6
    max_iter: int = 2000
    eta: float = 0.85
    rho1: float = 1e-4
    delta_back: float = 0.5
    tau_min: float = 1e-10
    tau_max: float = 1e10
    monotone: bool = False
    probe_dirs: int = 20


@dataclass(frozen=True)
class NewtonConfig:
    eta1: float = 0.01
    eta2: float = 0.9
    gamma1: float = 2.0
    gamma2: float = 4.0
    delta0: float | None = None
    delta_stop: float = 1e-8
    k_init: int = 100
    k_sub: int = 200
    max_iter: int = 500


@dataclass(frozen=True)
class OutputConfig:
    dir: str = "out"
    trace: bool = False


@dataclass(frozen=True)
class StudyConfig:
    meshes: tuple = ()
    reference: object = None
    kinds: tuple = ()


_SECTIONS = {
    "domain": DomainConfig,
    "grid": GridConfig,
    "problem": ProblemConfig,
    "potential": PotentialConfig,
    "init": InitConfig,
    "solver": SolverConfig,
    "newton": NewtonConfig,
    "output": OutputConfig,
    "study": StudyConfig,
}

_METHODS = ("gradient", "newton", "cascadic")


def _tupled(value):
    if isinstance(value, (list, tuple)):
        return tuple(_tupled(v) for v in value)
    return value


def _coerce(section, name, value, default):
    where = f"{section}.{name}" if section else name
    if value is None:
        return None
    if name == "n" and isinstance(value, (list, tuple)):
        return tuple(_coerce(section, name, v, 0) for v in value)
    try:
        if isinstance(default, bool):
            if not isinstance(value, bool):
                raise TypeError(f"expected true or false, got {value!r}")
            return value
        if isinstance(default, int):
            if isinstance(value, bool) or int(value) != value:
                raise TypeError(f"expected an integer, got {value!r}")
            return int(value)
        if isinstance(default, float) or name in ("delta0",):
            return float(value)
        if isinstance(default, str) or name in ("bc", "field", "path"):
            if not isinstance(value, str):
                raise TypeError(f"expected a string, got {value!r}")
            return value
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), field=where) from None
    return _tupled(value)


def _section(name, data):
    cls = _SECTIONS[name]
    if not isinstance(data, dict):
        raise ConfigError(f"Expected a table, got {data!r}.", field=name)
    known = {f.name: f for f in fields(cls)}
    values = {}
    for key, value in data.items():
        if key not in known:
            raise ConfigError("Unknown configuration key.", field=f"{name}.{key}")
        values[key] = _coerce(name, key, value, known[key].default)
    return cls(**values)


@dataclass(frozen=True)
class RunConfig:
    domain: DomainConfig = field(default_factory=DomainConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    problem: ProblemConfig = field(default_factory=ProblemConfig)
    potential: PotentialConfig = field(default_factory=PotentialConfig)
    init: InitConfig = field(default_factory=InitConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    newton: NewtonConfig = field(default_factory=NewtonConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    study: StudyConfig = field(default_factory=StudyConfig)
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.solver.method not in _METHODS:
            raise ConfigError(
                f"Unknown method {self.solver.method!r}, expected one of {_METHODS!r}.",
                field="solver.method",
            )
        if self.threads < 1:
            raise ConfigError(f"Need at least one thread, got {self.threads!r}.", field="threads")

    @property
    def dim(self):
        return len(self.domain.bounds)

    @property
    def bc(self):
        if self.domain.bc is not None:
            return self.domain.bc
        return "periodic" if self.problem.flavor.lower() == "fp" else "dirichlet"

    def with_overrides(self, **sections):
        """
        Copy with some fields of some sections replaced, e.g.
        ``config.with_overrides(grid={"n": 64})``.

        :rtype: RunConfig
        """
        data = self.to_dict()
        for name, values in sections.items():
            if name in _SECTIONS:
                data.setdefault(name, {}).update(values)
            else:
                data[name] = values
        return config_from_dict(data)

    def to_dict(self):
        """
        Effective configuration as plain data, omitting unset optional values.

        :rtype: dict
        """
        data = {}
        for name in _SECTIONS:
            section = asdict(getattr(self, name))
            data[name] = {k: _listed(v) for k, v in section.items() if v is not None}
        data["seed"] = self.seed
        data["threads"] = self.threads
        return data

    # -- builders -------------------------------------------------------------

    def build_domain(self):
        return _laz.grid.Domain(bounds=self.domain.bounds, bc=self._enum("domain.bc", self.bc))

    def build_grid(self, n=None):
        """
        :param n: interval counts overriding ``grid.n``
        :rtype: bectools.groundstate.grid.Grid
        """
        spectral = self.problem.flavor.lower() in ("sp", "fp")
        counts = self.grid.n if n is None else n
        return _laz.grid.build_grid(self.build_domain(), counts, spectral=spectral)

    def build_potential(self, grid):
        pot = self.potential
        gammas = pot.gammas if pot.gammas is not None else (1.0,) * self.dim
        kind = pot.kind.lower()
        if kind == "harmonic":
            return _laz.potentials.HarmonicPotential(gammas)
        if kind == "lattice":
            return _laz.potentials.LatticePotential(gammas, pot.depth, pot.period)
        if kind == "stirrer":
            return _laz.potentials.StirrerPotential(gammas, pot.omega0, pot.width, pot.r0)
        if kind == "tabulated":
            if pot.path is None:
                raise ConfigError(
                    "Tabulated potentials need potential.path.", field="potential.path"
                )
            data = _laz.read_grid_data(pot.path)
            if data.grid != grid:
                raise ConfigError(
                    f"Tabulated potential grid {data.grid.n!r} does not match {grid.n!r}.",
                    field="potential.path",
                )
            return _laz.potentials.TabulatedPotential(data.values.real)
        raise ConfigError(f"Unknown potential kind {pot.kind!r}.", field="potential.kind")

    def build_problem(self, grid):
        """
        :type grid: bectools.groundstate.grid.Grid
        :rtype: bectools.groundstate.discretization.DiscreteProblem
        """
        return _laz.build_problem(
            grid,
            self.problem.flavor,
            self.build_potential(grid),
            self.problem.beta,
            self.problem.omega,
            self.problem.field,
        )

    def grad_params(self):
        s = self.solver
        return _laz.GradParams(
            eta=s.eta,
            rho1=s.rho1,
            delta_back=s.delta_back,
            eps0=s.eps0,
            max_iter=s.max_iter,
            tau_min=s.tau_min,
            tau_max=s.tau_max,
            monotone=s.monotone,
        )

    def newton_params(self):
        return _laz.NewtonParams(**asdict(self.newton))

    @staticmethod
    def _enum(where, value):
        try:
            return _laz.grid.BoundaryCondition(value.lower())
        except ValueError:
            raise ConfigError(f"Unknown boundary condition {value!r}.", field=where) from None


def _listed(value):
    if isinstance(value, tuple):
        return [_listed(v) for v in value]
    return value


def config_from_dict(data):
    """
    Build a validated :class:`RunConfig` from nested plain data.

    :type data: dict
    :rtype: RunConfig
    """
    sections = {}
    top = {}
    for key, value in data.items():
        if key in _SECTIONS:
            sections[key] = _section(key, value)
        elif key in ("seed", "threads"):
            top[key] = _coerce("", key, value, 0)
        else:
            raise ConfigError("Unknown configuration key.", field=key)
    return RunConfig(**sections, **top)


def load_config(path):
    """
    Read a TOML (or, by suffix, JSON) configuration file.

    :param path: configuration file
    :type path: str | os.PathLike
    :rtype: RunConfig
    """
    path = Path(path)
    if path.suffix.lower() == ".json":
        with path.open(encoding="utf-8") as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"Invalid JSON in {str(path)!r}: {exc}") from None
        # a report document carries its configuration under "config"
        if "config" in data and "energy" in data:
            data = data["config"]
    else:
        with path.open("rb") as f:
            try:
                data = _laz.tomllib.load(f)
            except _laz.tomllib.TOMLDecodeError as exc:
                raise ConfigError(f"Invalid TOML in {str(path)!r}: {exc}") from None
    return config_from_dict(data)


def _toml_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    raise TypeError(f"Cannot write {value!r} as TOML.")


def dump_toml(config):
    """
    Serialize a configuration as TOML tables.

    :type config: RunConfig
    :rtype: str
    """
    data = config.to_dict()
    lines = [f"seed = {_toml_value(data['seed'])}", f"threads = {_toml_value(data['threads'])}"]
    for name in _SECTIONS:
        if not data[name]:
            continue
        lines.append("")
        lines.append(f"[{name}]")
        for key, value in data[name].items():
            lines.append(f"{key} = {_toml_value(value)}")
    return "\n".join(lines) + "\n"
