# MIT License
# Copyright (c) 2024 bectools contributors
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

"""
Ground states of Bose-Einstein condensates by minimizing the discretized
Gross-Pitaevskii energy over the unit sphere.

The public names below are imported on first access, so importing the
package (or running ``bec-groundstate --help``) does not pull in scipy.
"""
from ducktools.lazyimporter import LazyImporter, MultiFromImport, get_module_funcs

from .errors import (
    ConfigError,
    FlavorMismatchError,
    GridDataError,
    GroundStateError,
    NumericalOverflowError,
    StepFailureError,
)

__version__ = "v0.1.0"

_laz = LazyImporter(
    [
        MultiFromImport(
            ".grid", ["Domain", "Grid", "BoundaryCondition", "build_grid", "refine_grid"]
        ),
        MultiFromImport(
            ".potentials",
            ["HarmonicPotential", "LatticePotential", "StirrerPotential", "TabulatedPotential"],
        ),
        MultiFromImport(
            ".discretization",
            [
                "Flavor",
                "FieldKind",
                "DiscreteProblem",
                "build_problem",
                "to_unified",
                "from_unified",
                "evaluate",
                "chemical_potential",
            ],
        ),
        MultiFromImport(".sphere", ["GradParams", "gradient_descent"]),
        MultiFromImport(
            ".newton", ["NewtonParams", "newton_solve", "cascadic_solve", "prolong"]
        ),
        MultiFromImport(".initial", ["InitKind", "thomas_fermi", "ansatz", "initial_state"]),
        MultiFromImport(
            ".observables",
            ["rms", "density", "max_density", "second_order_probe", "attach_observables"],
        ),
        MultiFromImport(".report", ["SolveReport", "TraceRecord"]),
        MultiFromImport(".config", ["RunConfig", "load_config"]),
        MultiFromImport(".studies", ["solve_config", "compare_init", "convergence_study"]),
    ],
    globs=globals(),
)

__getattr__, __dir__ = get_module_funcs(_laz, __name__)

__all__ = [
    "__version__",
    "GroundStateError",
    "ConfigError",
    "FlavorMismatchError",
    "NumericalOverflowError",
    "StepFailureError",
    "GridDataError",
    *dir(_laz),
]
