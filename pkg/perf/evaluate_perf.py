from timeit import timeit

import numpy as np

from bectools.groundstate import Domain, HarmonicPotential, build_grid, build_problem

N = 256

problems = {}
for flavor, bc in (("fd", "dirichlet"), ("sp", "dirichlet"), ("fp", "periodic")):
    grid = build_grid(Domain(bounds=((-8, 8), (-8, 8)), bc=bc), N)
    omega = 0.5 if flavor == "fp" else 0.0
    problems[flavor] = build_problem(grid, flavor, HarmonicPotential((1.0, 1.0)), 500.0, omega)


def unit_state(problem):
    x = np.ones(problem.shape, dtype=problem.dtype)
    return x / np.linalg.norm(x)


states = {flavor: unit_state(problem) for flavor, problem in problems.items()}

# warm up caches and FFT plans
for flavor, problem in problems.items():
    _ = timeit(lambda: problem.evaluate(states[flavor]), number=20)

timings = {
    flavor: timeit(lambda: problem.evaluate(states[flavor]), number=200) / 200
    for flavor, problem in problems.items()
}

print(f"evaluate() on a {N}x{N} grid:")
for flavor, seconds in timings.items():
    print(f"{flavor}: {1e3 * seconds:.3f}ms")
