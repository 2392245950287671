"""Compare the compiled cost/gradient kernels against the numpy fallback.

Times the raw kernels on representative problem sizes and one full solve per
robot with each backend. Run from the repository root:

    python benchmarks/bench_kernels.py
"""

import time

from dgik import _kernels
from dgik._kernels import _numpy as numpy_backend
from dgik.bench import TrialSpec, _generate
from dgik.robots import builtin_robot
from dgik.solver import SolverConfig


def time_call(fn, *args, repeats=2000):
    fn(*args)  # warm up
    start = time.perf_counter()
    for _ in range(repeats):
        fn(*args)
    return (time.perf_counter() - start) / repeats


def kernel_comparison():
    print("kernel cost_and_grad, per call")
    print(f"{'problem':<14}{'pairs':>7}{'compiled':>12}{'numpy':>12}{'speedup':>9}")
    for name in ("planar-10", "planar-100", "spherical-10", "ur10"):
        trial = _generate(TrialSpec(name, builtin_robot(name), 0, use_limits=True))
        p = trial.problem.initial
        args = trial.problem._pairs
        n_pairs = args[0].size + args[3].size
        t_fast = time_call(_kernels.cost_and_grad, p, *args)
        t_slow = time_call(numpy_backend.cost_and_grad, p, *args)
        print(
            f"{name:<14}{n_pairs:>7}{t_fast * 1e6:>10.1f}us{t_slow * 1e6:>10.1f}us"
            f"{t_slow / t_fast:>8.1f}x"
        )


def solve_comparison():
    from dgik import solver

    print("\nfull solve, one joint-limited instance per robot")
    print(f"{'problem':<14}{'compiled':>12}{'numpy':>12}{'speedup':>9}")
    for name in ("planar-10", "planar-100", "ur10"):
        trial = _generate(TrialSpec(name, builtin_robot(name), 1, use_limits=True))
        config = SolverConfig()
        times = {}
        for label, backend in (("compiled", _kernels), ("numpy", numpy_backend)):
            solver._kernels = backend
            start = time.perf_counter()
            out = solver.solve(trial.problem, config)
            times[label] = time.perf_counter() - start
        solver._kernels = _kernels
        print(
            f"{name:<14}{times['compiled'] * 1e3:>10.1f}ms{times['numpy'] * 1e3:>10.1f}ms"
            f"{times['numpy'] / times['compiled']:>8.1f}x"
        )


if __name__ == "__main__":
    if _kernels.BACKEND != "compiled":
        print("warning: compiled backend unavailable, comparing numpy against itself")
    kernel_comparison()
    solve_comparison()
