"""Time the numba kernels against their numpy twins, and one solver step.

    python benchmarks/bench_kernels.py [--repeat 20] [--sizes 32,64,128,256]

Run with ``FRACSCHROD_NUMBA=0`` to check that the package imports and runs
without numba; the script itself switches backends with ``set_backend``.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from fracschrod import GridSpec, Scheme, _kernels
from fracschrod.operators import FracLaplacian
from fracschrod.problems import example2


def best_of(fn, repeat):
    fn()  # warm-up (and JIT compile)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(n, rng):
    g = GridSpec(0.0, 1.0, 0.0, 1.0, n + 1, n + 1, 1.5, 0.01, 0.01)
    op = FracLaplacian(g, method="fft")
    U = rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)
    V = rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)
    pot = np.abs(U) ** 2
    LU = op.apply(U)
    cases = {
        "weight_recurrence": lambda: _kernels.weight_recurrence(1.5, 1.57, 64 * n),
        "system_combine": lambda: _kernels.system_combine(U, LU, pot, 100.0),
        "rhs_combine": lambda: _kernels.rhs_combine(U, LU, pot, 100.0, V),
        "quartic_sum": lambda: _kernels.quartic_sum(U, V),
    }
    if n <= 128:
        cases["toeplitz_direct"] = lambda: _kernels.toeplitz_direct(U, op.wx, op.wy)
    cases["fft_apply (reference)"] = lambda: op.apply(U)
    return cases


def step_case(h):
    grid = GridSpec.uniform(-5, 5, -5, 5, h, 1.5, h, 10 * h)
    scheme = Scheme(example2(), grid)
    state = scheme.first_step()
    return grid, lambda: scheme.advance(state)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=20)
    p.add_argument("--sizes", default="32,64,128,256")
    args = p.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]
    backends = ["numpy"] + (["numba"] if _kernels.numba is not None else [])
    rng = np.random.default_rng(0)

    print(f"{'kernel':<24}{'n':>6}" + "".join(f"{b + ' [ms]':>14}" for b in backends) + f"{'speedup':>10}")
    for n in sizes:
        cases = kernel_cases(n, rng)
        for name, fn in cases.items():
            row = []
            for b in backends:
                _kernels.set_backend(b)
                row.append(best_of(fn, args.repeat) * 1e3)
            speed = f"{row[0] / row[-1]:.1f}x" if len(row) > 1 else ""
            print(f"{name:<24}{n:>6}" + "".join(f"{t:>14.4f}" for t in row) + f"{speed:>10}")

    print()
    for h in (1 / 8, 1 / 16, 1 / 20):
        grid, fn = step_case(h)
        row = []
        for b in backends:
            _kernels.set_backend(b)
            row.append(best_of(fn, max(3, args.repeat // 4)) * 1e3)
        print(f"{'advance (Example 2)':<24}{grid.Mx - 1:>6}" + "".join(f"{t:>14.3f}" for t in row))


if __name__ == "__main__":
    main()
