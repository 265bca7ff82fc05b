#!/usr/bin/env python3
"""Compare the compiled kernels with the NumPy fallback.

Times the two hot paths on representative workloads:

- grid supremum of |g - f| over a 3-variable hypercube grid (the inner loop
  of the bound sweep), and
- batched root sweeps over hypersurface fibers (the inner loop of zero-set
  sampling).

Usage: python benchmarks/bench_kernels.py [--grid 21] [--fibers 20000]
"""

import argparse
import time

import numpy as np

from deformkit import SparsePoly, complex_grid_axis, random_deformation
from deformkit._kernels import _ref
from deformkit.roots import _initial_points_batch

try:
    from deformkit._kernels import _fast
except ImportError:
    _fast = None


def time_call(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def grid_workload(grid):
    f = SparsePoly(
        3,
        {
            (2, 1, 1): 1.0 + 0.3j,
            (0, 0, 4): -0.7j,
            (1, 0, 0): 0.5,
            (0, 2, 1): 0.9,
            (0, 0, 0): -1.1,
            (3, 1, 0): 0.4j,
        },
    )
    g = random_deformation(f, 1e-3, seed=0)
    diff = g - f
    items = diff.sorted_terms()
    exps = np.array([i for i, _ in items], dtype=np.int64)
    coeffs = np.array([c for _, c in items], dtype=np.complex128)
    axes = [complex_grid_axis(1.0, grid)] * 3
    points = axes[0].size ** 3
    return exps, coeffs, axes, points


def fiber_workload(fibers, degree=4):
    rng = np.random.default_rng(1)
    coeffs = rng.normal(size=(fibers, degree + 1)) + 1j * rng.normal(
        size=(fibers, degree + 1)
    )
    coeffs[:, -1] += 2.0
    return np.ascontiguousarray(coeffs), _initial_points_batch(coeffs)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grid", type=int, default=21)
    parser.add_argument("--fibers", type=int, default=20000)
    args = parser.parse_args()

    backends = [("numpy", _ref)]
    if _fast is not None:
        backends.append(("compiled", _fast))
    else:
        print("compiled kernels not built; timing the fallback only")

    exps, coeffs, axes, points = grid_workload(args.grid)
    print(f"\ngrid supremum: {points:,} points, {coeffs.size} terms")
    base = None
    for name, impl in backends:
        secs, (sup, _) = time_call(lambda: impl.grid_sup_abs(exps, coeffs, axes))
        rate = points / secs / 1e6
        note = "" if base is None else f"  ({base / secs:.1f}x vs numpy)"
        print(f"  {name:9s} {secs * 1e3:8.1f} ms  {rate:7.1f} Mpts/s  sup={sup:.6g}{note}")
        if base is None:
            base = secs

    cf, z0 = fiber_workload(args.fibers)
    print(f"\nbatched root sweeps: {args.fibers:,} fibers of degree {cf.shape[1] - 1}")
    base = None
    for name, impl in backends:
        secs, (roots, _, conv) = time_call(
            lambda: impl.aberth_batch(cf, z0, 1e-12, 200)
        )
        rate = args.fibers / secs / 1e3
        note = "" if base is None else f"  ({base / secs:.1f}x vs numpy)"
        print(
            f"  {name:9s} {secs * 1e3:8.1f} ms  {rate:7.1f} kfibers/s  "
            f"converged={int(conv.sum())}/{args.fibers}{note}"
        )
        if base is None:
            base = secs


if __name__ == "__main__":
    main()
