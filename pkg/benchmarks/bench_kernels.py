"""Time the numba and pure-numpy flavours of each hot kernel.

    python benchmarks/bench_kernels.py [--repeat N]

The first numba call includes JIT compilation (or cache loading) and is
reported separately.
"""

import argparse
import time

import numpy as np

from polymult import _kernels
from polymult.geometry import HalfSpaceSystem, compute_geometry


def box_args(system, k):
    g = compute_geometry(system)
    lo = np.array([int(np.ceil(k * b[0])) for b in g.coord_bounds])
    hi = np.array([int(np.floor(k * b[1])) for b in g.coord_bounds])
    return system.V(), k * system.a(), lo, hi


def cases():
    tetra = HalfSpaceSystem([[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]], [0, 0, 0, 3])
    yield "scan_box (3-simplex, k=40)", _kernels.scan_box_numba, _kernels.scan_box_numpy, box_args(tetra, 40)

    tri = HalfSpaceSystem([[1, 0], [0, 1], [-1, -1]], [0, 0, 3])
    step = 2e-3
    counts = np.array([int(3 / step) + 1] * 2)
    grid = (tri.V().astype(float), tri.a().astype(float), np.zeros(2), step, counts)
    yield "grid_argmin (triangle, step 2e-3)", _kernels.grid_argmin_numba, _kernels.grid_argmin_numpy, grid

    rng = np.random.default_rng(0)
    A = rng.normal(size=(3, 3))
    yield "quad_forms (10^6 x 3)", _kernels.quad_forms_numba, _kernels.quad_forms_numpy, (rng.normal(size=(10**6, 3)), A @ A.T)


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed")
    print(f"{'kernel':36s} {'numba first':>12s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, fast, slow, call in cases():
        t = time.perf_counter()
        fast(*call)
        first = time.perf_counter() - t
        t_fast = best_of(fast, call, args.repeat)
        t_slow = best_of(slow, call, args.repeat)
        print(f"{name:36s} {first:12.4f} {t_fast:10.4f} {t_slow:10.4f} {t_slow / t_fast:8.1f}x")


if __name__ == "__main__":
    main()
