"""Benchmark the Bessel matrix kernel: numba fast path vs numpy fallback.

The matrix J_k(x_i), k = 0..N, is assembled at every trial eigenvalue inside
the eigenvalue solver, so this is the one loop worth compiling.  Run

    python benchmarks/bench_kernels.py [--orders N] [--points M] [--repeat R]

The numba path is skipped automatically when SHAPESTAB_PURE_NUMPY is set.
"""

import argparse
import time

import numpy as np

from shapestab import _kernels


def time_call(fn, repeat):
    fn()  # warm-up (JIT compilation, caches)
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--orders", type=int, default=60,
                   help="largest Bessel order N (default 60)")
    p.add_argument("--points", type=int, default=400,
                   help="number of evaluation points (default 400)")
    p.add_argument("--repeat", type=int, default=50,
                   help="timed repetitions (default 50)")
    args = p.parse_args()

    rng = np.random.default_rng(0)
    x = rng.uniform(0.0, 3.0 * args.orders / 4.0, size=args.points)

    t_numpy = time_call(lambda: _kernels.bessel_j_matrix_numpy(args.orders, x),
                        args.repeat)
    print(f"matrix {args.points} x {args.orders + 1}, {args.repeat} reps")
    print(f"numpy/scipy fallback : {t_numpy * 1e3:9.3f} ms/call")

    if _kernels.using_numba():
        a = _kernels.bessel_j_matrix(args.orders, x)
        b = _kernels.bessel_j_matrix_numpy(args.orders, x)
        t_numba = time_call(lambda: _kernels.bessel_j_matrix(args.orders, x),
                            args.repeat)
        print(f"numba fast path      : {t_numba * 1e3:9.3f} ms/call "
              f"({t_numpy / t_numba:.1f}x)")
        print(f"max |difference|     : {np.max(np.abs(a - b)):.3e}")
    else:
        print("numba path inactive (SHAPESTAB_PURE_NUMPY set or numba missing)")


if __name__ == "__main__":
    main()
