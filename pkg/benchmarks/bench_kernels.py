#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy fallbacks.

Times each kernel pair on representative sizes and prints a table with the
speedup.  JIT compilation is triggered before timing.  Also times one dense
PPT-robustness solve with whichever kernel set is active (set
STABVERIFY_NO_NUMBA=1 to measure the fallback end to end).

    python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from stabverify import kernels


def timeit(fn, *args, repeats=5):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_pair(name, fn_numba, fn_numpy, args, repeats):
    fn_numba(*args)  # compile
    tn = timeit(fn_numba, *args, repeats=repeats)
    tp = timeit(fn_numpy, *args, repeats=repeats)
    print(f"{name:<28} numba {tn * 1e3:9.3f} ms   numpy {tp * 1e3:9.3f} ms   "
          f"speedup {tp / tn:6.1f}x")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)

    if not kernels.HAVE_NUMBA:
        print("numba is not importable; only the numpy path is available")
        return

    print(f"active dispatch: {'numba' if kernels.USE_NUMBA else 'numpy fallback'}")
    print()

    for n in (10, 16):
        x = rng.standard_normal(1 << n)
        bench_pair(f"fwht (2^{n})", kernels.fwht_numba, kernels.fwht_numpy,
                   (x,), args.repeats)

    for d in (32, 64, 128):
        A = rng.standard_normal((d, d))
        A = (A + A.T) / 2
        bench_pair(f"jacobi_eigh_real ({d}x{d})", kernels.jacobi_real_numba,
                   kernels.jacobi_real_numpy, (A, 1e-13), args.repeats)

    for d in (16, 64):
        H = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        H = (H + H.conj().T) / 2
        bench_pair(f"jacobi_eigh_herm ({d}x{d})", kernels.jacobi_herm_numba,
                   kernels.jacobi_herm_numpy, (H, 1e-13), args.repeats)

    for n in (4, 6):
        D = 1 << n
        p_true = rng.dirichlet(np.ones(D))
        m = kernels.fwht_numpy(p_true)
        idx = np.arange(1, D, dtype=np.int64)
        vals = m[idx] + rng.normal(0, 3e-3, idx.size)
        wts = np.full(idx.size, 1e5)
        p0 = np.full(D, 1.0 / D)
        bench_pair(f"pg_fit (2^{n}, full group)", kernels.pg_fit_numba,
                   kernels.pg_fit_numpy, (idx, vals, wts, p0, 200_000, 1e-9),
                   args.repeats)

    print()
    from stabverify import (GRAPH_PAPER4, FRAME_PAPER4, RobustnessProblem,
                            all_bipartitions, graph_state_vector, ppt_robustness)

    v = graph_state_vector(GRAPH_PAPER4, FRAME_PAPER4)
    rho = np.outer(v, v.conj())
    prob = RobustnessProblem(rho, all_bipartitions(4))
    ppt_robustness(prob)  # warm
    t = timeit(lambda: ppt_robustness(prob), repeats=max(2, args.repeats // 2))
    which = "numba" if kernels.USE_NUMBA else "numpy fallback"
    print(f"dense PPT robustness, 4-qubit cluster, all cuts ({which}): {t:.2f} s")


if __name__ == "__main__":
    main()
