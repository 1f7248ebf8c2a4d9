"""Time the numba Gray-code Ryser kernel against the vectorized numpy path.

    python benchmarks/bench_permanent.py [--max-k 20] [--repeat 3]

Both implementations are imported directly, so the BOSONBOUND_BACKEND flag
does not matter here. A batch row times a full m=8, n=4 output distribution
(330 permanents of 4x4 submatrices), the workload that dominates sweeps.
"""

import argparse
import time

import numpy as np

from bosonbound.fock import outcome_table
from bosonbound.linalg import haar_random_unitary
from bosonbound.permanent import (
    batch_permanents_numba,
    batch_permanents_numpy,
    permanent_numba,
    permanent_numpy,
)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-k", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    permanent_numba(np.eye(2, dtype=complex))  # compile outside the timed region

    print(f"{'k':>4} {'numba [s]':>12} {'numpy [s]':>12} {'speedup':>8} {'|diff|/|per|':>13}")
    for k in range(4, args.max_k + 1, 2):
        A = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        t_nb = best_of(lambda: permanent_numba(A), args.repeat)
        t_np = best_of(lambda: permanent_numpy(A), args.repeat)
        p_nb, p_np = permanent_numba(A), permanent_numpy(A)
        rel = abs(p_nb - p_np) / abs(p_nb)
        print(f"{k:>4} {t_nb:>12.3e} {t_np:>12.3e} {t_np / t_nb:>8.1f} {rel:>13.2e}")

    U = haar_random_unitary(8, 1)
    _, modes = outcome_table(8, 4)
    rows = np.ascontiguousarray(np.broadcast_to(np.arange(4), modes.shape))
    cols = np.ascontiguousarray(modes)
    batch_permanents_numba(U, rows, cols)
    t_nb = best_of(lambda: batch_permanents_numba(U, rows, cols), args.repeat)
    t_np = best_of(lambda: batch_permanents_numpy(U, rows, cols), args.repeat)
    print(f"\nbatch m=8 n=4 ({len(modes)} permanents): numba {t_nb:.3e} s, numpy {t_np:.3e} s, "
          f"speedup {t_np / t_nb:.1f}")


if __name__ == "__main__":
    main()
