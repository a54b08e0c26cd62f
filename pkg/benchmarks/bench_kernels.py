"""Benchmark the compiled kernel against the pure numpy fallback.

Times the pivoted Gram orthonormalization on random positive semidefinite
complex matrices of increasing size, plus one end-to-end operator build at
the largest span the acceptance battery touches. Run as

    python3 benchmarks/bench_kernels.py [--sizes 128,256,512,1111] [--repeat 3]

The numba timing excludes the one-off JIT compilation (a warm-up call runs
first). Use CUNTZR_BACKEND to pin the backend used by the end-to-end build.
"""

import argparse
import time

import numpy as np

from cuntzr._kernels import active_backend, orthonormalize_gram
from cuntzr.rmatrix import build_r
from cuntzr.states import GPState


def random_gram(rng, n, rank):
    x = rng.normal(size=(rank, n)) + 1j * rng.normal(size=(rank, n))
    return x.conj().T @ x


def time_call(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="128,256,512,1111")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    have_numba = active_backend() == "numba"
    if have_numba:
        # warm the JIT once so compile time stays out of the numbers
        warm = random_gram(np.random.default_rng(0), 8, 8)
        orthonormalize_gram(warm, force="numba")
    else:
        print("numba unavailable or disabled; timing the numpy path only")

    rng = np.random.default_rng(42)
    print(f"{'N':>6} {'rank':>6} {'numpy (s)':>12} {'numba (s)':>12} {'speedup':>8}")
    for n in sizes:
        rank = max(1, int(0.9 * n))
        G = random_gram(rng, n, rank)
        t_np = time_call(lambda: orthonormalize_gram(G, force="numpy"), args.repeat)
        if have_numba:
            t_nb = time_call(
                lambda: orthonormalize_gram(G, force="numba"), args.repeat
            )
            print(f"{n:>6} {rank:>6} {t_np:>12.4f} {t_nb:>12.4f} {t_np / t_nb:>8.2f}")
        else:
            print(f"{n:>6} {rank:>6} {t_np:>12.4f} {'-':>12} {'-':>8}")

    print()
    print(f"end-to-end build, states (2,5), depth 3, backend={active_backend(1111)}")
    start = time.perf_counter()
    rmat = build_r(GPState.standard(2), GPState.standard(5), 3)
    elapsed = time.perf_counter() - start
    print(f"rank {rmat.rank}, unitarity residual {rmat.unitarity_residual:.1e}, "
          f"{elapsed:.2f} s")


if __name__ == "__main__":
    main()
