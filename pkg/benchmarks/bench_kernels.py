"""Benchmark the accelerated kernels against the pure numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py

Both backends are imported directly, so the MARKOVSIM_BACKEND flag does not
matter here; the package-level dispatch is what normal callers go through.
"""

import time

import numpy as np

from markovsim import _kernels
from markovsim.coding import _rlc_codebook


def timeit(fn, *args, repeat=5, min_loops=3):
    fn(*args)  # warm any JIT cache before measuring
    best = float("inf")
    for _ in range(repeat):
        loops = min_loops
        t0 = time.perf_counter()
        for _ in range(loops):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / loops)
    return best


def bench_chain():
    print("chain evaluation (ms/call)")
    print(f"{'n':>9} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    rng = np.random.default_rng(0)
    for n in (1_000, 16_000, 256_000):
        f = rng.integers(1, 5, n).astype(np.uint8)
        g = rng.integers(1, 5, n).astype(np.uint8)
        t_np = timeit(_kernels._markov_chain_numpy, f, g, 0)
        if _kernels.HAS_NUMBA:
            t_nb = timeit(_kernels._markov_chain_numba, f, g, np.uint8(0))
            print(f"{n:>9} {t_np * 1e3:>10.3f} {t_nb * 1e3:>10.3f} "
                  f"{t_np / t_nb:>7.1f}x")
        else:
            print(f"{n:>9} {t_np * 1e3:>10.3f} {'-':>10} {'-':>8}")


def bench_ml():
    print("\nmaximum-likelihood decode (ms/call)")
    print(f"{'k':>9} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    rng = np.random.default_rng(1)
    for k in (10, 14, 16):
        nc = 2 * k
        cb = _rlc_codebook(k, nc, seed=7)
        received = np.atleast_1d(
            _kernels.pack_bits(rng.integers(0, 2, nc).astype(np.uint8))
        )
        t_np = timeit(_kernels._ml_decode_numpy, cb, received)
        if _kernels.HAS_NUMBA:
            t_nb = timeit(_kernels._ml_decode_numba, cb, received)
            assert _kernels._ml_decode_numpy(cb, received) == int(
                _kernels._ml_decode_numba(cb, received)
            )
            print(f"{k:>9} {t_np * 1e3:>10.3f} {t_nb * 1e3:>10.3f} "
                  f"{t_np / t_nb:>7.1f}x")
        else:
            print(f"{k:>9} {t_np * 1e3:>10.3f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    print(f"numba available: {_kernels.HAS_NUMBA}")
    bench_chain()
    bench_ml()
