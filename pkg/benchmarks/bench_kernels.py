#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure NumPy fallback.

Times the two hot kernels (Fock beamsplitter block fill, multiplexed
detector POVM fill) plus an end-to-end phase scan, on both backends.

Run: python benchmarks/bench_kernels.py
"""

import math
import os
import subprocess
import sys
import time

import numpy as np

from noonlab._kernels import _purecore

try:
    from noonlab._kernels import _fastcore
except ImportError:
    _fastcore = None


def best_of(fn, repeats=5):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def time_blocks(impl, n, reps=200):
    def run():
        for _ in range(reps):
            impl.bs_block(n, 0.5)

    return best_of(run) / reps


def time_povm(impl, modules, n_max, reps=200):
    def run():
        for _ in range(reps):
            impl.povm_matrix(modules, eta=0.5, n_max=n_max)

    return best_of(run) / reps


def main():
    print(f"numpy {np.__version__}; compiled backend "
          f"{'available' if _fastcore else 'NOT BUILT (pure only)'}\n")

    rows = []
    for n in (8, 16, 32, 64, 96):
        pure = time_blocks(_purecore, n)
        fast = time_blocks(_fastcore, n) if _fastcore else float("nan")
        rows.append((f"bs_block(N={n})", pure, fast))
    for modules, n_max in ((4, 40), (16, 120), (64, 200)):
        pure = time_povm(_purecore, modules, n_max)
        fast = time_povm(_fastcore, modules, n_max) if _fastcore else float("nan")
        rows.append((f"povm(D={modules}, n={n_max})", pure, fast))

    print(f"{'kernel':<22} {'pure (us)':>10} {'cython (us)':>12} {'speedup':>8}")
    for name, pure, fast in rows:
        ratio = pure / fast if fast == fast and fast > 0 else float("nan")
        print(f"{name:<22} {pure * 1e6:>10.1f} {fast * 1e6:>12.1f} {ratio:>7.1f}x")

    # end-to-end: 120-point coincidence scan under each backend (fresh
    # process so the import-time backend selection takes effect)
    code = (
        "import math, time; import noonlab as nl;"
        "src = nl.SourceSpec(r=0.1, gamma=2.016, phi_cs=math.pi, cutoff=20);"
        "det = nl.DetectorSpec(16, 0.5); bs = nl.BeamsplitterSpec();"
        "t0 = time.perf_counter();"
        "nl.coincidence_scan(src, bs, det, det, (3, 2));"
        "print(f'{nl.KERNEL_BACKEND}: {time.perf_counter() - t0:.3f}s')"
    )
    print("\ncoincidence_scan, 120 phases, cold caches:")
    for pure_env in ("0", "1"):
        env = dict(os.environ, NOONLAB_PURE=pure_env)
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True)
        print("  " + (out.stdout.strip() or out.stderr.strip()))


if __name__ == "__main__":
    main()
