"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--sizes 16,20,22] [--repeat 3]

Tables are random 40-bit shadow rows, so timings reflect the enumeration and
not any particular grid.  Each backend is warmed up once before timing.
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from gridkk import kernels
from gridkk._jit import HAVE_NUMBA


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="16,20,22", help="universe sizes for the full sweep")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(args.seed)
    warm = rng.integers(0, 2**40, size=8, dtype=np.uint64)
    for backend in ("numba", "numpy"):
        kernels.sweep_all(warm, backend)
        kernels.min_over_size(warm, 3, backend)
        kernels.shadow_sizes(warm, np.arange(4, dtype=np.uint64), backend)

    print(f"{'kernel':<36}{'numba s':>10}{'numpy s':>10}{'speedup':>10}")
    rows = []
    for n in (int(v) for v in args.sizes.split(",")):
        table = rng.integers(0, 2**40, size=n, dtype=np.uint64)
        rows.append((f"sweep_all N={n} (2^{n})", lambda b, t=table: kernels.sweep_all(t, b)))
    table = rng.integers(0, 2**40, size=27, dtype=np.uint64)
    rows.append((f"min_over_size 27 choose 6 ({math.comb(27, 6)})", lambda b: kernels.min_over_size(table, 6, b)))
    masks = rng.integers(0, 2**27, size=10**6, dtype=np.uint64)
    rows.append(("shadow_sizes 10^6 masks", lambda b: kernels.shadow_sizes(table, masks, b)))
    for name, fn in rows:
        t_jit = best_of(lambda: fn("numba"), args.repeat)
        t_np = best_of(lambda: fn("numpy"), args.repeat)
        print(f"{name:<36}{t_jit:>10.3f}{t_np:>10.3f}{t_np / t_jit:>9.1f}x")


if __name__ == "__main__":
    main()
