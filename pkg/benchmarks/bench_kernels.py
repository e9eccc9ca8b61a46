#!/usr/bin/env python3
"""Benchmark the sweep kernels: numba @njit vs the pure-numpy fallback.

Also times the exact big-int path on a subsample for scale.  The numba
numbers include a warmup call so JIT compilation is not billed.

    python3 benchmarks/bench_kernels.py --theta-height 1000 --phi-height 2000
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from collatzq.dynamics import PHI, THETA, orbit_pq, reduced_fractions
from collatzq.kernels import available_backends, phi_sweep, theta_sweep


def arrays(height: int):
    pairs = list(reduced_fractions(height))
    ps = np.array([p for p, _ in pairs], dtype=np.int64)
    qs = np.array([q for _, q in pairs], dtype=np.int64)
    return pairs, ps, qs


def timeit(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--theta-height", type=int, default=1000)
    ap.add_argument("--phi-height", type=int, default=2000)
    ap.add_argument("--cap", type=int, default=10_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--exact-sample", type=int, default=2000,
                    help="starts timed on the big-int path (extrapolated)")
    args = ap.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")

    for name, height in (("theta", args.theta_height), ("phi", args.phi_height)):
        pairs, ps, qs = arrays(height)
        print(f"\n{name} sweep, height {height}: {len(pairs)} starts")
        results = {}
        for backend in backends:
            if name == "theta":
                run = lambda b=backend: theta_sweep(ps, qs, args.cap, backend=b)
            else:
                run = lambda b=backend: phi_sweep(ps, qs, backend=b)
            run()  # warmup (JIT compile, cache touch)
            results[backend] = timeit(run, args.repeat)
            rate = len(pairs) / results[backend]
            print(f"  {backend:>6}: {results[backend] * 1e3:9.2f} ms  ({rate:,.0f} starts/s)")
        if len(backends) == 2:
            print(f"  numba speedup over numpy: {results['numpy'] / results['numba']:.1f}x")

        sample = pairs[: args.exact_sample]
        map_name = THETA if name == "theta" else PHI
        t0 = time.perf_counter()
        for p, q in sample:
            orbit_pq(p, q, map_name, args.cap)
        exact = time.perf_counter() - t0
        scaled = exact * len(pairs) / max(len(sample), 1)
        print(f"   exact: {exact * 1e3:9.2f} ms for {len(sample)} starts "
              f"(~{scaled * 1e3:,.0f} ms for all)")


if __name__ == "__main__":
    main()
