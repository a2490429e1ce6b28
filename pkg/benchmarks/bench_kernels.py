#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the NumPy fallback.

Usage:  python benchmarks/bench_kernels.py [--repeat 5]

Times the four hot functions on realistic workloads and, when the compiled
extension is available, prints the speedup side by side.
"""
import argparse
import time

import numpy as np

from pseudoht._backend import available_backends, get_backend
from pseudoht.kernels import qj_table
from pseudoht.quadrature import half_disc_rule


def timeit(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workloads():
    rng = np.random.default_rng(0)
    r = np.abs(rng.normal(size=200_000)) * 30
    v = rng.normal(size=20_000) * 300
    rho, w = half_disc_rule(256, 0.0)
    rr = np.linspace(1e-4, 1 - 1e-6, 50_000)
    pw, cf, ix = qj_table(3, 1)
    return [
        ("kappa_vec (200k)", lambda b: b.kappa_vec(r)),
        ("volume_element_vec (200k, n=3)", lambda b: b.volume_element_vec(r, 3)),
        ("osc_rho_sum (20k x 256)", lambda b: b.osc_rho_sum(v, rho, w)),
        ("offcone_accumulate (50k, n=3)",
         lambda b: b.offcone_accumulate(rr, 3.0, 0.04, pw, cf, ix, 3, 1, 1.0)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = {name: get_backend(name) for name in available_backends()}
    print(f"backends available: {', '.join(backends)}")
    header = f"{'workload':38s}" + "".join(f"{nm:>12s}" for nm in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    for label, fn in workloads():
        times = {nm: timeit(lambda b=b: fn(b), args.repeat) for nm, b in backends.items()}
        row = f"{label:38s}" + "".join(f"{t*1e3:10.2f}ms" for t in times.values())
        if len(times) == 2:
            t = list(times.values())
            row += f"{t[0] / t[1]:9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
