#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the three hot loops (PageRank push, heat-kernel push, sweep profile)
on synthetic graphs of increasing size and prints a speedup table. Outputs
are also cross-checked for bitwise equality.

Usage: python benchmarks/kernel_benchmark.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from localcd._kernels import available_backends
from localcd.diffusion import SeedDistribution, hk_taylor_terms
from localcd.synth import edges_to_graph, planted_partition, ring_of_cliques


def build_instances():
    instances = []
    for num, size in ((200, 10), (1000, 10), (4000, 10)):
        edges, _ = ring_of_cliques(num, size)
        instances.append((f"ring {num}x{size}", edges_to_graph(edges)))
    edges, _ = planted_partition(100, 60, 0.2, 5e-4, seed=3)
    instances.append(("planted 100x60", edges_to_graph(edges)))
    return instances


def time_call(fn, args, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_graph(name, g, backends, repeat):
    dist = SeedDistribution.degree_weighted(g, [0])
    alpha, eps = 0.99, 1e-6
    coeffs, thresholds = hk_taylor_terms(4.0, 1e-5)
    rng = np.random.default_rng(0)
    order = rng.permutation(g.n)[: g.n - 1].astype(np.int64)

    jobs = {
        "ppr_push": ("ppr_push_csr",
                     (g.indptr, g.indices, g.degrees, dist.nodes, dist.weights, alpha, eps)),
        "hk_push": ("hk_push_csr",
                    (g.indptr, g.indices, g.degrees, dist.nodes, dist.weights, coeffs, thresholds)),
        "sweep": ("sweep_profile_csr",
                  (g.indptr, g.indices, g.degrees, order, g.total_volume)),
    }
    for job, (fn_name, args) in jobs.items():
        times, results = {}, {}
        for backend, module in backends.items():
            times[backend], results[backend] = time_call(getattr(module, fn_name), args, repeat)
        if len(results) == 2:
            a, b = results["python"], results["cython"]
            a0 = a[0] if isinstance(a, tuple) else a
            b0 = b[0] if isinstance(b, tuple) else b
            match = "ok" if np.array_equal(a0, b0) else "MISMATCH"
        else:
            match = "n/a"
        py = times.get("python", float("nan"))
        cy = times.get("cython", float("nan"))
        speedup = py / cy if "cython" in times else float("nan")
        print(
            f"{name:>16} | {job:<8} | python {py * 1e3:9.2f} ms | "
            f"cython {cy * 1e3:9.2f} ms | speedup {speedup:6.1f}x | {match}"
        )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = available_backends()
    print(f"backends available: {', '.join(backends)}")
    if "cython" not in backends:
        print("compiled extension missing; timing pure Python only")
    for name, g in build_instances():
        print(f"-- {name}: n={g.n} m={g.m}")
        bench_graph(name, g, backends, args.repeat)


if __name__ == "__main__":
    main()
