"""Benchmark the compiled kernel against the pure-Python reference.

Times the two workloads that dominate sweep runtime: single distance
evaluations and full p-maximizations, on a spread of states and orders.
Also cross-checks that both backends return the same numbers.

Run:  python benchmarks/bench_kernels.py [--states N]
"""
import argparse
import math
import time

import numpy as np

import nccoh._kernels.reference as reference

try:
    import nccoh._kernels._native as native
except ImportError:
    native = None


def make_states(n, seed=2024):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        r = rng.choice([1.0, rng.uniform(0.1, 0.99)])
        theta = rng.uniform(0.05, math.pi - 0.05)
        c, s = math.cos(theta), math.sin(theta)
        out.append((0.5 * (1 + r * c), 0.5 * r * s, 0.0, 0.5 * (1 - r * c)))
    return out


def bench_distance(kernel, states, reps=2000):
    start = time.perf_counter()
    acc = 0.0
    for st in states:
        for k in range(reps):
            p = 1e-4 + (k + 1) / (reps + 2) * 0.9998
            v = kernel.nc_distance(*st, p, 0.5, 0)
            if math.isfinite(v):
                acc += v
    elapsed = time.perf_counter() - start
    return elapsed, len(states) * reps, acc


def bench_maximize(kernel, states):
    start = time.perf_counter()
    acc = 0.0
    for st in states:
        value, _, _ = kernel.nc_maximize(*st, 0.5, 0, 2001, 60, 1e-4)
        acc += value
    elapsed = time.perf_counter() - start
    return elapsed, len(states), acc


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--states", type=int, default=30)
    args = parser.parse_args()

    states = make_states(args.states)
    backends = [("reference", reference)]
    if native is not None:
        backends.append(("native", native))
    else:
        print("native kernel not built; benchmarking the reference only")

    results = {}
    for name, kernel in backends:
        t_d, n_d, acc_d = bench_distance(kernel, states)
        t_m, n_m, acc_m = bench_maximize(kernel, states)
        results[name] = (t_d, n_d, t_m, n_m, acc_d, acc_m)
        print(
            f"{name:>10}: distance {n_d / t_d:12.0f} evals/s "
            f"({1e9 * t_d / n_d:7.1f} ns/eval) | "
            f"maximize {n_m / t_m:8.1f} opts/s ({1e3 * t_m / n_m:7.2f} ms/opt)"
        )

    if native is not None:
        ref, nat = results["reference"], results["native"]
        print(
            f"{'speedup':>10}: distance x{ref[0] / nat[0]:.1f} | "
            f"maximize x{ref[2] / nat[2]:.1f}"
        )
        for label, i in (("distance", 4), ("maximize", 5)):
            drift = abs(ref[i] - nat[i]) / max(abs(ref[i]), 1.0)
            print(f"{'check':>10}: {label} accumulators agree to {drift:.2e}")


if __name__ == "__main__":
    main()
