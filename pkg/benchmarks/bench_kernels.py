#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--batch N] [--repeats R]

Covers the two hot paths: batch density evaluation (the falsification
sampler's inner loop) and the full transfer line-search scan (the
optimizer's inner loop). End-to-end numbers for one optimizer restart are
included since that is where the scan dominates.
"""

import argparse
import time

import numpy as np

from rainbowpath import _slowcore
from rainbowpath.model import Layout
from rainbowpath.optimize import OptimizerConfig

try:
    from rainbowpath import _fastcore
except ImportError:
    _fastcore = None


def _layout_arrays(k):
    lay = Layout(k)
    pi = np.array([i - 1 for i, j in lay.pairs], dtype=np.int32)
    pj = np.array([j - 1 for i, j in lay.pairs], dtype=np.int32)
    return lay, pi, pj


def bench_densities(impl, k, batch, repeats):
    lay, pi, pj = _layout_arrays(k)
    rng = np.random.default_rng(0)
    W = rng.dirichlet(np.ones(lay.dim), size=batch)
    impl.densities_batch(W[:16], k, pi, pj)      # warm up
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        impl.densities_batch(W, k, pi, pj)
        best = min(best, time.perf_counter() - t0)
    return batch / best                           # samples per second


def bench_transfer(impl, k, repeats):
    lay, pi, pj = _layout_arrays(k)
    rng = np.random.default_rng(1)
    points = rng.dirichlet(np.ones(lay.dim), size=64)
    impl.best_transfer(points[0], k, pi, pj)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for w in points:
            impl.best_transfer(w, k, pi, pj)
        best = min(best, time.perf_counter() - t0)
    return len(points) / best                     # scans per second


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--batch", type=int, default=100_000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    impls = [("numpy", _slowcore)]
    if _fastcore is not None:
        impls.append(("cython", _fastcore))
    else:
        print("compiled kernels not built; benchmarking the fallback only\n")

    print(f"{'kernel':<28} {'k':>3} " + "".join(f"{name:>14}" for name, _ in impls)
          + ("      speedup" if len(impls) == 2 else ""))
    for k in (3, 5, 8, 12):
        rates = [bench_densities(impl, k, args.batch, args.repeats) for _, impl in impls]
        row = f"{'densities_batch [samp/s]':<28} {k:>3} " + "".join(f"{r:>14.3g}" for r in rates)
        if len(rates) == 2:
            row += f"{rates[1] / rates[0]:>12.2f}x"
        print(row)
    for k in (3, 5, 8, 12):
        rates = [bench_transfer(impl, k, args.repeats) for _, impl in impls]
        row = f"{'best_transfer [scan/s]':<28} {k:>3} " + "".join(f"{r:>14.3g}" for r in rates)
        if len(rates) == 2:
            row += f"{rates[1] / rates[0]:>12.2f}x"
        print(row)

    print("\nend-to-end: one Dirichlet-start optimizer restart (k = 8)")
    import importlib
    import os

    import rainbowpath.kernels as kmod
    import rainbowpath.optimize as omod

    for name, _ in impls:
        os.environ["RAINBOWPATH_BACKEND"] = name
        importlib.reload(kmod)
        cfg = OptimizerConfig(restarts=1, seed=3)
        t0 = time.perf_counter()
        value, _, _, trace = omod._run_restart(8, cfg, restart=7)
        print(f"  {name:<8} {time.perf_counter() - t0:8.2f}s   "
              f"({len(trace)} iterations, reached {value:.9f})")
    os.environ.pop("RAINBOWPATH_BACKEND", None)
    importlib.reload(kmod)


if __name__ == "__main__":
    main()
