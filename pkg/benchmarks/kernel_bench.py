#!/usr/bin/env python3
"""Benchmark the hot kernels: numba-compiled vs pure-Python/numpy fallback.

Workload: the DPLL orientation search over a batch of G(n,p) instances
near the transitive-triangle crossing, plus one exhaustive 2^e
orientation scan.  Run:

    python benchmarks/kernel_bench.py [--trials 40] [--n 48]

The fallback DPLL is the same array code executed by the interpreter (the
search is inherently sequential); the exhaustive scan fallback is the
vectorized numpy path.
"""

import argparse
import time

import numpy as np

from orientramsey import kernels, transitive_tournament
from orientramsey.arrow import _pattern_arrays, enumerate_copies
from orientramsey.experiments import _gnp_from_seedseq, default_p_grid


def build_instances(n, trials, seed=0):
    tt3 = transitive_tournament(3)
    grid = default_p_grid(tt3, n)
    p = grid[len(grid) // 2]
    instances = []
    for trial in range(trials):
        g = _gnp_from_seedseq(n, p, np.random.SeedSequence([seed, n, 0, trial]))
        patterns = enumerate_copies(g, tt3)
        if not patterns:
            continue
        covered = sorted({pair for pat in patterns for pair in pat.edges})
        idx = {pair: i for i, pair in enumerate(covered)}
        instances.append((len(covered), _pattern_arrays(idx, patterns)))
    return instances


def time_dpll(fn, instances, budget=1_000_000):
    t0 = time.perf_counter()
    verdicts = []
    for n_edges, arrays in instances:
        status, _, _ = fn(n_edges, *arrays, budget)
        verdicts.append(int(status))
    return time.perf_counter() - t0, verdicts


def build_scan_instance(n=8, seed=3):
    tt3 = transitive_tournament(3)
    g = _gnp_from_seedseq(n, 0.7, np.random.SeedSequence([seed]))
    patterns = enumerate_copies(g, tt3)
    edge_list = g.edges()
    idx = {pair: i for i, pair in enumerate(edge_list)}
    pat_mask = np.zeros(len(patterns), np.int64)
    pat_req = np.zeros(len(patterns), np.int64)
    for i, pat in enumerate(patterns):
        for pair, bit in zip(pat.edges, pat.bits):
            pat_mask[i] |= np.int64(1) << idx[pair]
            if bit:
                pat_req[i] |= np.int64(1) << idx[pair]
    return g.e, pat_mask, pat_req


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=48)
    ap.add_argument("--trials", type=int, default=40)
    args = ap.parse_args()

    instances = build_instances(args.n, args.trials)
    print(f"DPLL workload: {len(instances)} instances at n={args.n}")

    py_time, py_verdicts = time_dpll(kernels.dpll_python, instances)
    print(f"  python fallback : {py_time:8.3f} s")

    if kernels.numba is not None:
        jit_dpll, jit_scan = kernels.build_jitted_kernels()
        time_dpll(jit_dpll, instances[:1])     # compile outside the clock
        jit_time, jit_verdicts = time_dpll(jit_dpll, instances)
        assert jit_verdicts == py_verdicts, "JIT and fallback disagree"
        print(f"  numba @njit     : {jit_time:8.3f} s   (x{py_time / jit_time:.1f})")
    else:
        print("  numba not installed; skipping JIT timing")

    n_edges, pat_mask, pat_req = build_scan_instance()
    t0 = time.perf_counter()
    np_count, np_first = kernels.exhaustive_scan_numpy(n_edges, pat_mask, pat_req)
    np_time = time.perf_counter() - t0
    print(f"scan workload: 2^{n_edges} orientations, {len(pat_mask)} patterns")
    print(f"  numpy fallback  : {np_time:8.3f} s  (free={np_count})")
    if kernels.numba is not None:
        _, jit_scan = kernels.build_jitted_kernels()
        jit_scan(n_edges, pat_mask, pat_req)
        t0 = time.perf_counter()
        jit_count, jit_first = jit_scan(n_edges, pat_mask, pat_req)
        jit_time = time.perf_counter() - t0
        assert (int(jit_count), int(jit_first)) == (np_count, np_first)
        print(f"  numba @njit     : {jit_time:8.3f} s   (x{np_time / jit_time:.1f})")


if __name__ == "__main__":
    main()
