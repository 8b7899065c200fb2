#!/usr/bin/env python3
"""Benchmark the compiled literal-search kernels against the pure-Python
fallback, on raw kernel calls and on an end-to-end comparator training run.

Usage: python benchmarks/bench_search.py [--quick]
"""

import argparse
import time

import numpy as np

from rulerank import literal_search
from rulerank import _search_py

try:
    from rulerank import _search_fast
except ImportError:
    _search_fast = None


def _numeric_column(rng, n, n_unique, nan_frac=0.05):
    vals = rng.integers(0, n_unique, size=n).astype(np.float64)
    vals += rng.random(n)  # near-continuous values
    vals[rng.random(n) < nan_frac] = np.nan
    return vals


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(quick=False):
    rng = np.random.default_rng(0)
    sizes = [1_000, 10_000] if quick else [1_000, 10_000, 100_000]
    repeats = 3 if quick else 5
    banned = np.empty(0, dtype=np.float64)
    print(f"{'kernel':<14} {'rows':>8} {'pure (ms)':>11} {'compiled (ms)':>14} {'speedup':>8}")
    for n in sizes:
        xp = _numeric_column(rng, n, n // 4)
        xn = _numeric_column(rng, n, n // 4)
        t_py = _time(lambda: _search_py.best_numeric_split(xp, xn, banned), repeats)
        row = f"{'numeric':<14} {n:>8} {t_py * 1e3:>11.2f}"
        if _search_fast is not None:
            t_c = _time(lambda: _search_fast.best_numeric_split(xp, xn, banned), repeats)
            assert _search_fast.best_numeric_split(xp, xn, banned) == _search_py.best_numeric_split(xp, xn, banned)
            row += f" {t_c * 1e3:>14.2f} {t_py / t_c:>7.1f}x"
        print(row)
    nb = np.empty(0, dtype=np.int32)
    for n in sizes:
        n_codes = 40
        cp = rng.integers(-1, n_codes, size=n).astype(np.int32)
        cn = rng.integers(-1, n_codes, size=n).astype(np.int32)
        t_py = _time(lambda: _search_py.best_categorical_split(cp, cn, n_codes, nb), repeats)
        row = f"{'categorical':<14} {n:>8} {t_py * 1e3:>11.2f}"
        if _search_fast is not None:
            t_c = _time(lambda: _search_fast.best_categorical_split(cp, cn, n_codes, nb), repeats)
            row += f" {t_c * 1e3:>14.2f} {t_py / t_c:>7.1f}x"
        print(row)


def bench_training(quick=False):
    import rulerank as rr
    from rulerank.pairs import SamplerConfig

    rng = np.random.default_rng(1)
    n = 300 if quick else 500
    schema = rr.Schema(tuple((f"f{k}", rr.NUMERIC) for k in range(8)), target="y")
    feats = rng.random((n, 8))
    target = feats @ rng.random(8) + 0.1 * rng.random(n)
    items = [rr.Item(i, tuple(map(float, feats[i])), float(target[i])) for i in range(n)]
    data = rr.RankedDataset.from_items(schema, items)
    cfg = SamplerConfig(seed=2, max_pairs=1000 if quick else 3000)

    results = {}
    backends = [("pure-python", _search_py)]
    if _search_fast is not None:
        backends.append(("compiled", _search_fast))
    saved = literal_search._impl
    try:
        for name, impl in backends:
            literal_search._impl = impl
            t0 = time.perf_counter()
            cmp = rr.train(data, cfg)
            results[name] = (time.perf_counter() - t0, cmp.ruleset.clause_count())
    finally:
        literal_search._impl = saved

    print()
    print(f"{'end-to-end train':<20} {'seconds':>9} {'clauses':>8}")
    for name, (sec, clauses) in results.items():
        print(f"{name:<20} {sec:>9.2f} {clauses:>8}")
    if len(results) == 2:
        print(f"{'speedup':<20} {results['pure-python'][0] / results['compiled'][0]:>8.1f}x")
        assert results["pure-python"][1] == results["compiled"][1], "backends disagree"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    if _search_fast is None:
        print("compiled backend not built; timing the fallback only\n")
    bench_kernels(args.quick)
    bench_training(args.quick)


if __name__ == "__main__":
    main()
