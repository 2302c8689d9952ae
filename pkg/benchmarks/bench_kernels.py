#!/usr/bin/env python3
"""Time the numba kernels against their numpy twins on realistic inputs.

Usage: python3 benchmarks/bench_kernels.py [--repeat 5] [--json]
"""

import argparse
import json
import time

import numpy as np

from hotkit import _kernels
from hotkit.boolfn import perm_source_index
from hotkit.subtypes import OutputOrder


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(rng):
    # Moebius transform of a dense 16-variable table
    n = 16
    values = rng.integers(0, 2, 1 << n).astype(np.int64)
    yield ("mobius_forward n=16",
           lambda: _kernels.mobius_forward_numpy(values, n),
           lambda: _kernels.mobius_forward_numba(values, n))

    # every permutation of 100k packed 5-variable tables
    tables = rng.integers(0, 2**32, 100_000, dtype=np.uint64) | np.uint64(1)
    src = perm_source_index((2, 3, 4, 5, 1))
    yield ("permute_tables 100k x n=5",
           lambda: _kernels.permute_tables_numpy(tables, src),
           lambda: _kernels.permute_tables_numba(tables, src))

    # one chunk of the monotone-subtype sweep at n=5, O={1,3}
    order = OutputOrder(5, 0b00101)
    free = np.array(order.free_strings(), dtype=np.int64)
    lo, hi = order.cover_pairs()
    base = sum(1 << int(s) for s in np.nonzero(order.up_table(0))[0])
    yield ("expand_free_bits 65536",
           lambda: _kernels.expand_free_bits_numpy(base, free, 0, 1 << 16),
           lambda: _kernels.expand_free_bits_numba(base, free, 0, 1 << 16))
    cand = _kernels.expand_free_bits_numpy(base, free, 0, 1 << 16)
    yield ("respects_pairs 65536 x n=5",
           lambda: _kernels.respects_pairs_numpy(cand, lo, hi),
           lambda: _kernels.respects_pairs_numba(cand, lo, hi))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    if not _kernels.NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed; pip install 'hotkit[fast]'")

    rng = np.random.default_rng(args.seed)
    rows = []
    for name, np_fn, nb_fn in cases(rng):
        nb_fn()  # compile outside the timing
        t_np, r_np = best_of(np_fn, args.repeat)
        t_nb, r_nb = best_of(nb_fn, args.repeat)
        if not np.array_equal(r_np, r_nb):
            raise SystemExit(f"{name}: numba and numpy results differ")
        rows.append({"kernel": name, "numpy_s": t_np, "numba_s": t_nb, "speedup": t_np / t_nb})

    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'kernel':<30}{'numpy':>11}{'numba':>11}{'speedup':>9}")
    for r in rows:
        print(f"{r['kernel']:<30}{r['numpy_s'] * 1e3:>9.2f}ms{r['numba_s'] * 1e3:>9.2f}ms{r['speedup']:>8.1f}x")


if __name__ == "__main__":
    main()
