"""Benchmark the numba-jitted kernels against the numpy fallback path.

Both paths are bit-identical by construction (same splitmix64 stream,
same float expressions); this script times them on the three hot spots
and checks the outputs agree.

Usage:
    python benchmarks/bench_kernels.py [--steps N] [--side L]
"""

from __future__ import annotations

import argparse
import itertools
import math
import time

import numpy as np

from fqmap import _kernels
from fqmap.fermions import build_exchange, build_hopping_2d, encode, majorana_expansion
from fqmap.search import GateSet, Schedule, sa_run, unit_to_index
from fqmap.trees import enumerate_shapes, jw_tree


def time_backend(fn, backend: str):
    _kernels.set_backend(backend)
    if backend == "numba":
        fn()  # warm the JIT cache before timing
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def bench_sa(side: int, steps: int):
    hf = build_hopping_2d(side)
    hq = encode(hf, jw_tree(side * side).compile())
    sched = Schedule(1.0, 1.0, float(len(hq)), 0)

    def run():
        return sa_run(hq, GateSet.CH, sched, steps, seed=1)

    return f"sa_chain ({len(hq)} terms x {steps} steps)", run


def bench_replay(side: int, steps: int):
    hf = build_hopping_2d(side)
    hq = encode(hf, jw_tree(side * side).compile())
    record = sa_run(hq, GateSet.CH, Schedule(), steps, seed=2)
    n = hq.n_qubits
    codes = np.array(
        [unit_to_index(u, n) for u in record.moves], dtype=np.uint32
    )

    def run():
        xw, zw = hq.bit_arrays()
        _kernels.apply_units(xw, zw, codes, n)
        return int(_kernels.popcount_rows(xw, zw).sum())

    return f"apply_units ({len(codes)} accepted units)", run


def bench_perm_scan():
    hf = build_exchange()
    subsets = sorted(majorana_expansion(hf))
    sub_idx = np.zeros((len(subsets), 4), dtype=np.int64)
    sub_len = np.zeros(len(subsets), dtype=np.int64)
    for i, s in enumerate(subsets):
        sub_len[i] = len(s)
        sub_idx[i, : len(s)] = s
    shape = next(iter(enumerate_shapes(4)))
    strings = shape.compile().paulis
    xs = np.array([p.x for p in strings], dtype=np.uint64)
    zs = np.array([p.z for p in strings], dtype=np.uint64)
    perms = np.array(
        list(itertools.permutations(range(9))), dtype=np.uint8
    )

    def run():
        totals = _kernels.perm_weight_scan(xs, zs, sub_idx, sub_len, perms)
        return int(totals.min()), int(totals.sum())

    return f"perm_weight_scan ({math.factorial(9)} labelings)", run


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=200_000)
    parser.add_argument("--side", type=int, default=4)
    args = parser.parse_args()

    if not _kernels.NUMBA_AVAILABLE:
        raise SystemExit(
            "numba is unavailable (or disabled via FQMAP_NO_NUMBA); "
            "nothing to compare"
        )

    cases = [
        bench_sa(args.side, args.steps),
        bench_replay(args.side, args.steps),
        bench_perm_scan(),
    ]
    print(f"{'kernel':<45} {'numba':>10} {'numpy':>10} {'speedup':>9}")
    for name, fn in cases:
        out_nb, t_nb = time_backend(fn, "numba")
        out_np, t_np = time_backend(fn, "numpy")
        match = "ok" if out_nb == out_np else "MISMATCH"
        print(
            f"{name:<45} {t_nb:>9.3f}s {t_np:>9.3f}s "
            f"{t_np / t_nb:>8.1f}x  [{match}]"
        )
        if out_nb != out_np:
            raise SystemExit("backend outputs disagree")
    _kernels.set_backend("numba")


if __name__ == "__main__":
    main()
