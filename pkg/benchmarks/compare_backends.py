"""Time the pure and compiled kernels on the same preclusion searches.

Usage: python benchmarks/compare_backends.py [--dims 3,3,3 ...] [--repeat N]
"""

from __future__ import annotations

import argparse
import time

from gridmp import _kernel, build_grid, parse_dims
from gridmp.preclusion import predicted_mp, pruning_witness


def _run_search(grid, k):
    arrays = grid.arrays
    base = sorted(pruning_witness(grid).ids)
    _kernel.find_preclusion_sets(arrays, range(arrays.n_edges), k,
                                 grid.order // 2, base_match=base)


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dims", action="append", default=None,
                        help="grid to time (repeatable); default 3,3 4,3 3,3,3")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    dims_list = args.dims or ["3,3", "4,3", "3,3,3"]

    names = _kernel.available_backends()
    if "accel" not in names:
        print("note: compiled backend unavailable; timing pure only")

    print(f"{'grid':>10} {'k':>3} {'subsets':>10} "
          + " ".join(f"{n:>10}" for n in names) + "  speedup")
    for text in dims_list:
        grid = build_grid(parse_dims(text))
        k = predicted_mp(grid)
        from math import comb
        subsets = comb(len(grid.edges), k)
        row = []
        for name in names:
            previous = _kernel.use_backend(name)
            try:
                row.append(_time(lambda: _run_search(grid, k), args.repeat))
            finally:
                _kernel.use_backend(previous)
        cells = " ".join(f"{t * 1000:9.1f}ms" for t in row)
        speedup = ""
        if len(row) == 2:
            slow, fast = max(row), min(row)
            speedup = f"  {slow / fast:5.1f}x"
        print(f"{text:>10} {k:>3} {subsets:>10} {cells}{speedup}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
