"""Compiled vs pure-Python kernels on fixed workloads.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json]

Each workload runs on both backends; node counts and answers must agree.
"""

from __future__ import annotations

import argparse
import json
import random
import statistics
import sys
import time
from itertools import combinations

from sunflower_lab import _pykernels
from sunflower_lab.family import mask_of
from sunflower_lab.search import SearchProblem, extremal_search

try:
    from sunflower_lab import _ckernels
except ImportError:
    _ckernels = None


def _search(problem, budget):
    def run(kern):
        res = extremal_search(problem, budget=budget, kernels=kern)
        return res.optimum, res.nodes_explored
    return run


def _packing(n, k, m, need_shift, count=40, seed=7):
    """Seeded random k-sets on [n]; ask for a packing of n//k + need_shift."""
    rng = random.Random(seed)
    pool = [mask_of(c) for c in combinations(range(1, n + 1), k)]
    instances = [rng.sample(pool, m) for _ in range(count)]
    need = n // k + need_shift

    def run(kern):
        return sum(kern.pack_disjoint(sets, need) is not None for sets in instances), None
    return run


WORKLOADS = [
    ("search k=2 r=3 n=12", _search(SearchProblem(2, 3, 12), 10**7)),
    ("search k=3 r=3 n=8", _search(SearchProblem(3, 3, 8), 10**7)),
    ("search k=3 r=3 n=9", _search(SearchProblem(3, 3, 9), 10**7)),
    ("search k=3 r=3 n=9 L={1,2}", _search(SearchProblem(3, 3, 9, L=(1, 2)), 10**7)),
    ("pack 40x perfect n=24 k=4", _packing(24, 4, 200, 0)),
    ("pack 40x infeasible n=13 k=4", _packing(13, 4, 300, 1)),
]


def bench(repeat: int):
    backends = [("python", _pykernels)]
    if _ckernels is not None:
        backends.insert(0, ("cython", _ckernels))
    rows = []
    for name, work in WORKLOADS:
        row = {"workload": name}
        answers = {}
        for label, kern in backends:
            times = []
            for _ in range(repeat):
                t0 = time.perf_counter()
                answers[label] = work(kern)
                times.append(time.perf_counter() - t0)
            row[label] = statistics.median(times)
        if len(set(answers.values())) > 1:
            raise SystemExit(f"backends disagree on {name}: {answers}")
        row["answer"] = answers["python"]
        if "cython" in row:
            row["speedup"] = row["python"] / row["cython"] if row["cython"] else float("inf")
        rows.append(row)
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    rows = bench(args.repeat)
    if args.json:
        json.dump(rows, sys.stdout, indent=2)
        print()
        return
    if _ckernels is None:
        print("compiled extension not built; pure-Python timings only")
    print(f"{'workload':<30} {'cython s':>10} {'python s':>10} {'speedup':>8}  answer")
    for row in rows:
        c = f"{row['cython']:.4f}" if "cython" in row else "-"
        sp = f"{row['speedup']:.1f}x" if "speedup" in row else "-"
        print(f"{row['workload']:<30} {c:>10} {row['python']:>10.4f} {sp:>8}  {row['answer']}")


if __name__ == "__main__":
    main()
