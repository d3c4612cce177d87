"""Timing comparison of the compiled and pure-Python search kernels.

Both backends implement the same traversal in the same order, so every
workload first asserts result parity (status code, payload, expansion
count) and only then reports times.  Usage:

    python benchmarks/bench_kernels.py [--repeats N] [--json]
"""

import argparse
import json
import sys
import time

import numpy as np

from hyperham._kernels import STATUS_NAMES, cover_start_tuples, pycore, window_index
from hyperham.extremal import construction_a, random_hypergraph

try:
    from hyperham._kernels import fastcore
except ImportError:  # extension not built
    fastcore = None


def _ham(impl, idx, budget):
    return impl.find_ham_cycle(
        idx.n, idx.k, idx.offsets, idx.values, idx.comb, budget
    )


def _normalize(result):
    code, payload, expansions = result
    payload = None if payload is None else [int(v) for v in payload]
    return int(code), payload, int(expansions)


def build_workloads():
    """name -> callable(impl) pairs; each callable returns the raw result
    of its last kernel call plus a total expansion count."""
    h9, _ = construction_a(9)
    idx9 = window_index(h9)
    h12, _ = construction_a(12)
    idx12 = window_index(h12)
    h_found = random_hypergraph(12, 4, 0.7, seed=2)
    idx_found = window_index(h_found)
    h40 = random_hypergraph(40, 4, 0.9, seed=7)
    idx40 = window_index(h40)
    allowed = np.ones(40, dtype=np.uint8)
    starts = cover_start_tuples(idx40)
    end_ok = np.ones(40**3, dtype=np.uint8)

    def ham_a9(impl):
        return _ham(impl, idx9, 50_000_000)

    def ham_a12(impl):
        return _ham(impl, idx12, 50_000_000)

    def ham_found_batch(impl):
        total = 0
        for _ in range(500):
            code, payload, exp = _ham(impl, idx_found, 1_000_000)
            total += exp
        return code, payload, total

    def path_batch(impl):
        total = 0
        for s in range(200):
            code, payload, exp = impl.find_path_exact(
                idx40.n, idx40.k, idx40.offsets, idx40.values, idx40.comb,
                [0, 1, 2], [3, 4, 5], 5 + (s % 4), allowed, 200_000,
            )
            total += exp
        return code, payload, total

    def cover_batch(impl):
        total = 0
        for _ in range(100):
            code, payload, exp = impl.find_cover_path(
                idx40.n, idx40.k, idx40.offsets, idx40.values, idx40.comb,
                starts, 7, allowed, end_ok, 100_000,
            )
            total += exp
        return code, payload, total

    return [
        ("ham-cycle exhaustive, construction_a(9)", ham_a9),
        ("ham-cycle exhaustive, construction_a(12)", ham_a12),
        ("ham-cycle found, random(12, p=0.7) x500", ham_found_batch),
        ("path-exact, random(40, p=0.9) x200", path_batch),
        ("cover-path, random(40, p=0.9) x100", cover_batch),
    ]


def time_workload(fn, impl, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(impl)
        best = min(best, time.perf_counter() - t0)
    return best, _normalize(result)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3, help="best-of timing")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    args = ap.parse_args(argv)

    backends = [("pure-python", pycore)]
    if fastcore is not None:
        backends.append(("cython", fastcore))
    else:
        print("note: compiled backend unavailable; timing pure Python only",
              file=sys.stderr)

    rows = []
    for name, fn in build_workloads():
        timings = {}
        results = {}
        for bname, impl in backends:
            secs, res = time_workload(fn, impl, args.repeats)
            timings[bname] = secs
            results[bname] = res
        distinct = {repr(r) for r in results.values()}
        assert len(distinct) == 1, f"backend results diverge on {name}: {results}"
        code, _, expansions = next(iter(results.values()))
        rows.append({
            "workload": name,
            "status": STATUS_NAMES[code],
            "expansions": expansions,
            "seconds": {b: round(t, 6) for b, t in timings.items()},
            "speedup": (
                round(timings["pure-python"] / timings["cython"], 2)
                if "cython" in timings and timings["cython"] > 0
                else None
            ),
        })

    if args.json:
        print(json.dumps({"repeats": args.repeats, "rows": rows}, indent=2,
                         sort_keys=True))
        return 0

    width = max(len(r["workload"]) for r in rows)
    header = f"{'workload':<{width}}  {'status':<8} {'expansions':>11}"
    for bname, _ in backends:
        header += f" {bname:>12}"
    if fastcore is not None:
        header += f" {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for r in rows:
        line = f"{r['workload']:<{width}}  {r['status']:<8} {r['expansions']:>11,}"
        for bname, _ in backends:
            line += f" {r['seconds'][bname]:>11.4f}s"
        if r["speedup"] is not None:
            line += f" {r['speedup']:>8.1f}x"
        print(line)
    print(f"\nparity: all {len(rows)} workloads returned identical "
          f"(status, payload, expansions) on every backend")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
