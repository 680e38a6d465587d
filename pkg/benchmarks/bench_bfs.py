"""Time full-graph BFS on the embedded records with the numba and numpy backends.

    python benchmarks/bench_bfs.py --max-order 1000000 --repeats 3
"""

from __future__ import annotations

import argparse
import json
import statistics
import time

from cayleydd import _kernels
from cayleydd.cayley import bfs_stats, close_under_inverses
from cayleydd.records import load_records


def time_backend(group, gens, backend, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        stats = bfs_stats(group, gens, max_order=10**8, backend=backend)
        times.append(time.perf_counter() - t0)
    return statistics.median(times), stats.diameter


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=1_000_000)
    ap.add_argument("--min-order", type=int, default=10_000)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    backends = ["numpy"] + (["numba"] if _kernels.HAS_NUMBA else [])
    rows = []
    seen = set()
    for rec in sorted(load_records(), key=lambda r: r.order):
        if not args.min_order <= rec.order <= args.max_order or rec.order in seen:
            continue
        seen.add(rec.order)
        gens = close_under_inverses(rec.spec, rec.generators)
        if "numba" in backends:
            bfs_stats(rec.spec, gens, backend="numba")  # compile / load cache outside the timing
        row = {"record": rec.id, "order": rec.order, "degree": gens.degree}
        for b in backends:
            secs, diam = time_backend(rec.spec, gens, b, args.repeats)
            assert diam == rec.diameter
            row[b] = secs
        rows.append(row)

    if args.json:
        print(json.dumps(rows, indent=2))
        return
    head = f"{'record':>8} {'order':>10} {'deg':>4}" + "".join(f" {b + ' s':>10}" for b in backends)
    if len(backends) == 2:
        head += f" {'speedup':>8}"
    print(head)
    for r in rows:
        line = f"{r['record']:>8} {r['order']:>10} {r['degree']:>4}" + "".join(f" {r[b]:>10.3f}" for b in backends)
        if len(backends) == 2:
            line += f" {r['numpy'] / r['numba']:>7.2f}x"
        print(line)


if __name__ == "__main__":
    main()
