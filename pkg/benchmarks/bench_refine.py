"""Compare the pure-Python and compiled partition backends.

    python3 benchmarks/bench_refine.py [--repeat N] [--json FILE]

Times canonical labeling of point-hyperplane incidence graphs (the hot path of
every search) plus a batch of random graphs, once per available backend.
"""

from __future__ import annotations

import argparse
import json
import random
import time
from itertools import combinations

from hjelmslev.canon import BACKENDS, ColoredGraph, canonical_form
from hjelmslev.geometry import build_geometry

CASES = [("Z4", 2), ("S22", 2), ("Z8", 2), ("Z4", 3), ("Z16", 2), ("G42", 2)]


def _random_graphs(count: int, seed: int = 1) -> list[ColoredGraph]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(10, 60)
        p = rng.random() * 0.3
        out.append(ColoredGraph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < p]))
    return out


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", metavar="FILE")
    args = ap.parse_args()

    rows = []
    graphs = {f"PHG({k},{ring})": ColoredGraph.bipartite(g.incidence, [0] * g.npoints, 1)
              for ring, k in CASES for g in [build_geometry(ring, k)]}
    batch = _random_graphs(200)
    for label, g in graphs.items():
        row = {"case": label, "vertices": g.n}
        forms = set()
        for b in sorted(BACKENDS):
            row[b] = _time(lambda: canonical_form(g, b), args.repeat)
            forms.add(canonical_form(g, b).canonical_form)
        row["backends_agree"] = len(forms) == 1
        rows.append(row)
    row = {"case": "200 random graphs", "vertices": sum(g.n for g in batch)}
    for b in sorted(BACKENDS):
        row[b] = _time(lambda: [canonical_form(g, b) for g in batch], args.repeat)
    rows.append(row)

    names = sorted(BACKENDS)
    print(f"{'case':<20} {'vertices':>8} " + " ".join(f"{b:>10}" for b in names) + ("     speedup" if len(names) > 1 else ""))
    for r in rows:
        line = f"{r['case']:<20} {r['vertices']:>8} " + " ".join(f"{r[b]:>9.4f}s" for b in names)
        if "cython" in r and "python" in r:
            line += f" {r['python'] / r['cython']:>10.1f}x"
        print(line)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
