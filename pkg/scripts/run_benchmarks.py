"""Directed G(n, p) baselines: edge counts, density, Louvain clusters and modularity.

    python3 scripts/run_benchmarks.py --n 608 --n 3580 --seeds 20 --out results/benchmarks.csv

Path length and betweenness are skipped unless --full is given (they dominate
runtime at n=3580).
"""

from __future__ import annotations

import argparse
import csv
import statistics
import sys
import time
from pathlib import Path

from jmsnet.graphmetrics import (RandomGraphSpec, average_path_length, density,
                                 louvain_communities, modularity, random_directed_gnp)

REPORTED = {608: {"density": 0.025, "apl": 2.56, "clusters": 11, "modularity": 0.152},
            3580: {"clusters": 10, "modularity": 0.061}}


def run(n: int, p: float, seed: int, full: bool, workers: int) -> dict:
    start = time.perf_counter()
    graph = random_directed_gnp(RandomGraphSpec(n, p, seed))
    part = louvain_communities(graph, seed)
    row = {"n": n, "p": p, "seed": seed, "m": graph.m, "density": density(graph),
           "community_count": part.community_count, "modularity": modularity(graph, part)}
    if full:
        row["average_path_length"] = average_path_length(graph, workers)
    row["seconds"] = round(time.perf_counter() - start, 3)
    return row


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, action="append", help="node count (repeatable)")
    parser.add_argument("--p", type=float, default=0.05)
    parser.add_argument("--seeds", type=int, default=20)
    parser.add_argument("--full", action="store_true", help="also compute path length")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", type=Path)
    args = parser.parse_args(argv)

    rows = [run(n, args.p, s, args.full, args.workers)
            for n in args.n or [608] for s in range(args.seeds)]
    for n in sorted({r["n"] for r in rows}):
        group = [r for r in rows if r["n"] == n]
        qs = [r["modularity"] for r in group]
        cs = [r["community_count"] for r in group]
        line = (f"n={n}: density {statistics.mean(r['density'] for r in group):.4f}, "
                f"clusters {min(cs)}-{max(cs)} (median {statistics.median(cs)}), "
                f"modularity {min(qs):.4f}-{max(qs):.4f}")
        if "average_path_length" in group[0]:
            line += f", APL {statistics.mean(r['average_path_length'] for r in group):.3f}"
        if n in REPORTED:
            line += f"; reported {REPORTED[n]}"
        print(line)
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        with args.out.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
