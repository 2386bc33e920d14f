"""Which random-graph convention yields density 0.025 and modularity near 0.15 at n=608?

Compares the ordered-pair directed G(n, p) used by the package with a variant
that draws each unordered pair once with probability p and gives the edge a
random direction.

    python3 scripts/generator_convention.py --seeds 5
"""

from __future__ import annotations

import argparse
import statistics

import numpy as np

from jmsnet.graphmetrics import (RandomGraphSpec, average_path_length, density,
                                 louvain_communities, modularity, random_directed_gnp)
from jmsnet.semnet import SemanticGraph


def oriented_unordered_gnp(n: int, p: float, seed: int) -> SemanticGraph:
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    iu, ju = iu[keep], ju[keep]
    flip = rng.random(len(iu)) < 0.5
    src = np.where(flip, ju, iu)
    dst = np.where(flip, iu, ju)
    order = np.lexsort((dst, src))
    src, dst = src[order].astype(np.int64), dst[order].astype(np.int64)
    degree = np.bincount(src, minlength=n) + np.bincount(dst, minlength=n)
    nodes = tuple(f"v{i:03d}" for i in range(n))
    return SemanticGraph(nodes, degree, src, dst, np.ones(len(src)))


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, default=608)
    parser.add_argument("--p", type=float, default=0.05)
    parser.add_argument("--seeds", type=int, default=5)
    args = parser.parse_args()
    builders = {
        "ordered pairs": lambda s: random_directed_gnp(RandomGraphSpec(args.n, args.p, s)),
        "unordered pairs, random direction": lambda s: oriented_unordered_gnp(args.n, args.p, s),
    }
    for label, build in builders.items():
        stats = []
        for seed in range(args.seeds):
            g = build(seed)
            part = louvain_communities(g, seed)
            stats.append((density(g), average_path_length(g), part.community_count,
                          modularity(g, part)))
        cols = list(zip(*stats))
        print(f"{label:35s} density={statistics.mean(cols[0]):.4f} "
              f"apl={statistics.mean(cols[1]):.3f} clusters={min(cols[2])}-{max(cols[2])} "
              f"Q={statistics.mean(cols[3]):.3f}")


if __name__ == "__main__":
    main()
