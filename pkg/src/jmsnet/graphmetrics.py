"""Macro, meso and micro metrics for directed weighted graphs.

Density, average shortest-path length, Brandes betweenness, directed
modularity, Louvain communities and the directed G(n, p) baseline. Per-source
kernels are compiled with numba and release the GIL, so ``workers > 1`` runs
them on a thread pool; partial results are always reduced in source order,
which keeps floating-point output identical for any worker count.
"""

from __future__ import annotations

import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

import numba
import numpy as np

from .semnet import SemanticGraph

BetweennessMode = Literal["unweighted", "inverse_weight"]


@dataclass(frozen=True, eq=False)
class Partition:
    nodes: tuple[str, ...]
    labels: np.ndarray

    def __post_init__(self):
        if len(self.labels) != len(self.nodes):
            raise ValueError("partition does not cover the node set")
        if len(self.labels):
            present = np.unique(self.labels)
            if present[0] != 0 or present[-1] != len(present) - 1:
                raise ValueError("community ids must be contiguous from 0")

    @property
    def community_count(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    @property
    def assignment(self) -> dict[str, int]:
        return dict(zip(self.nodes, self.labels.tolist()))

    @classmethod
    def from_labels(cls, nodes, labels) -> Partition:
        """Relabel arbitrary ids contiguously in order of first appearance."""
        remap: dict = {}
        out = np.empty(len(labels), dtype=np.int64)
        for i, label in enumerate(labels):
            out[i] = remap.setdefault(label, len(remap))
        return cls(tuple(nodes), out)


@dataclass(frozen=True)
class RandomGraphSpec:
    n: int
    p: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"random graph needs n >= 2, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"wiring probability must be in [0, 1], got {self.p}")


@dataclass
class GraphMetricsReport:
    n: int
    m: int
    density: float
    average_path_length: float
    modularity: float
    community_count: int
    betweenness: dict[str, float]
    top_betweenness: list[tuple[str, float]]
    partition: Partition | None = field(default=None, repr=False, compare=False)

    def summary(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "density": self.density,
            "average_path_length": self.average_path_length,
            "modularity": self.modularity,
            "community_count": self.community_count,
            "top_betweenness": [[node, score] for node, score in self.top_betweenness],
        }


# ---------------------------------------------------------------------------
# adjacency helpers


def _csr(graph: SemanticGraph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Out-adjacency in CSR form; edges are already sorted by source."""
    counts = np.bincount(graph.source, minlength=graph.n)
    indptr = np.zeros(graph.n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, graph.target.astype(np.int64), graph.weight.astype(np.float64)


def _chunks(n: int, workers: int) -> list[np.ndarray]:
    sources = np.arange(n, dtype=np.int64)
    pieces = max(1, min(n, workers * 4))
    return [c for c in np.array_split(sources, pieces) if len(c)]


# ---------------------------------------------------------------------------
# density and path length


def density(graph: SemanticGraph) -> float:
    if graph.n < 2:
        raise ValueError("density needs at least two nodes")
    return graph.m / (graph.n * (graph.n - 1))


@numba.njit(cache=True, nogil=True)
def _hop_totals(indptr, indices, sources, n):
    total = 0
    pairs = 0
    dist = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in sources:
        dist[:] = -1
        dist[s] = 0
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            v = queue[head]
            head += 1
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    total += dist[w]
                    pairs += 1
                    queue[tail] = w
                    tail += 1
    return total, pairs


def average_path_length(graph: SemanticGraph, workers: int = 1) -> float:
    """Mean hop count over ordered pairs (u, v), u != v, with v reachable from u."""
    indptr, indices, _ = _csr(graph)
    chunks = _chunks(graph.n, workers)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda c: _hop_totals(indptr, indices, c, graph.n), chunks))
    else:
        parts = [_hop_totals(indptr, indices, c, graph.n) for c in chunks]
    total = sum(int(t) for t, _ in parts)
    pairs = sum(int(p) for _, p in parts)
    if pairs == 0:
        raise ValueError("no reachable pair of distinct nodes")
    return total / pairs


# ---------------------------------------------------------------------------
# betweenness (Brandes 2001)


@numba.njit(cache=True, nogil=True)
def _brandes_bfs(indptr, indices, s, n, order, sigma, dist, delta):
    dist[:] = -1
    sigma[:] = 0.0
    dist[s] = 0
    sigma[s] = 1.0
    head = 0
    tail = 1
    order[0] = s
    while head < tail:
        v = order[head]
        head += 1
        for p in range(indptr[v], indptr[v + 1]):
            w = indices[p]
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                order[tail] = w
                tail += 1
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
    delta[:] = 0.0
    for k in range(tail - 1, -1, -1):
        v = order[k]
        acc = 0.0
        for p in range(indptr[v], indptr[v + 1]):
            w = indices[p]
            if dist[w] == dist[v] + 1:
                acc += sigma[v] / sigma[w] * (1.0 + delta[w])
        delta[v] = acc
    delta[s] = 0.0


@numba.njit(cache=True, nogil=True)
def _brandes_dijkstra(indptr, indices, length, s, n, order, sigma, dist, delta, done):
    dist[:] = np.inf
    sigma[:] = 0.0
    done[:] = False
    dist[s] = 0.0
    sigma[s] = 1.0
    heap = [(0.0, s)]
    count = 0
    while heap:
        d, v = heapq.heappop(heap)
        if done[v] or d > dist[v]:
            continue
        done[v] = True
        order[count] = v
        count += 1
        for p in range(indptr[v], indptr[v + 1]):
            w = indices[p]
            alt = dist[v] + length[p]
            if alt < dist[w]:
                dist[w] = alt
                sigma[w] = sigma[v]
                heapq.heappush(heap, (alt, w))
            elif alt == dist[w]:
                sigma[w] += sigma[v]
    delta[:] = 0.0
    for k in range(count - 1, -1, -1):
        v = order[k]
        acc = 0.0
        for p in range(indptr[v], indptr[v + 1]):
            w = indices[p]
            if done[w] and dist[v] + length[p] == dist[w]:
                acc += sigma[v] / sigma[w] * (1.0 + delta[w])
        delta[v] = acc
    delta[s] = 0.0


@numba.njit(cache=True, nogil=True)
def _brandes_rows(indptr, indices, length, sources, n, weighted):
    out = np.zeros((len(sources), n))
    order = np.empty(n, dtype=np.int64)
    sigma = np.empty(n)
    delta = np.empty(n)
    idist = np.empty(n, dtype=np.int64)
    fdist = np.empty(n)
    done = np.empty(n, dtype=np.bool_)
    for r in range(len(sources)):
        if weighted:
            _brandes_dijkstra(indptr, indices, length, sources[r], n, order, sigma, fdist,
                              delta, done)
        else:
            _brandes_bfs(indptr, indices, sources[r], n, order, sigma, idist, delta)
        out[r, :] = delta
    return out


def betweenness(graph: SemanticGraph, mode: BetweennessMode = "inverse_weight",
                workers: int = 1) -> dict[str, float]:
    """Unnormalized Brandes betweenness on the directed graph.

    ``inverse_weight`` treats an edge of weight w as a distance of 1/w, so
    heavier co-occurrence links are shorter.
    """
    if graph.n < 2:
        raise ValueError("betweenness needs at least two nodes")
    if mode not in ("unweighted", "inverse_weight"):
        raise ValueError(f"unknown betweenness mode {mode!r}")
    indptr, indices, weight = _csr(graph)
    length = 1.0 / weight
    weighted = mode == "inverse_weight"

    def run(chunk):
        return _brandes_rows(indptr, indices, length, chunk, graph.n, weighted)

    chunks = _chunks(graph.n, workers)
    scores = np.zeros(graph.n)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = map(run, chunks)
    for rows in parts:
        for row in rows:
            scores += row
    return dict(zip(graph.nodes, scores.tolist()))


def normalized_betweenness(scores: dict[str, float]) -> dict[str, float]:
    """Scale by 1 / ((n-1)(n-2)), the directed pair count excluding the node."""
    n = len(scores)
    scale = 1.0 / ((n - 1) * (n - 2)) if n > 2 else 0.0
    return {k: v * scale for k, v in scores.items()}


def top_k(scores: dict[str, float], k: int = 5) -> list[tuple[str, float]]:
    return sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))[:k]


# ---------------------------------------------------------------------------
# modularity


def modularity(graph: SemanticGraph, partition: Partition) -> float:
    """Directed weighted modularity.

    ``Q = (1/W) * sum_ij [w_ij - s_out_i * s_in_j / W] * [c_i == c_j]``
    """
    if partition.nodes != graph.nodes:
        raise ValueError("partition nodes do not match graph nodes")
    labels = partition.labels
    total = graph.weight.sum()
    if total == 0:
        raise ValueError("modularity of a graph without edges is undefined")
    k = partition.community_count
    inside = graph.weight[labels[graph.source] == labels[graph.target]].sum()
    out_strength = np.bincount(labels[graph.source], weights=graph.weight, minlength=k)
    in_strength = np.bincount(labels[graph.target], weights=graph.weight, minlength=k)
    return float((inside - (out_strength @ in_strength) / total) / total)


# ---------------------------------------------------------------------------
# Louvain (Blondel et al. 2008) on the symmetrized graph

_MOVE_EPS = 1e-12


@numba.njit(cache=True, nogil=True)
def _local_moving(indptr, indices, weights, degree, m2, order, community):
    n = len(degree)
    tot = np.zeros(n)
    for i in range(n):
        tot[community[i]] += degree[i]
    neigh_w = np.zeros(n)
    seen = np.zeros(n, dtype=np.bool_)
    neigh = np.empty(n, dtype=np.int64)
    improved = False
    for _ in range(10_000):
        moves = 0
        for idx in range(n):
            i = order[idx]
            ci = community[i]
            count = 1
            neigh[0] = ci
            seen[ci] = True
            neigh_w[ci] = 0.0
            for p in range(indptr[i], indptr[i + 1]):
                j = indices[p]
                if j == i:
                    continue
                c = community[j]
                if not seen[c]:
                    seen[c] = True
                    neigh_w[c] = 0.0
                    neigh[count] = c
                    count += 1
                neigh_w[c] += weights[p]
            ki = degree[i]
            tot[ci] -= ki
            stay = neigh_w[ci] - ki * tot[ci] / m2
            best_c = ci
            best_gain = stay
            for t in range(1, count):
                c = neigh[t]
                gain = neigh_w[c] - ki * tot[c] / m2
                if best_c == ci:
                    if gain > stay + _MOVE_EPS:
                        best_c = c
                        best_gain = gain
                elif gain > best_gain or (gain == best_gain and c < best_c):
                    best_c = c
                    best_gain = gain
            tot[best_c] += ki
            community[i] = best_c
            if best_c != ci:
                moves += 1
            for t in range(count):
                seen[neigh[t]] = False
        if moves == 0:
            break
        improved = True
    return improved


def _symmetrized_csr(graph: SemanticGraph):
    """Undirected CSR with w'_uv = w_uv + w_vu, both orientations stored."""
    n = graph.n
    src = np.concatenate([graph.source, graph.target])
    dst = np.concatenate([graph.target, graph.source])
    w = np.concatenate([graph.weight, graph.weight])
    return _compress(src, dst, w, n)


def _compress(src, dst, w, n):
    key = src * n + dst
    uniq, inverse = np.unique(key, return_inverse=True)
    summed = np.bincount(inverse, weights=w, minlength=len(uniq))
    rows = uniq // n
    cols = uniq % n
    counts = np.bincount(rows, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, cols.astype(np.int64), summed


def _contiguous(labels: np.ndarray) -> np.ndarray:
    _, first = np.unique(labels, return_index=True)
    order = np.argsort(first, kind="stable")
    remap = np.empty(labels.max() + 1, dtype=np.int64)
    remap[np.unique(labels)[order]] = np.arange(len(order))
    return remap[labels]


def louvain_communities(graph: SemanticGraph, seed: int = 0) -> Partition:
    """Louvain local moving + aggregation on the symmetrized weighted graph.

    Each level visits nodes in an order drawn from ``numpy.random.default_rng(seed)``;
    a node moves only for a strictly positive gain, equal gains resolve to the
    smallest community id.
    """
    if graph.m < 1:
        raise ValueError("community detection needs at least one edge")
    rng = np.random.default_rng(seed)
    indptr, indices, weights = _symmetrized_csr(graph)
    n = graph.n
    assignment = np.arange(n, dtype=np.int64)
    while True:
        size = len(indptr) - 1
        rows = np.repeat(np.arange(size, dtype=np.int64), np.diff(indptr))
        degree = np.bincount(rows, weights=weights, minlength=size)
        m2 = degree.sum()
        community = np.arange(size, dtype=np.int64)
        order = rng.permutation(size).astype(np.int64)
        if not _local_moving(indptr, indices, weights, degree, m2, order, community):
            break
        community = _contiguous(community)
        assignment = community[assignment]
        new_size = int(community.max()) + 1
        indptr, indices, weights = _compress(community[rows], community[indices], weights,
                                             new_size)
        if new_size == size:
            break
    return Partition(graph.nodes, _contiguous(assignment))


# ---------------------------------------------------------------------------
# random baseline


def random_directed_gnp(spec: RandomGraphSpec) -> SemanticGraph:
    """Directed G(n, p): each ordered pair u != v gets a weight-1 edge with probability p.

    Row u draws ``n`` uniforms from ``numpy.random.default_rng(seed)`` in order,
    so the sample depends only on (n, p, seed).
    """
    rng = np.random.default_rng(spec.seed)
    sources = []
    targets = []
    for u in range(spec.n):
        row = rng.random(spec.n) < spec.p
        row[u] = False
        hits = np.flatnonzero(row)
        sources.append(np.full(len(hits), u, dtype=np.int64))
        targets.append(hits.astype(np.int64))
    src = np.concatenate(sources)
    dst = np.concatenate(targets)
    degree = np.bincount(src, minlength=spec.n) + np.bincount(dst, minlength=spec.n)
    width = len(str(spec.n - 1))
    nodes = tuple(f"v{i:0{width}d}" for i in range(spec.n))
    return SemanticGraph(nodes, degree.astype(np.int64), src, dst, np.ones(len(src)))


# ---------------------------------------------------------------------------
# reports


def graph_report(graph: SemanticGraph, seed: int = 0, mode: BetweennessMode = "inverse_weight",
                 workers: int = 1, top: int = 5) -> GraphMetricsReport:
    partition = louvain_communities(graph, seed)
    scores = betweenness(graph, mode, workers)
    return GraphMetricsReport(
        n=graph.n,
        m=graph.m,
        density=density(graph),
        average_path_length=average_path_length(graph, workers),
        modularity=modularity(graph, partition),
        community_count=partition.community_count,
        betweenness=scores,
        top_betweenness=top_k(scores, top),
        partition=partition,
    )


def benchmark_report(spec: RandomGraphSpec, workers: int = 1) -> GraphMetricsReport:
    return graph_report(random_directed_gnp(spec), seed=spec.seed, workers=workers)
