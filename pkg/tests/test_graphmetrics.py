import itertools
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jmsnet.graphmetrics import (Partition, RandomGraphSpec, average_path_length, betweenness,
                                 density, graph_report, louvain_communities, modularity,
                                 normalized_betweenness, random_directed_gnp, top_k)
from jmsnet.semnet import SemanticGraph

import oracles


def path_abc():
    return SemanticGraph.from_edges(["a", "b", "c"], {("a", "b"): 1, ("b", "c"): 1})


def complete(n):
    names = [f"v{i}" for i in range(n)]
    return SemanticGraph.from_edges(names, {(u, v): 1 for u, v in itertools.permutations(names, 2)})


def seeded_graphs(count, n_max=50, seed=2024):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(3, n_max + 1))
        p = float(rng.uniform(0.03, 0.3))
        yield n, oracles.random_weighted_digraph(rng, n, p)


# density


def test_density_examples():
    assert density(complete(3)) == 1.0
    assert density(SemanticGraph.from_edges(["a", "b", "c"], {("a", "b"): 1})) == 1 / 6


def test_density_needs_two_nodes():
    with pytest.raises(ValueError):
        density(SemanticGraph.from_edges(["a"], {}))


# path length


def test_apl_examples():
    assert average_path_length(path_abc()) == 4 / 3
    assert average_path_length(complete(5)) == 1.0
    assert average_path_length(SemanticGraph.from_edges(["a", "b"], {("a", "b"): 1})) == 1.0


def test_apl_no_reachable_pair():
    with pytest.raises(ValueError):
        average_path_length(SemanticGraph.from_edges(["a", "b"], {}))


def test_apl_matches_bfs_oracle():
    for n, edges in seeded_graphs(20, n_max=200, seed=7):
        if not edges:
            continue
        assert average_path_length(oracles.to_graph(n, edges)) == oracles.apl_bfs(n, edges)


# betweenness


def test_betweenness_examples():
    assert betweenness(path_abc()) == {"a": 0.0, "b": 1.0, "c": 0.0}
    assert set(betweenness(complete(4), "unweighted").values()) == {0.0}


@pytest.mark.parametrize("mode", ["unweighted", "inverse_weight"])
def test_betweenness_matches_pair_dependency_oracle(mode):
    for n, edges in seeded_graphs(15, n_max=30):
        graph = oracles.to_graph(n, edges)
        got = betweenness(graph, mode)
        want = oracles.betweenness_pair_dependency(n, edges, mode == "inverse_weight")
        assert list(got.values()) == pytest.approx(want, abs=1e-9)


@pytest.mark.parametrize("mode", ["unweighted", "inverse_weight"])
def test_betweenness_matches_path_enumeration(mode):
    rng = np.random.default_rng(99)
    for _ in range(10):
        n = int(rng.integers(3, 8))
        edges = oracles.random_weighted_digraph(rng, n, 0.4)
        got = betweenness(oracles.to_graph(n, edges), mode)
        want = oracles.betweenness_all_paths(n, edges, mode == "inverse_weight")
        assert list(got.values()) == pytest.approx(want, abs=1e-9)


def test_betweenness_matches_networkx():
    for n, edges in seeded_graphs(5, n_max=50, seed=5):
        g = nx.DiGraph()
        g.add_nodes_from(range(n))
        for (u, v), w in edges.items():
            g.add_edge(u, v, dist=1.0 / w)
        ref = nx.betweenness_centrality(g, weight="dist", normalized=False)
        got = betweenness(oracles.to_graph(n, edges))
        assert list(got.values()) == pytest.approx([ref[i] for i in range(n)], abs=1e-9)


def test_equal_weights_modes_agree():
    rng = np.random.default_rng(3)
    for _ in range(10):
        n = int(rng.integers(5, 40))
        edges = oracles.random_weighted_digraph(rng, n, 0.15, weights=(3,))
        graph = oracles.to_graph(n, edges)
        assert betweenness(graph, "unweighted") == betweenness(graph, "inverse_weight")


def test_thread_count_does_not_change_results():
    graph = random_directed_gnp(RandomGraphSpec(150, 0.05, 11))
    one = (betweenness(graph, workers=1), average_path_length(graph, workers=1))
    four = (betweenness(graph, workers=4), average_path_length(graph, workers=4))
    assert one == four


def test_normalized_and_top():
    scores = {"a": 2.0, "b": 6.0, "c": 6.0, "d": 0.0}
    assert normalized_betweenness(scores) == {"a": 2 / 6, "b": 1.0, "c": 1.0, "d": 0.0}
    assert top_k(scores, 2) == [("b", 6.0), ("c", 6.0)]


def test_bad_mode():
    with pytest.raises(ValueError):
        betweenness(path_abc(), "harmonic")


# modularity


def test_all_in_one_is_zero():
    for n, edges in seeded_graphs(20, n_max=40, seed=17):
        if not edges:
            continue
        graph = oracles.to_graph(n, edges)
        assert modularity(graph, Partition(graph.nodes, np.zeros(n, dtype=np.int64))) == \
            pytest.approx(0.0, abs=1e-12)


def test_singleton_partition_formula():
    edges = {(0, 1): 2, (1, 2): 1, (2, 0): 1, (2, 3): 3, (3, 1): 1}
    graph = oracles.to_graph(4, edges)
    out_s = [sum(w for (u, _), w in edges.items() if u == i) for i in range(4)]
    in_s = [sum(w for (_, v), w in edges.items() if v == i) for i in range(4)]
    total = sum(edges.values())
    expected = -sum(o * i for o, i in zip(out_s, in_s)) / total ** 2
    got = modularity(graph, Partition(graph.nodes, np.arange(4)))
    assert got == pytest.approx(expected, abs=1e-15)
    assert got <= 0


def test_modularity_matches_direct_sum():
    rng = np.random.default_rng(8)
    for n, edges in seeded_graphs(20, n_max=25, seed=8):
        if not edges:
            continue
        labels = rng.integers(0, 4, size=n)
        graph = oracles.to_graph(n, edges)
        got = modularity(graph, Partition.from_labels(graph.nodes, labels.tolist()))
        assert got == pytest.approx(oracles.modularity_direct(n, edges, labels), abs=1e-12)


def test_modularity_rejects_mismatch():
    with pytest.raises(ValueError):
        modularity(path_abc(), Partition(("a", "b", "x"), np.zeros(3, dtype=np.int64)))


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition(("a", "b"), np.array([0, 2]))
    p = Partition.from_labels(("a", "b", "c"), [7, 3, 7])
    assert p.labels.tolist() == [0, 1, 0] and p.community_count == 2


# Louvain


def test_two_cliques_exhaustive_optimum_and_louvain():
    n, edges = oracles.two_cliques(4)
    graph = oracles.to_graph(n, edges)
    best, best_q = None, -math.inf
    for parts in oracles.set_partitions(list(range(n))):
        labels = [0] * n
        for c, block in enumerate(parts):
            for v in block:
                labels[v] = c
        q = oracles.modularity_direct(n, edges, labels)
        if q > best_q + 1e-12:
            best, best_q = sorted(sorted(b) for b in parts), q
    assert best == [[0, 1, 2, 3], [4, 5, 6, 7]]
    for seed in range(10):
        found = louvain_communities(graph, seed)
        assert found.labels.tolist() == [0, 0, 0, 0, 1, 1, 1, 1]
        assert modularity(graph, found) == pytest.approx(best_q, abs=1e-12)


def test_single_edge():
    graph = SemanticGraph.from_edges(["a", "b"], {("a", "b"): 1})
    assert modularity(graph, louvain_communities(graph, 0)) >= 0


@given(st.integers(0, 10_000))
def test_louvain_beats_trivial_partitions(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 40))
    edges = oracles.random_weighted_digraph(rng, n, 0.15)
    if not edges:
        return
    graph = oracles.to_graph(n, edges)
    q = modularity(graph, louvain_communities(graph, seed))
    singletons = modularity(graph, Partition(graph.nodes, np.arange(n)))
    assert q >= -1e-12 and q >= singletons - 1e-12
    assert -0.5 <= q <= 1


def test_louvain_deterministic():
    graph = random_directed_gnp(RandomGraphSpec(120, 0.05, 4))
    a = louvain_communities(graph, 9)
    b = louvain_communities(graph, 9)
    assert np.array_equal(a.labels, b.labels)


def test_louvain_close_to_networkx():
    graph = random_directed_gnp(RandomGraphSpec(300, 0.05, 1))
    ours = modularity(graph, louvain_communities(graph, 1))
    g = nx.DiGraph()
    g.add_nodes_from(graph.nodes)
    g.add_edges_from((u, v) for u, v, _ in graph.edges())
    comms = nx.community.louvain_communities(g.to_undirected(), seed=1)
    theirs = nx.community.modularity(g, comms)
    assert abs(ours - theirs) < 0.02


# random graphs


def test_gnp_extremes():
    assert random_directed_gnp(RandomGraphSpec(10, 0.0, 1)).m == 0
    full = random_directed_gnp(RandomGraphSpec(10, 1.0, 1))
    assert full.m == 90 and density(full) == 1.0


def test_gnp_seeded():
    a = random_directed_gnp(RandomGraphSpec(50, 0.1, 3))
    assert a == random_directed_gnp(RandomGraphSpec(50, 0.1, 3))
    assert a != random_directed_gnp(RandomGraphSpec(50, 0.1, 4))


@pytest.mark.parametrize("kwargs", [dict(n=1), dict(n=5, p=1.5), dict(n=5, p=-0.1)])
def test_spec_validation(kwargs):
    with pytest.raises(ValueError):
        RandomGraphSpec(**kwargs)


def test_report_on_complete_graph():
    report = graph_report(random_directed_gnp(RandomGraphSpec(10, 1.0, 0)))
    assert report.density == 1.0 and report.average_path_length == 1.0
    assert set(report.betweenness) == set(f"v{i}" for i in range(10))
    assert report.density * report.n * (report.n - 1) == report.m
