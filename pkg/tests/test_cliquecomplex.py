from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyntda import io
from dyntda.cliquecomplex import (
    CliqueComplex,
    Graph,
    ThresholdRule,
    build_graph,
    degeneracy_order,
    enumerate_cliques,
    graph_stats,
)
from dyntda.errors import MetricError
from dyntda.quantumsim import pairwise_overlaps
from corpus import circle_points, complete, cycle, overlap_from_values, random_graph


def brute_force_cliques(G, r_max):
    adj = G.neighbors()
    levels = []
    for r in range(r_max + 1):
        levels.append(tuple(s for s in combinations(range(G.n), r + 1)
                            if all(v in adj[u] for u, v in combinations(s, 2))))
    return tuple(levels)


def test_paper_literal_rule():
    D = overlap_from_values([[1.0, 0.1, 0.5], [0.1, 1.0, 0.9], [0.5, 0.9, 1.0]])
    G = build_graph(D, ThresholdRule("paper_literal", 0.5))
    assert G.edges == ((0, 1), (0, 2))
    assert not ThresholdRule("paper_literal", 0.5).monotone


def test_zero_threshold_generic_states_is_empty():
    rng = np.random.default_rng(1)
    D = pairwise_overlaps(rng.normal(size=(8, 3)))
    assert build_graph(D, ThresholdRule("cosine_dissimilarity", 0.0)).edges == ()


def test_circle_neighbours_form_cycle():
    # overlaps are |cos|, so directions repeat every half turn: sample half a circle
    m = 30
    theta = np.pi * np.arange(m) / m
    D = pairwise_overlaps(np.column_stack([np.cos(theta), np.sin(theta)]))
    # neighbours sit at 1 - cos(6 deg) ~ 0.0055, next-nearest at 1 - cos(12 deg) ~ 0.0219
    G = build_graph(D, ThresholdRule("cosine_dissimilarity", 0.01))
    assert G.edges == cycle(m).edges


def test_full_circle_links_antipodes():
    D = pairwise_overlaps(circle_points(30))
    G = build_graph(D, ThresholdRule("cosine_dissimilarity", 0.01))
    assert G.edges == tuple((i, i + 15) for i in range(15))


def test_euclidean_rule_uses_norms():
    pts = np.array([[1.0, 0.0], [2.0, 0.0], [0.0, 1.0]])
    D = pairwise_overlaps(pts)
    G = build_graph(D, ThresholdRule("euclidean", 1.2))
    assert G.edges == ((0, 1),)
    # swap-test matrices carry no signed inner products
    Ds = pairwise_overlaps(pts, "swap_test", 100, 0)
    with pytest.raises(MetricError):
        build_graph(Ds, ThresholdRule("euclidean", 1.2))


def test_rule_validation():
    with pytest.raises(MetricError):
        ThresholdRule("manhattan", 0.1)
    with pytest.raises(MetricError):
        ThresholdRule("cosine_dissimilarity", -0.1)


def test_graph_normalizes_and_rejects_bad_edges():
    assert Graph(3, ((2, 0), (0, 2), (1, 2))).edges == ((0, 2), (1, 2))
    with pytest.raises(ValueError):
        Graph(3, ((1, 1),))
    with pytest.raises(ValueError):
        Graph(3, ((0, 3),))


def test_k4_and_c4_counts():
    K = enumerate_cliques(complete(4), 3)
    assert K.counts == (4, 6, 4, 1) and K.full
    C = enumerate_cliques(cycle(4), 3)
    assert C.counts == (4, 4, 0, 0) and C.full


def test_truncated_enumeration_not_full():
    K = enumerate_cliques(complete(5), 2)
    assert K.counts == (5, 10, 10)
    assert not K.full
    with pytest.raises(IndexError):
        K.level(3)
    assert enumerate_cliques(complete(5), 4).level(7) == ()


@pytest.mark.parametrize("seed", range(20))
def test_matches_brute_force(seed):
    G = random_graph(10, 0.5, seed)
    for r_max in (2, 4):
        assert enumerate_cliques(G, r_max).simplices == brute_force_cliques(G, r_max)


def test_closure_and_sorting():
    for seed in range(10):
        K = enumerate_cliques(random_graph(12, 0.6, 100 + seed), 4)
        for r in range(1, K.r_max + 1):
            faces = set(K.level(r - 1))
            for s in K.level(r):
                assert list(s) == sorted(s)
                assert all(f in faces for f in combinations(s, r))
            assert list(K.level(r)) == sorted(K.level(r))


def test_graph_stats_examples():
    assert (graph_stats(complete(4)).degeneracy, graph_stats(complete(4)).max_degree) == (3, 3)
    assert (graph_stats(cycle(4)).degeneracy, graph_stats(cycle(4)).max_degree) == (2, 2)
    star = Graph(6, tuple((0, k) for k in range(1, 6)))
    st5 = graph_stats(star)
    assert (st5.degeneracy, st5.max_degree) == (1, 5)
    assert st5.arboricity_bound >= 1


def test_degeneracy_order_is_permutation():
    G = random_graph(12, 0.4, 5)
    order, d = degeneracy_order(G)
    assert sorted(order) == list(range(12))
    pos = {v: k for k, v in enumerate(order)}
    adj = G.neighbors()
    assert max(sum(pos[u] > pos[v] for u in adj[v]) for v in range(12)) <= d


def test_from_simplices_and_json_round_trip():
    K = CliqueComplex.from_simplices(5, [(0, 1, 2), (2, 3)])
    assert K.counts == (5, 4, 1) and K.full
    data = K.to_dict()
    assert data["edges"] == [[0, 1], [0, 2], [1, 2], [2, 3]]
    assert io.complex_from_dict(data).simplices == K.simplices
    G = enumerate_cliques(complete(3), 2)
    assert io.graph_from_dict(G.to_dict()).edges == complete(3).edges


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 9), st.integers(0, 10**6), st.floats(0.0, 1.0), st.floats(0.0, 1.0),
       st.sampled_from(["cosine_dissimilarity", "euclidean"]))
def test_monotone_in_threshold(m, seed, e1, e2, metric):
    lo, hi = sorted((e1, e2))
    X = np.random.default_rng(seed).normal(size=(m, 3))
    D = pairwise_overlaps(X)
    scale = 3.0 if metric == "euclidean" else 1.0
    K1 = enumerate_cliques(build_graph(D, ThresholdRule(metric, lo * scale)), 3)
    K2 = enumerate_cliques(build_graph(D, ThresholdRule(metric, hi * scale)), 3)
    for r in range(4):
        assert set(K1.level(r)) <= set(K2.level(r))
