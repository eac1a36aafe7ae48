import itertools

import networkx as nx
import pytest

from raagcx.fixtures import C4, D2, F3, K3, P3
from raagcx.graph import (DefiningGraph, GraphError, central_clique, clique_counts,
                          components_minus_star, graph_automorphisms, maximal_cliques,
                          neighborhood, order_leq, small_graphs, twist_dominant)


@pytest.mark.parametrize("G, v, kind, expected", [
    (P3, "b", "link", {"a", "c"}),
    (D2, "a", "link", set()),
    (K3, "a", "star", {"a", "b", "c"}),
])
def test_neighborhood(G, v, kind, expected):
    assert neighborhood(G, v, kind) == expected


def test_unknown_vertex():
    with pytest.raises(GraphError):
        neighborhood(P3, "z", "link")


@pytest.mark.parametrize("vertices, edges", [
    ("ab", [("a", "a")]),
    ("ab", [("a", "c")]),
    ("ab", [("a", "b"), ("b", "a")]),
    ("aa", []),
])
def test_malformed_graphs(vertices, edges):
    with pytest.raises(GraphError):
        DefiningGraph.from_lists(vertices, edges)


@pytest.mark.parametrize("G, u, v, kind, expected", [
    (P3, "a", "c", "fold", True),
    (P3, "a", "b", "twist", True),
    (D2, "a", "b", "twist", False),
])
def test_order_leq(G, u, v, kind, expected):
    assert order_leq(G, u, v, kind) is expected


@pytest.mark.parametrize("G, v, expected", [(P3, "b", True), (P3, "a", False), (K3, "a", True)])
def test_twist_dominant(G, v, expected):
    assert twist_dominant(G, v) is expected


@pytest.mark.parametrize("G, expected", [
    (P3, [{"a", "b"}, {"b", "c"}]),
    (C4, [{"a", "b"}, {"a", "d"}, {"b", "c"}, {"c", "d"}]),
    (K3, [{"a", "b", "c"}]),
])
def test_maximal_cliques(G, expected):
    assert sorted(map(sorted, maximal_cliques(G))) == sorted(map(sorted, expected))


@pytest.mark.parametrize("G, expected", [(P3, {"b"}), (C4, set()), (K3, {"a", "b", "c"})])
def test_central_clique(G, expected):
    assert central_clique(G) == expected


@pytest.mark.parametrize("G, v, expected", [(P3, "a", [{"c"}]), (P3, "b", []), (F3, "b", [{"w"}])])
def test_components_minus_star(G, v, expected):
    assert components_minus_star(G, v) == expected


def test_small_graph_census():
    # non-isomorphic simple graphs on 1..4 vertices: 1 + 2 + 4 + 11
    graphs = small_graphs(4)
    assert len(graphs) == 18
    nxg = [G.to_networkx() for G in graphs]
    for g, h in itertools.combinations(nxg, 2):
        assert not nx.is_isomorphic(g, h)


def _brute_cliques(G):
    out = []
    for k in range(len(G.vertices) + 1):
        for S in itertools.combinations(G.vertices, k):
            if all(G.adjacent(x, y) for x, y in itertools.combinations(S, 2)):
                out.append(frozenset(S))
    return out


def test_cliques_against_brute_force(graphs4):
    for G in graphs4:
        cl = _brute_cliques(G)
        maximal = {c for c in cl if not any(c < d for d in cl)}
        assert set(maximal_cliques(G)) == maximal
        counts = [sum(len(c) == k for c in cl) for k in range(len(G.vertices) + 1)]
        while counts[-1] == 0:
            counts.pop()
        assert clique_counts(G) == counts
        assert frozenset().union(*maximal) == frozenset(G.vertices)


def test_orders_reflexive_transitive(graphs4):
    for G in graphs4:
        for kind in ("fold", "twist"):
            for u in G.vertices:
                assert order_leq(G, u, u, kind)
            for u, v, w in itertools.product(G.vertices, repeat=3):
                if order_leq(G, u, v, kind) and order_leq(G, v, w, kind):
                    assert order_leq(G, u, w, kind)


def test_twist_dominant_not_fold_below_anything(graphs4):
    # a twist-dominant v is fold-below no other generator
    for G in graphs4:
        for v in G.vertices:
            if twist_dominant(G, v):
                assert not any(u != v and G.link(v) <= G.link(u) for u in G.vertices)


def test_center_is_full_star(graphs4):
    for G in graphs4:
        full = frozenset(G.vertices)
        assert central_clique(G) == {v for v in G.vertices if G.star(v) == full}


def test_graph_automorphisms_count():
    assert len(graph_automorphisms(C4)) == 8
    assert len(graph_automorphisms(P3)) == 2
    assert len(graph_automorphisms(K3)) == 6
