"""Defining graphs and their link/star, fold/twist and clique structure."""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class DefiningGraph:
    """A finite simple graph with a fixed vertex order.

    The input order of ``vertices`` is used for every deterministic iteration
    in the package (normal forms, partition enumeration, label orders).
    """

    vertices: tuple[str, ...]
    edges: frozenset[frozenset[str]]
    _adj: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        verts = tuple(self.vertices)
        if len(set(verts)) != len(verts):
            raise GraphError("repeated vertex")
        vset = set(verts)
        adj = {v: set() for v in verts}
        for e in self.edges:
            e = frozenset(e)
            if len(e) != 2:
                raise GraphError(f"bad edge {sorted(e)}: loops are not allowed")
            u, w = sorted(e)
            if u not in vset or w not in vset:
                raise GraphError(f"edge {u}-{w} uses an undeclared vertex")
            adj[u].add(w)
            adj[w].add(u)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", frozenset(frozenset(e) for e in self.edges))
        object.__setattr__(self, "_adj", {v: frozenset(n) for v, n in adj.items()})

    @classmethod
    def from_lists(cls, vertices: Iterable[str], edges: Iterable[Iterable[str]]) -> "DefiningGraph":
        edge_list = [tuple(e) for e in edges]
        for e in edge_list:
            if len(e) != 2:
                raise GraphError(f"edge {list(e)} does not have two endpoints")
        seen = set()
        for e in edge_list:
            key = frozenset(e)
            if key in seen:
                raise GraphError(f"repeated edge {list(e)}")
            seen.add(key)
        return cls(tuple(vertices), frozenset(seen))

    def index(self, v: str) -> int:
        self._check(v)
        return self.vertices.index(v)

    def _check(self, v):
        if v not in self._adj:
            raise GraphError(f"unknown vertex {v!r}")

    def adjacent(self, u: str, v: str) -> bool:
        self._check(u)
        self._check(v)
        return v in self._adj[u]

    def link(self, v: str) -> frozenset[str]:
        self._check(v)
        return self._adj[v]

    def star(self, v: str) -> frozenset[str]:
        return self.link(v) | {v}

    def sorted(self, vs: Iterable[str]) -> list[str]:
        return sorted(vs, key=self.vertices.index)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(tuple(e) for e in self.edges)
        return g

    def edge_list(self) -> list[list[str]]:
        return sorted((self.sorted(e) for e in self.edges),
                      key=lambda e: (self.index(e[0]), self.index(e[1])))

    def __repr__(self):
        es = " ".join("-".join(e) for e in self.edge_list())
        return f"DefiningGraph({','.join(self.vertices)}; {es})"


def neighborhood(G: DefiningGraph, v: str, kind: str = "link") -> frozenset[str]:
    if kind == "link":
        return G.link(v)
    if kind == "star":
        return G.star(v)
    raise ValueError(f"kind must be 'link' or 'star', not {kind!r}")


def order_leq(G: DefiningGraph, u: str, v: str, kind: str) -> bool:
    """Fold order (``lk(u) <= lk(v)``) or twist order (``st(u) <= st(v)``)."""
    if kind == "fold":
        return G.link(u) <= G.link(v)
    if kind == "twist":
        return G.star(u) <= G.star(v)
    raise ValueError(f"kind must be 'fold' or 'twist', not {kind!r}")


def twist_dominant(G: DefiningGraph, v: str) -> bool:
    # the reflexive witness w = v is excluded
    return any(w != v and G.star(w) <= G.star(v) for w in G.vertices)


def maximal_cliques(G: DefiningGraph) -> list[frozenset[str]]:
    """Maximal cliques, each sorted by vertex order, listed in lexicographic order."""
    cliques = [frozenset(c) for c in nx.find_cliques(G.to_networkx())]
    return sorted(cliques, key=lambda c: [G.index(v) for v in G.sorted(c)])


def central_clique(G: DefiningGraph) -> frozenset[str]:
    cliques = maximal_cliques(G)
    if not cliques:
        return frozenset()
    meet = frozenset.intersection(*cliques)
    full = frozenset(G.vertices)
    assert meet == frozenset(v for v in G.vertices if G.star(v) == full)
    return meet


@functools.lru_cache(maxsize=None)
def components_minus_star(G: DefiningGraph, v: str) -> list[frozenset[str]]:
    rest = [u for u in G.vertices if u not in G.star(v)]
    sub = G.to_networkx().subgraph(rest)
    comps = [frozenset(c) for c in nx.connected_components(sub)]
    return sorted(comps, key=lambda c: min(G.index(u) for u in c))


def clique_counts(G: DefiningGraph) -> list[int]:
    """Number of k-cliques for k = 0, 1, ... (the empty clique counted once)."""
    counts = [1]
    layer = [frozenset()]
    while layer:
        nxt = set()
        for c in layer:
            for v in G.vertices:
                if v not in c and all(G.adjacent(v, u) for u in c):
                    nxt.add(c | {v})
        if nxt:
            counts.append(len(nxt))
        layer = list(nxt)
    return counts


def graph_automorphisms(G: DefiningGraph) -> list[dict[str, str]]:
    g = G.to_networkx()
    matcher = nx.algorithms.isomorphism.GraphMatcher(g, g)
    autos = [dict(m) for m in matcher.isomorphisms_iter()]
    return sorted(autos, key=lambda m: [G.index(m[v]) for v in G.vertices])


def small_graphs(max_vertices: int = 4) -> list[DefiningGraph]:
    """All simple graphs on 1..max_vertices vertices up to isomorphism.

    Vertices are named a, b, c, d, ...; one representative per class, chosen
    as the lexicographically least edge set under relabeling.
    """
    names = "abcdefgh"
    out = []
    for n in range(1, max_vertices + 1):
        verts = tuple(names[:n])
        pairs = list(itertools.combinations(range(n), 2))
        seen = set()
        for mask in range(1 << len(pairs)):
            es = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
            canon = min(
                tuple(sorted(tuple(sorted((p[i], p[j]))) for i, j in es))
                for p in itertools.permutations(range(n))
            )
            if canon in seen:
                continue
            seen.add(canon)
            out.append(DefiningGraph.from_lists(verts, [(verts[i], verts[j]) for i, j in canon]))
    return out
