"""Maximal tori of blowups, their intersections and chains."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from math import comb, prod

from .blowup import (BlowupComplex, Cell, EdgeCycle, characteristic_cycle, partition_graph,
                     shortest_partition_path, splitters)
from .graph import maximal_cliques
from .homology import acyclic_certificate


class TorusError(ValueError):
    pass


@dataclass
class CycleMoves:
    """A cycle read as label moves from a start region: step j crosses ``labels[j]``."""

    labels: tuple[int, ...]
    signs: tuple[int, ...]

    def rotated(self, k: int) -> "CycleMoves":
        return CycleMoves(self.labels[k:] + self.labels[:k], self.signs[k:] + self.signs[:k])

    def __len__(self):
        return len(self.labels)


def _moves(cyc: EdgeCycle) -> CycleMoves:
    return CycleMoves(tuple(e[0][0] for e, _ in cyc.steps), tuple(s for _, s in cyc.steps))


def product_cells(B: BlowupComplex, start_cells, start: int, cycles: list[CycleMoves]):
    """Cells of (start_cells) x (product of cycles); the cycles start at region ``start``.

    Returns a dict: (start cell, per-cycle choice) -> cell of B, or None where
    the product cell is missing from B. A choice is ``('v', i)`` for the i-th
    vertex or ``('e', j)`` for the j-th edge of the cycle.
    """
    out = {}
    choices = [[("v", i) for i in range(len(c))] + [("e", j) for j in range(len(c))] for c in cycles]
    # region offset reached after the first p steps of each cycle
    prefix = []
    for c in cycles:
        acc = [0]
        for A in c.labels:
            acc.append(acc[-1] ^ B.flip[A])
        prefix.append(acc)
    for kc in start_cells:
        for choice in itertools.product(*choices):
            r = kc[1]
            labels = list(kc[0])
            for c, acc, (kind, p) in zip(cycles, prefix, choice):
                r ^= acc[p]
                if kind == "e":
                    A = c.labels[p]
                    labels.append(A)
                    if c.signs[p] == -1:
                        r ^= B.flip[A]
            cell = (tuple(sorted(labels)), r)
            out[(kc, choice)] = cell if B.contains(cell) and len(set(labels)) == len(labels) else None
    return out


@dataclass
class MaximalTorus:
    clique: tuple[str, ...]
    base: int
    cycles: dict[str, EdgeCycle]
    cells: frozenset[Cell] = field(repr=False)
    coords: dict[int, tuple[int, ...]] = field(repr=False)
    moves: dict[str, CycleMoves] = field(repr=False)
    product: dict = field(repr=False)

    def f_vector(self) -> tuple[int, ...]:
        return _f_vector(self.cells)

    def euler(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    def cycle_lengths(self) -> tuple[int, ...]:
        return tuple(len(self.cycles[v]) for v in self.clique)

    def label_set(self) -> set[int]:
        return {A for c in self.cells for A in c[0]}

    def vertices(self) -> set[int]:
        return {c[1] for c in self.cells if not c[0]}


def _f_vector(cells) -> tuple[int, ...]:
    counts: dict[int, int] = {}
    for c in cells:
        counts[len(c[0])] = counts.get(len(c[0]), 0) + 1
    top = max(counts) if counts else 0
    return tuple(counts.get(k, 0) for k in range(top + 1))


def torus_f_vector(lengths) -> tuple[int, ...]:
    """f-vector of a product of cycles with the given numbers of edges."""
    k = len(lengths)
    return tuple(comb(k, j) * prod(lengths) for j in range(k + 1))


def maximal_torus(B: BlowupComplex, clique, nb=None) -> MaximalTorus:
    G = B.G
    delta = tuple(G.sorted(clique))
    if frozenset(delta) not in maximal_cliques(G):
        raise TorusError(f"{set(delta)} is not a maximal clique")
    S = tuple(sorted(B.label_of(v) for v in delta))
    top = [c for c in B.cells[len(S)] if c[0] == S] if len(S) < len(B.cells) else []
    if len(top) != 1:
        raise TorusError(f"expected one cube labelled {delta}, found {len(top)}")
    base = top[0][1]
    nb = partition_graph(B) if nb is None else nb
    cycles = {}
    for v in delta:
        e = ((B.label_of(v),), base)
        cycles[v] = characteristic_cycle(B, v, e, nb)
    moves = {v: _moves(cycles[v]) for v in delta}
    prod_cells = product_cells(B, [((), base)], base, [moves[v] for v in delta])
    if any(c is None for c in prod_cells.values()):
        raise TorusError(f"product of characteristic cycles for {delta} is not a subcomplex")
    cells = frozenset(prod_cells.values())
    if len(cells) != len(prod_cells):
        raise TorusError(f"torus for {delta} is not embedded")
    coords = {}
    for (kc, choice), c in prod_cells.items():
        if all(kind == "v" for kind, _ in choice):
            coords[c[1]] = tuple(p for _, p in choice)
    return MaximalTorus(delta, base, cycles, cells, coords, moves, prod_cells)


def all_maximal_tori(B: BlowupComplex) -> list[MaximalTorus]:
    nb = partition_graph(B)
    return [maximal_torus(B, c, nb) for c in maximal_cliques(B.G)]


def torus_cover_check(B: BlowupComplex, tori=None) -> tuple[bool, dict[Cell, tuple[str, ...] | None]]:
    """Every maximal cube lies in a maximal torus; returns a witness clique per maximal cube."""
    tori = all_maximal_tori(B) if tori is None else tori
    witness = {}
    for c in B.maximal_cells():
        witness[c] = next((T.clique for T in tori if c in T.cells), None)
    return all(w is not None for w in witness.values()), witness


def partition_slice(B: BlowupComplex, T: MaximalTorus) -> frozenset[Cell]:
    return frozenset(c for c in T.cells if all(B.is_partition_label(A) for A in c[0]))


@dataclass
class TorusIntersection:
    cells: frozenset[Cell] = field(repr=False)
    K: frozenset[Cell] = field(repr=False)
    clique: tuple[str, ...]
    base: int
    K_acyclic: bool
    K_in_partition_subcomplex: bool

    def f_vector(self):
        return _f_vector(self.cells)

    def K_f_vector(self):
        return _f_vector(self.K)


def intersect_tori(B: BlowupComplex, T1: MaximalTorus, T2: MaximalTorus) -> TorusIntersection:
    """Decompose T1 n T2 as K x T_(D1 n D2) cell by cell.

    The torus factor is spanned by the D1 n D2 coordinate cycles of T1
    through a common vertex x0; K is the component of x0 among the
    intersection cells carrying none of those cycles' labels.
    """
    cells = T1.cells & T2.cells
    verts = sorted(c[1] for c in cells if not c[0])
    if not verts:
        raise TorusError(f"tori {T1.clique} and {T2.clique} share no vertex")
    x0 = verts[0]
    delta = tuple(v for v in T1.clique if v in T2.clique)
    pos = T1.coords[x0]
    cyc = [T1.moves[v].rotated(pos[T1.clique.index(v)]) for v in delta]
    cyc_labels = {A for c in cyc for A in c.labels}
    loose = [c for c in cells if not set(c[0]) & cyc_labels]
    # component of x0 among the loose cells
    nbrs: dict[int, list[int]] = {}
    for c in loose:
        if len(c[0]) == 1:
            h = B.head(c)
            nbrs.setdefault(c[1], []).append(h)
            nbrs.setdefault(h, []).append(c[1])
    comp = {x0}
    q = deque([x0])
    while q:
        x = q.popleft()
        for y in nbrs.get(x, []):
            if y not in comp:
                comp.add(y)
                q.append(y)
    K = frozenset(c for c in loose if all(x in comp for x in B.corners(c)))
    prod_cells = product_cells(B, sorted(K), x0, cyc)
    image = [c for c in prod_cells.values()]
    if any(c is None for c in image) or len(set(image)) != len(image) or set(image) != cells:
        raise TorusError(f"intersection of {T1.clique} and {T2.clique} is not K x T_{delta}")
    return TorusIntersection(cells, K, delta, x0, acyclic_certificate(B, K),
                             all(B.is_partition_label(A) for c in K for A in c[0]))


def chain_tori(B: BlowupComplex, T1: MaximalTorus, T2: MaximalTorus, tori=None) -> list[MaximalTorus]:
    """Chain from T1 to T2 through tori covering a shortest E^Pi path between their base cubes."""
    if T1.clique == T2.clique:
        return [T1]
    tori = all_maximal_tori(B) if tori is None else tori
    nb = partition_graph(B)

    def cube_corners(T):
        S = tuple(sorted(B.label_of(v) for v in T.clique))
        return set(B.corners((S, T.base)))

    starts, ends = cube_corners(T1), cube_corners(T2)
    best = None
    for s in sorted(starts):
        for t in sorted(ends):
            p = shortest_partition_path(B, s, t, nb)
            if best is None or len(p) < len(best):
                best = p
    chain = [T1]
    for e, _ in best:
        M = next((T for T in tori if e in T.cells), None)
        if M is None:
            raise TorusError(f"edge {B.describe(e)} lies in no maximal torus")
        chain.append(M)
    chain.append(T2)
    out = [chain[0]]
    for T in chain[1:]:
        if T.clique != out[-1].clique:
            out.append(T)
    for X, Y in zip(out, out[1:]):
        if not X.vertices() & Y.vertices():
            raise TorusError(f"consecutive tori {X.clique}, {Y.clique} share no vertex")
    return out


def splitter_labels(B: BlowupComplex, clique) -> set[int]:
    out = set()
    for v in clique:
        out |= splitters(B, v)
    return out
