"""Blowup cube complexes of compatible collections, collapses and characteristic cycles.

Regions are stored as bitmasks over the collection: bit i is set when the
region picks the minus side of the i-th partition. Every label acts on
regions by XOR with a mask: a partition flips its own bit, a generator v
flips the bits of the partitions splitting v. A cell is a key
``(labels, base)`` where ``labels`` is a sorted tuple of label indices and
``base`` is the corner from which every edge direction points forward
(plus side for partitions, terminal region for generators). Vertices are
``((), r)``, edges ``((A,), tail)``.
"""
from __future__ import annotations

import functools
import itertools
from collections import deque
from dataclasses import dataclass, field

from .graph import DefiningGraph, clique_counts
from .partitions import (Label, WhiteheadPartition, is_compatible_collection,
                         labels_adjacent, max_set)

Cell = tuple[tuple[int, ...], int]


class BlowupError(ValueError):
    pass


@dataclass(frozen=True)
class EdgeCycle:
    """A closed edge path: ``(edge cell, +1 forward / -1 backward)`` pairs."""

    steps: tuple[tuple[Cell, int], ...]

    def __len__(self):
        return len(self.steps)


@dataclass
class CubicalMap:
    """Cell map between complexes; a cell may land on a lower dimensional cell."""

    source: "BlowupComplex"
    target: "BlowupComplex"
    cell_map: dict[Cell, Cell]

    def vertex_map(self) -> dict[int, int]:
        return {c[1]: self.cell_map[c][1] for c in self.source.cells[0]}

    def edge_map(self) -> dict[Cell, Cell]:
        return {c: self.cell_map[c] for c in self.source.cells[1]}

    def then(self, other: "CubicalMap") -> "CubicalMap":
        assert other.source is self.target or other.source.same_cells(self.target)
        return CubicalMap(self.source, other.target,
                          {c: other.cell_map[d] for c, d in self.cell_map.items()})


@functools.lru_cache(maxsize=None)
def _label_data(G: DefiningGraph, Pi: tuple[WhiteheadPartition, ...]):
    labels: list[Label] = list(G.vertices) + list(Pi)
    n, k = len(G.vertices), len(Pi)
    flip = []
    care = []
    want = []
    for v in G.vertices:
        f = c = w = 0
        for i, P in enumerate(Pi):
            s = P.side_of((v, 1))
            if s == 0:
                continue
            c |= 1 << i
            if s == -1:
                w |= 1 << i
            if P.splits(v):
                f |= 1 << i
        flip.append(f)
        care.append(c)
        want.append(w)
    for i in range(k):
        flip.append(1 << i)
        care.append(0)
        want.append(0)
    adj = [[a != b and labels_adjacent(G, labels[a], labels[b]) for b in range(n + k)]
           for a in range(n + k)]
    return labels, flip, care, want, adj


class BlowupComplex:
    """The blowup of a compatible collection, or a subcomplex obtained by deleting cubes."""

    def __init__(self, G: DefiningGraph, Pi: tuple[WhiteheadPartition, ...], regions: list[int],
                 cells: list[list[Cell]]):
        self.G = G
        self.Pi = tuple(Pi)
        self.labels, self.flip, self._care, self._want, self.label_adj = _label_data(G, self.Pi)
        self.regions = regions
        self.cells = cells
        self._pos = [{c: i for i, c in enumerate(cs)} for cs in cells]

    # -- basic queries -------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return len(self.G.vertices)

    def is_partition_label(self, A: int) -> bool:
        return A >= self.n_vertices

    def label_name(self, A: int) -> str:
        return self.labels[A] if A < self.n_vertices else f"P{A - self.n_vertices}"

    def label_of(self, label: Label) -> int:
        if isinstance(label, WhiteheadPartition):
            return self.n_vertices + self.Pi.index(label)
        return self.G.index(label)

    def terminal(self, r: int, v: int) -> bool:
        """Is region r terminal for generator index v (picks every side containing v)?"""
        return r & self._care[v] == self._want[v]

    def is_tail(self, r: int, A: int) -> bool:
        if A < self.n_vertices:
            return self.terminal(r, A)
        return not r >> (A - self.n_vertices) & 1

    def region_str(self, r: int) -> str:
        return "".join("-" if r >> i & 1 else "+" for i in range(len(self.Pi))) or "*"

    def contains(self, c: Cell) -> bool:
        d = len(c[0])
        return d < len(self.cells) and c in self._pos[d]

    def cell_id(self, c: Cell) -> int:
        return self._pos[len(c[0])][c]

    def same_cells(self, other: "BlowupComplex") -> bool:
        return self.cells == other.cells and self.labels == other.labels

    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    def all_cells(self):
        for cs in self.cells:
            yield from cs

    # -- cell geometry -------------------------------------------------
    def head(self, e: Cell) -> int:
        (A,), r = e
        return r ^ self.flip[A]

    def corner(self, c: Cell, T) -> int:
        r = c[1]
        for A in T:
            r ^= self.flip[A]
        return r

    def corners(self, c: Cell) -> list[int]:
        """Corner regions indexed by subsets of directions (bit j = direction j moved)."""
        S, r = c
        out = [r]
        for A in S:
            f = self.flip[A]
            out = out + [x ^ f for x in out]
        return out

    def face(self, c: Cell, j: int, end: int) -> Cell:
        S, r = c
        return (S[:j] + S[j + 1:], r ^ self.flip[S[j]] if end else r)

    def boundary(self, c: Cell) -> list[tuple[int, Cell]]:
        """Cubical boundary: sum over directions j of (-1)^j (front face - back face)."""
        out = []
        for j in range(len(c[0])):
            s = -1 if j % 2 else 1
            out.append((s, self.face(c, j, 1)))
            out.append((-s, self.face(c, j, 0)))
        return out

    def edge_at(self, c: Cell, T: frozenset[int] | set, A: int) -> tuple[Cell, int]:
        """The edge in direction A at the corner T of c, with 0 = tail end, 1 = head end."""
        r = self.corner(c, T)
        if A in T:
            return ((A,), r ^ self.flip[A]), 1
        return ((A,), r), 0

    def all_faces(self, c: Cell):
        """All faces of c including c itself."""
        S, r = c
        k = len(S)
        seen = set()
        for keep in range(1 << k):
            moved_choices = [j for j in range(k) if not keep >> j & 1]
            S2 = tuple(S[j] for j in range(k) if keep >> j & 1)
            for m in range(1 << len(moved_choices)):
                rr = r
                for t, j in enumerate(moved_choices):
                    if m >> t & 1:
                        rr ^= self.flip[S[j]]
                f = (S2, rr)
                if f not in seen:
                    seen.add(f)
                    yield f

    # -- derived structures --------------------------------------------
    def f_vector(self) -> tuple[int, ...]:
        fv = [len(cs) for cs in self.cells]
        while len(fv) > 1 and fv[-1] == 0:
            fv.pop()
        return tuple(fv)

    def euler(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    def label_set(self) -> set[int]:
        return {e[0][0] for e in self.cells[1]}

    def edges_with_label(self, A: int) -> list[Cell]:
        return [e for e in self.cells[1] if e[0][0] == A]

    def maximal_cells(self) -> list[Cell]:
        faces = set()
        for cs in self.cells[1:]:
            for c in cs:
                for j in range(len(c[0])):
                    faces.add(self.face(c, j, 0))
                    faces.add(self.face(c, j, 1))
        return [c for c in self.all_cells() if c not in faces]

    def partition_subcomplex(self) -> list[Cell]:
        """Cells all of whose labels are partitions (E^Pi); includes every vertex."""
        return [c for c in self.all_cells() if all(self.is_partition_label(A) for A in c[0])]

    def without(self, removed) -> "BlowupComplex":
        """Subcomplex obtained by deleting the given cells and everything having them as a face."""
        removed = set(removed)
        kept: list[list[Cell]] = [[] for _ in self.cells]
        for d, cs in enumerate(self.cells):
            for c in cs:
                if c in removed:
                    continue
                if any(f in removed for f in self.all_faces(c)):
                    continue
                kept[d].append(c)
        while len(kept) > 1 and not kept[-1]:
            kept.pop()
        return BlowupComplex(self.G, self.Pi, [c[1] for c in kept[0]], kept)

    def find_cells(self, *labels: Label) -> list[Cell]:
        S = tuple(sorted(self.label_of(x) for x in labels))
        if len(S) >= len(self.cells):
            return []
        return [c for c in self.cells[len(S)] if c[0] == S]

    def describe(self, c: Cell) -> str:
        return f"{self.region_str(c[1])}:({','.join(self.label_name(A) for A in c[0])})"


def _regions(G: DefiningGraph, Pi: tuple[WhiteheadPartition, ...], labels, adj) -> list[int]:
    n, k = len(G.vertices), len(Pi)
    # allowed sign pairs for non-adjacent partitions
    allowed = {}
    for i, j in itertools.combinations(range(k), 2):
        if adj[n + i][n + j]:
            continue
        ok = set()
        for si, X in ((0, Pi[i].plus), (1, Pi[i].minus)):
            for sj, Y in ((0, Pi[j].plus), (1, Pi[j].minus)):
                if X & Y:
                    ok.add((si, sj))
        allowed[(i, j)] = ok
    out = []

    def grow(i: int, r: int):
        if i == k:
            out.append(r)
            return
        for s in (0, 1):
            if all(((r >> h & 1), s) in allowed[(h, i)] for h in range(i) if (h, i) in allowed):
                grow(i + 1, r | s << i)

    grow(0, 0)
    return sorted(out)


def enumerate_regions(G: DefiningGraph, Pi) -> list[tuple[int, ...]]:
    """Regions as sign tuples (+1 plus side, -1 minus side), one entry per partition."""
    Pi = tuple(Pi)
    if not is_compatible_collection(G, Pi):
        raise BlowupError("the collection is not pairwise compatible")
    labels, _, _, _, adj = _label_data(G, Pi)
    return [tuple(-1 if r >> i & 1 else 1 for i in range(len(Pi))) for r in _regions(G, Pi, labels, adj)]


def build_blowup(G: DefiningGraph, Pi=()) -> BlowupComplex:
    """The blowup of a compatible collection; the empty collection gives the Salvetti complex."""
    Pi = tuple(Pi)
    if len(set(Pi)) != len(Pi):
        raise BlowupError("repeated partition in the collection")
    for P in Pi:
        max_set(G, P)  # validates
    if not is_compatible_collection(G, Pi):
        raise BlowupError("the collection is not pairwise compatible")
    labels, flip, care, want, adj = _label_data(G, Pi)
    n = len(G.vertices)
    regions = _regions(G, Pi, labels, adj)
    rset = set(regions)
    cells: list[set[Cell]] = [set()]
    for r in regions:
        tails = []
        for A in range(len(labels)):
            if A < n:
                if r & care[A] != want[A]:
                    continue
                if r ^ flip[A] not in rset:
                    raise BlowupError(f"switching {labels[A]} leaves the regions")
            elif r >> (A - n) & 1 or r ^ flip[A] not in rset:
                continue
            tails.append(A)

        def grow(S: tuple[int, ...], corners: list[int], cand: list[int]):
            while len(cells) <= len(S):
                cells.append(set())
            cells[len(S)].add((S, r))
            for t, A in enumerate(cand):
                new = [x ^ flip[A] for x in corners]
                if all(x in rset for x in new):
                    grow(S + (A,), corners + new, [B for B in cand[t + 1:] if adj[A][B]])

        grow((), [r], tails)
    ordered = [sorted(cs, key=lambda c: (c[0], c[1])) for cs in cells]
    return BlowupComplex(G, Pi, regions, ordered)


def salvetti(G: DefiningGraph) -> BlowupComplex:
    return build_blowup(G, ())


# -- verification ------------------------------------------------------------

def link_simplices(B: BlowupComplex) -> dict[int, list[tuple]]:
    """Per vertex: the simplices of its link, one per (cube, corner) at that vertex."""
    out: dict[int, list[tuple]] = {r: [] for r in B.regions}
    for cs in B.cells[1:]:
        for c in cs:
            S = c[0]
            for m in range(1 << len(S)):
                T = {S[j] for j in range(len(S)) if m >> j & 1}
                x = B.corner(c, T)
                out[x].append(tuple(B.edge_at(c, T, A) for A in S))
    return out


def check_flag(B: BlowupComplex) -> bool:
    """Every vertex link is a simplicial complex and is flag."""
    for x, simplices in link_simplices(B).items():
        sset = set()
        for s in simplices:
            fs = frozenset(s)
            if len(fs) != len(s) or fs in sset:
                return False
            sset.add(fs)
        nbrs: dict = {}
        for s in sset:
            if len(s) == 2:
                a, b = tuple(s)
                nbrs.setdefault(a, set()).add(b)
                nbrs.setdefault(b, set()).add(a)
        for s in sset:
            if len(s) < 2:
                continue
            common = set.intersection(*(nbrs.get(p, set()) for p in s)) - s
            for p in common:
                if s | {p} not in sset:
                    return False
    return True


def hyperplane_classes(B: BlowupComplex) -> list[set[Cell]]:
    """Edge classes under the 'opposite in a square' relation."""
    parent = {e: e for e in B.cells[1]}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    if len(B.cells) > 2:
        for (S, r) in B.cells[2]:
            A, C = S
            for X, Y in ((A, C), (C, A)):
                e1 = ((X,), r)
                e2 = ((X,), r ^ B.flip[Y])
                parent[find(e1)] = find(e2)
    classes: dict = {}
    for e in B.cells[1]:
        classes.setdefault(find(e), set()).add(e)
    return sorted(classes.values(), key=lambda s: min(s))


def check_hyperplanes(B: BlowupComplex) -> bool:
    """Each label's edges form exactly one hyperplane class."""
    for cls in hyperplane_classes(B):
        if len({e[0][0] for e in cls}) != 1:
            return False
    by_label = {}
    for cls in hyperplane_classes(B):
        A = next(iter(cls))[0][0]
        if A in by_label:
            return False
        by_label[A] = cls
    return True


@dataclass
class Hyperplane:
    label: int
    dual_edges: list[Cell]
    carrier: set[Cell] = field(repr=False)


def hyperplane_of(B: BlowupComplex, label: Label | int) -> Hyperplane:
    A = label if isinstance(label, int) else B.label_of(label)
    edges = B.edges_with_label(A)
    if not edges:
        raise BlowupError(f"label {B.label_name(A)} does not occur")
    classes = [cls for cls in hyperplane_classes(B) if set(edges) & cls]
    if len(classes) != 1 or classes[0] != set(edges):
        raise BlowupError(f"edges labelled {B.label_name(A)} are not dual to a single hyperplane")
    carrier = set()
    for c in B.all_cells():
        if A in c[0]:
            carrier.update(B.all_faces(c))
    return Hyperplane(A, edges, carrier)


def maximal_label_sets_unique(B: BlowupComplex) -> bool:
    """Each maximal pairwise adjacent label set spans exactly one cube."""
    labels = sorted(B.label_set())
    adj = B.label_adj
    found = []

    def grow(S, cand, excluded):
        if not cand and not excluded:
            found.append(tuple(sorted(S)))
            return
        for t, A in enumerate(cand):
            grow(S + [A], [B_ for B_ in cand[t + 1:] if adj[A][B_]],
                 [B_ for B_ in excluded + cand[:t] if adj[A][B_]])

    grow([], labels, [])
    for S in found:
        if len(S) >= len(B.cells) or sum(1 for c in B.cells[len(S)] if c[0] == S) != 1:
            return False
    return True


def f_vector_euler(B: BlowupComplex) -> tuple[tuple[int, ...], int]:
    return B.f_vector(), B.euler()


def salvetti_euler(G: DefiningGraph) -> int:
    return sum((-1) ** k * n for k, n in enumerate(clique_counts(G)))


# -- collapse -------------------------------------------------------------------

def _restrict(r: int, i: int) -> int:
    low = r & ((1 << i) - 1)
    return low | (r >> (i + 1)) << i


def collapse_partition(B: BlowupComplex, P: WhiteheadPartition) -> tuple[BlowupComplex, CubicalMap]:
    """Collapse the hyperplane of P and certify the result is the blowup of the rest.

    Cubes through the hyperplane go to their front face; the quotient's cells
    are matched with the cells of the blowup of the smaller collection by
    forgetting P's side, and the match is checked to be a bijection that
    respects corners and edge directions.
    """
    if P not in B.Pi:
        raise BlowupError(f"{P} is not in the collection")
    i = B.Pi.index(P)
    n = B.n_vertices
    A_P = n + i
    rest = B.Pi[:i] + B.Pi[i + 1:]
    target = build_blowup(B.G, rest)

    def relabel(A):
        return A if A < A_P else A - 1

    parent: dict[Cell, Cell] = {}

    def find(c):
        parent.setdefault(c, c)
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    cell_map: dict[Cell, Cell] = {}
    for c in B.all_cells():
        if A_P in c[0]:
            j = c[0].index(A_P)
            f0, f1 = B.face(c, j, 0), B.face(c, j, 1)
            parent[find(f0)] = find(f1)
    classes: dict[Cell, list[Cell]] = {}
    for c in B.all_cells():
        if A_P not in c[0]:
            classes.setdefault(find(c), []).append(c)
    hit = set()
    for members in classes.values():
        images = {(tuple(relabel(A) for A in c[0]), _restrict(c[1], i)) for c in members}
        if len(images) != 1:
            raise BlowupError("collapse quotient is not well defined on a cell class")
        (img,) = images
        if not target.contains(img) or img in hit:
            raise BlowupError(f"collapse of {P} does not match the smaller blowup at {img}")
        hit.add(img)
        for c in members:
            # corners and directions must agree
            if [_restrict(x, i) for x in B.corners(c)] != target.corners(img):
                raise BlowupError("collapse does not respect corners")
            cell_map[c] = img
    if len(hit) != sum(len(cs) for cs in target.cells):
        raise BlowupError(f"collapse of {P} misses cells of the smaller blowup")
    for c in B.all_cells():
        if A_P in c[0]:
            j = c[0].index(A_P)
            cell_map[c] = cell_map[B.face(c, j, 0)]
    return target, CubicalMap(B, target, cell_map)


def collapse_all(B: BlowupComplex, order=None) -> tuple[BlowupComplex, CubicalMap]:
    """Collapse every partition hyperplane in the given order (default: collection order)."""
    order = list(B.Pi) if order is None else list(order)
    current = B
    total = CubicalMap(B, B, {c: c for c in B.all_cells()})
    for P in order:
        current, m = collapse_partition(current, P)
        total = total.then(m)
    return current, total


# -- characteristic cycles ----------------------------------------------------------

def partition_graph(B: BlowupComplex) -> dict[int, list[tuple[int, Cell, int]]]:
    """1-skeleton of E^Pi: region -> [(label, edge, neighbour)], sorted by label."""
    nb: dict[int, list] = {r: [] for r in B.regions}
    for e in B.cells[1]:
        A = e[0][0]
        if B.is_partition_label(A):
            h = B.head(e)
            nb[e[1]].append((A, e, h))
            nb[h].append((A, e, e[1]))
    for r in nb:
        nb[r].sort()
    return nb


def _distances(nb, target: int) -> dict[int, int]:
    dist = {target: 0}
    q = deque([target])
    while q:
        x = q.popleft()
        for _, _, y in nb[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def shortest_partition_path(B: BlowupComplex, start: int, end: int, nb=None) -> list[tuple[Cell, int]]:
    """Shortest edge path in E^Pi, ties broken by the least label sequence.

    The tie-break runs from the smaller endpoint, so a path and its reverse
    cross the same edges; cycles sharing endpoints then share their route.
    """
    nb = partition_graph(B) if nb is None else nb
    if start > end:
        return [(e, -s) for e, s in reversed(shortest_partition_path(B, end, start, nb))]
    dist = _distances(nb, end)
    if start not in dist:
        raise BlowupError("regions are not connected through partition edges")
    path = []
    x = start
    while x != end:
        for A, e, y in nb[x]:
            if dist.get(y, -1) == dist[x] - 1:
                path.append((e, 1 if e[1] == x else -1))
                x = y
                break
    return path


def all_shortest_partition_paths(B: BlowupComplex, start: int, end: int, nb=None):
    nb = partition_graph(B) if nb is None else nb
    dist = _distances(nb, end)

    def walk(x):
        if x == end:
            yield []
            return
        for A, e, y in nb[x]:
            if dist.get(y, -1) == dist[x] - 1:
                for rest in walk(y):
                    yield [(e, 1 if e[1] == x else -1)] + rest

    yield from walk(start)


def _check_v_edge(B: BlowupComplex, v: str | int, e: Cell) -> int:
    vi = v if isinstance(v, int) else B.label_of(v)
    if not B.contains(e) or len(e[0]) != 1 or e[0][0] != vi or B.is_partition_label(vi):
        raise BlowupError(f"{e} is not an edge labelled {v}")
    return vi


def characteristic_cycle(B: BlowupComplex, v: str | int, e: Cell, nb=None) -> EdgeCycle:
    """The v-edge e followed by the least shortest E^Pi path back to its tail."""
    _check_v_edge(B, v, e)
    return EdgeCycle(((e, 1),) + tuple(shortest_partition_path(B, B.head(e), e[1], nb)))


def all_characteristic_cycles(B: BlowupComplex, v: str | int, e: Cell) -> list[EdgeCycle]:
    _check_v_edge(B, v, e)
    return [EdgeCycle(((e, 1),) + tuple(p)) for p in all_shortest_partition_paths(B, B.head(e), e[1])]


def cycle_regions(B: BlowupComplex, cyc: EdgeCycle) -> list[int]:
    """Start region of each step; checks that consecutive endpoints match."""
    out = []
    prev_end = None
    for e, s in cyc.steps:
        start, end = (e[1], B.head(e)) if s == 1 else (B.head(e), e[1])
        if out and prev_end != start:
            raise BlowupError("edge cycle is not connected")
        out.append(start)
        prev_end = end
    if out and prev_end != out[0]:
        raise BlowupError("edge cycle is not closed")
    return out


def collapsed_word(B: BlowupComplex, cyc: EdgeCycle) -> list[tuple[str, int]]:
    """Image of an edge path under the standard collapse: its generator edges, signed."""
    return [(B.labels[e[0][0]], s) for e, s in cyc.steps if not B.is_partition_label(e[0][0])]


def splitters(B: BlowupComplex, v: str | int) -> set[int]:
    vi = v if isinstance(v, int) else B.label_of(v)
    return {B.n_vertices + i for i in range(len(B.Pi)) if B.flip[vi] >> i & 1}


# -- exports ------------------------------------------------------------------------

def complex_to_dict(B: BlowupComplex) -> dict:
    return {
        "partitions": [P.to_dict(B.G) for P in B.Pi],
        "labels": [B.label_name(A) for A in range(len(B.labels))],
        "vertices": [B.region_str(r) for r in B.regions],
        "edges": [{"label": B.label_name(e[0][0]), "tail": B.region_str(e[1]),
                   "head": B.region_str(B.head(e))} for e in B.cells[1]],
        "cubes": [{"labels": [B.label_name(A) for A in c[0]], "base": B.region_str(c[1]),
                   "corners": [B.region_str(x) for x in B.corners(c)]}
                  for cs in B.cells[2:] for c in cs],
        "f_vector": list(B.f_vector()),
        "euler": B.euler(),
    }


def to_dot(B: BlowupComplex) -> str:
    lines = ["digraph blowup {"]
    for r in B.regions:
        lines.append(f'  "{B.region_str(r)}";')
    for e in B.cells[1]:
        lines.append(f'  "{B.region_str(e[1])}" -> "{B.region_str(B.head(e))}" '
                     f'[label="{B.label_name(e[0][0])}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
