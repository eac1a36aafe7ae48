"""Gamma-Whitehead partitions, their adjacency/compatibility, and compatible collections."""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Union

from .graph import DefiningGraph, components_minus_star
from .words import SignedGenerator, letter_str, parse_letter


class PartitionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class WhiteheadPartition:
    """Two sides and a link, based at ``base``.

    Equality and hashing ignore the base and the orientation of the sides:
    a partition is its unordered pair of sides.
    """

    base: str
    plus: frozenset[SignedGenerator]
    minus: frozenset[SignedGenerator]
    link: frozenset[SignedGenerator]

    def _key(self):
        return frozenset((self.plus, self.minus))

    def __eq__(self, other):
        return isinstance(other, WhiteheadPartition) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def side_of(self, x: SignedGenerator) -> int:
        """+1 / -1 for the side containing ``x``, 0 if ``x`` is in the link."""
        if x in self.plus:
            return 1
        if x in self.minus:
            return -1
        return 0

    def splits(self, v: str) -> bool:
        s = self.side_of((v, 1))
        return s != 0 and s == -self.side_of((v, -1))

    def swapped(self) -> "WhiteheadPartition":
        return WhiteheadPartition(self.base, self.minus, self.plus, self.link)

    def to_dict(self, G: DefiningGraph | None = None) -> dict:
        key = _letter_sort_key(G) if G is not None else (lambda x: (x[0], -x[1]))
        return {"base": self.base,
                "plus": [letter_str(x) for x in sorted(self.plus, key=key)],
                "minus": [letter_str(x) for x in sorted(self.minus, key=key)]}

    def __str__(self):
        key = lambda x: (x[0], -x[1])
        p = ",".join(letter_str(x) for x in sorted(self.plus, key=key))
        m = ",".join(letter_str(x) for x in sorted(self.minus, key=key))
        return f"{{{p}|{m}}}"

    __repr__ = __str__


Label = Union[str, WhiteheadPartition]


def _letter_sort_key(G: DefiningGraph):
    return lambda x: (G.index(x[0]), 0 if x[1] == 1 else 1)


def signed_generators(G: DefiningGraph) -> list[SignedGenerator]:
    return [(v, s) for v in G.vertices for s in (1, -1)]


def _letters(items) -> frozenset[SignedGenerator]:
    return frozenset(parse_letter(x) if isinstance(x, str) else tuple(x) for x in items)


def make_partition(G: DefiningGraph, plus: Iterable, minus: Iterable, base: str | None = None) -> WhiteheadPartition:
    """Build a partition from its sides; the link is everything else.

    Without an explicit base, the first split vertex whose link equals the
    complement of the sides is used (the first split vertex if none fits).
    The sides are kept in the given orientation.
    """
    plus, minus = _letters(plus), _letters(minus)
    rest = frozenset(signed_generators(G)) - plus - minus
    if base is None:
        split = [v for v in G.vertices
                 if {(v, 1), (v, -1)} <= plus | minus and ((v, 1) in plus) != ((v, -1) in plus)]
        fitting = [v for v in split if _link_letters(G, v) == rest]
        base = (fitting or split or [G.vertices[0]])[0]
    return WhiteheadPartition(base, plus, minus, rest)


def _link_letters(G: DefiningGraph, m: str) -> frozenset[SignedGenerator]:
    return frozenset((v, s) for v in G.link(m) for s in (1, -1))


def partition_defect(G: DefiningGraph, P: WhiteheadPartition) -> str | None:
    """Reason code for the first violated axiom, or None for a valid partition."""
    allv = set(signed_generators(G))
    for x in P.plus | P.minus | P.link:
        if x not in allv:
            return "unknown_generator"
    if P.plus & P.minus or P.plus & P.link or P.minus & P.link or (P.plus | P.minus | P.link) != allv:
        return "not_a_partition"
    m = P.base
    if m not in G.vertices:
        return "unknown_base"
    if P.link != _link_letters(G, m):
        return "link"
    if not P.splits(m):
        return "base_not_split"
    if len(P.plus) < 2 or len(P.minus) < 2:
        return "singleton_side"
    for C in components_minus_star(G, m):
        sides = {P.side_of((v, s)) for v in C for s in (1, -1)}
        if len(C) > 1 and len(sides) > 1:
            return "component_split"
    for v in G.vertices:
        if v != m and P.splits(v) and not G.link(v) <= G.link(m):
            return "fold_order"
    return None


def validate_partition(G: DefiningGraph, P: WhiteheadPartition) -> tuple[bool, str | None]:
    reason = partition_defect(G, P)
    return reason is None, reason


@functools.lru_cache(maxsize=None)
def sing_and_max(G: DefiningGraph, P: WhiteheadPartition) -> tuple[frozenset[str], frozenset[str]]:
    reason = partition_defect(G, P)
    if reason is not None:
        raise PartitionError(f"invalid partition {P}: {reason}")
    sing = frozenset(v for v in G.vertices if P.splits(v))
    mx = frozenset(v for v in sing if G.link(v) == G.link(P.base))
    return sing, mx


def canonical(G: DefiningGraph, P: WhiteheadPartition) -> WhiteheadPartition:
    """Rebase at the first element of max and orient the base onto the plus side."""
    _, mx = sing_and_max(G, P)
    m = G.sorted(mx)[0]
    Q = WhiteheadPartition(m, P.plus, P.minus, P.link)
    return Q if (m, 1) in Q.plus else Q.swapped()


def _enumeration_key(G: DefiningGraph, P: WhiteheadPartition):
    _, mx = sing_and_max(G, P)
    key = _letter_sort_key(G)
    return (sorted(G.index(v) for v in mx), sorted(key(x) for x in P.plus))


def enumerate_partitions(G: DefiningGraph) -> list[WhiteheadPartition]:
    found = set()
    for m in G.vertices:
        link = _link_letters(G, m)
        blocks = []
        for C in components_minus_star(G, m):
            if len(C) == 1:
                (v,) = C
                blocks.append([((v, 1),), ((v, -1),)])
            else:
                blocks.append([tuple((v, s) for v in C for s in (1, -1))])
        atoms = [a for b in blocks for a in b]
        for choice in itertools.product((1, -1), repeat=len(atoms)):
            plus = {(m, 1)}
            minus = {(m, -1)}
            for atom, side in zip(atoms, choice):
                (plus if side == 1 else minus).update(atom)
            if len(plus) < 2 or len(minus) < 2:
                continue
            P = WhiteheadPartition(m, frozenset(plus), frozenset(minus), link)
            found.add(canonical(G, P))
    return sorted(found, key=lambda P: _enumeration_key(G, P))


def max_set(G: DefiningGraph, A: Label) -> frozenset[str]:
    if isinstance(A, WhiteheadPartition):
        return sing_and_max(G, A)[1]
    G._check(A)
    return frozenset([A])


def labels_adjacent(G: DefiningGraph, A: Label, B: Label) -> bool:
    """Every element of max(A) commutes with (is a neighbour of) every element of max(B)."""
    return all(G.adjacent(x, y) for x in max_set(G, A) for y in max_set(G, B))


def adjacent(G: DefiningGraph, x: Label, y: Label) -> bool:
    if x == y:
        raise PartitionError("adjacency is only defined for distinct labels")
    if isinstance(x, str) and isinstance(y, WhiteheadPartition):
        x, y = y, x
    if isinstance(x, WhiteheadPartition) and isinstance(y, str):
        G._check(y)
        return (y, 1) in x.link
    return labels_adjacent(G, x, y)


def label_twist_leq(G: DefiningGraph, A: Label, B: Label) -> bool:
    """``A <=_t B`` compared through the max sets (reflexive)."""
    if A == B:
        return True
    return all(G.star(x) <= G.star(y) for x in max_set(G, A) for y in max_set(G, B))


def compatible(G: DefiningGraph, P: WhiteheadPartition, Q: WhiteheadPartition) -> bool:
    if P == Q:
        raise PartitionError("compatibility is only defined for distinct partitions")
    if adjacent(G, P, Q):
        return True
    disjoint = sum(1 for X in (P.plus, P.minus) for Y in (Q.plus, Q.minus) if not X & Y)
    assert disjoint <= 1, f"{P} and {Q} have {disjoint} disjoint side pairs"
    return disjoint == 1


def is_compatible_collection(G: DefiningGraph, Pi: Iterable[WhiteheadPartition]) -> bool:
    Pi = list(Pi)
    if len(set(Pi)) != len(Pi):
        return False
    return all(compatible(G, P, Q) for P, Q in itertools.combinations(Pi, 2))


def compatible_collections(G: DefiningGraph, partitions: list[WhiteheadPartition] | None = None
                           ) -> list[tuple[WhiteheadPartition, ...]]:
    """All pairwise compatible subsets (including the empty one), by size then index."""
    parts = enumerate_partitions(G) if partitions is None else list(partitions)
    n = len(parts)
    ok = [[i != j and compatible(G, parts[i], parts[j]) for j in range(n)] for i in range(n)]
    found: list[tuple[int, ...]] = []

    def grow(current: tuple[int, ...], candidates: list[int]):
        found.append(current)
        for k, i in enumerate(candidates):
            grow(current + (i,), [j for j in candidates[k + 1:] if ok[i][j]])

    grow((), list(range(n)))
    found.sort(key=lambda c: (len(c), c))
    return [tuple(parts[i] for i in c) for c in found]
