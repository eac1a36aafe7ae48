"""Cubical isometries of skewed blowups, their action on H_1, and the central-torus audit.

A cubical automorphism is recorded as a triple: a permutation ``f`` of the
regions (vertices), a permutation ``sigma`` of the labels (hyperplanes) and
a sign ``eps`` per label telling whether A-edges keep or reverse their
direction. Each label has one hyperplane, so the edge map is determined by
the triple.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

import numpy as np

from .blowup import BlowupComplex, Cell, characteristic_cycle
from .graph import central_clique
from .metrics import TOL, SkewedStructure
from .tori import MaximalTorus, _f_vector, all_maximal_tori


@dataclass(frozen=True)
class CubicalIsometry:
    f: tuple[tuple[int, int], ...]  # sorted (region, image) pairs
    sigma: tuple[int, ...]          # label index -> label index (-1 where unused)
    eps: tuple[int, ...]            # label index -> +1 / -1

    @property
    def vertex_map(self) -> dict[int, int]:
        return dict(self.f)

    def image_cell(self, B: BlowupComplex, c: Cell) -> Cell:
        S, r = c
        base = r
        for A in S:
            if self.eps[A] == -1:
                base ^= B.flip[A]
        return (tuple(sorted(self.sigma[A] for A in S)), self.vertex_map[base])

    def cell_map(self, B: BlowupComplex) -> dict[Cell, Cell]:
        return {c: self.image_cell(B, c) for c in B.all_cells()}

    def compose(self, other: "CubicalIsometry") -> "CubicalIsometry":
        """self after other."""
        fs, fo = self.vertex_map, other.vertex_map
        f = tuple(sorted((r, fs[fo[r]]) for r in fo))
        sigma = tuple(-1 if s < 0 else self.sigma[s] for s in other.sigma)
        eps = tuple(e if s < 0 else e * self.eps[s] for s, e in zip(other.sigma, other.eps))
        return CubicalIsometry(f, sigma, eps)

    def inverse(self) -> "CubicalIsometry":
        f = tuple(sorted((y, x) for x, y in self.f))
        sigma = [-1] * len(self.sigma)
        eps = [1] * len(self.eps)
        for A, s in enumerate(self.sigma):
            if s >= 0:
                sigma[s] = A
                eps[s] = self.eps[A]
        return CubicalIsometry(f, tuple(sigma), tuple(eps))

    def is_identity(self) -> bool:
        return all(x == y for x, y in self.f) and all(
            s < 0 or (s == A and e == 1) for A, (s, e) in enumerate(zip(self.sigma, self.eps)))

    def describe(self, B: BlowupComplex) -> dict:
        return {
            "vertices": {B.region_str(x): B.region_str(y) for x, y in self.f},
            "labels": {B.label_name(A): ("" if e == 1 else "-") + B.label_name(s)
                       for A, (s, e) in enumerate(zip(self.sigma, self.eps)) if s >= 0},
        }


def identity_isometry(B: BlowupComplex) -> CubicalIsometry:
    used = B.label_set()
    return CubicalIsometry(tuple((r, r) for r in sorted(B.regions)),
                           tuple(A if A in used else -1 for A in range(len(B.labels))),
                           tuple(1 for _ in B.labels))


def _propagate(B: BlowupComplex, sigma, eps, root: int, image: int) -> dict[int, int] | None:
    """Vertex map forced by (sigma, eps) and root -> image, or None on a contradiction."""
    f = {root: image}
    q = deque([root])
    labels = sorted(B.label_set())
    while q:
        x = q.popleft()
        y = f[x]
        for A in labels:
            sA = sigma[A]
            # tail of the A-edge at x, and whether x is its tail or head
            moved = False
            for x_tail, y_tail in ((x, y if eps[A] == 1 else y ^ B.flip[sA]),
                                   (x ^ B.flip[A], y ^ B.flip[sA] if eps[A] == 1 else y)):
                here = B.contains(((A,), x_tail))
                if here != B.contains(((sA,), y_tail)):
                    return None
                moved |= here
            if not moved:
                continue
            x2, y2 = x ^ B.flip[A], y ^ B.flip[sA]
            if x2 in f:
                if f[x2] != y2:
                    return None
            else:
                f[x2] = y2
                q.append(x2)
    return f


def _label_permutations(B: BlowupComplex, S: SkewedStructure | None):
    labels = sorted(B.label_set())
    counts = {A: len(B.edges_with_label(A)) for A in labels}
    adj = B.label_adj

    def fits(A, X, chosen):
        if counts[A] != counts[X]:
            return False
        if S is not None and abs(S.lengths[A] - S.lengths[X]) > TOL:
            return False
        if (B.flip[A] == 0) != (B.flip[X] == 0):
            return False
        return all(adj[A][C] == adj[X][chosen[C]] for C in chosen)

    def grow(i, chosen):
        if i == len(labels):
            yield dict(chosen)
            return
        A = labels[i]
        for X in labels:
            if X not in chosen.values() and fits(A, X, chosen):
                chosen[A] = X
                yield from grow(i + 1, chosen)
                del chosen[A]

    yield from grow(0, {})


def _metric_preserved(B: BlowupComplex, S: SkewedStructure, g: CubicalIsometry) -> bool:
    for c, cm in S.cubes.items():
        img = g.image_cell(B, c)
        other = S.cubes.get(img)
        if other is None:
            return False
        G1, G2 = cm.gram(), other.gram()
        pos = {A: i for i, A in enumerate(other.labels)}
        for i, A in enumerate(cm.labels):
            for j, C in enumerate(cm.labels):
                want = G1[i, j] * g.eps[A] * g.eps[C]
                if abs(G2[pos[g.sigma[A]], pos[g.sigma[C]]] - want) > TOL:
                    return False
    return True


def cubical_isometries(B: BlowupComplex, S: SkewedStructure | None = None) -> list[CubicalIsometry]:
    """Every cubical automorphism of B preserving S (all of them when S is None)."""
    labels = sorted(B.label_set())
    nl = len(B.labels)
    regions = sorted(B.regions)
    root = regions[0]
    all_cells = set(B.all_cells())
    found = []
    for perm in _label_permutations(B, S):
        sigma = tuple(perm.get(A, -1) for A in range(nl))
        for signs in itertools.product((1, -1), repeat=len(labels)):
            eps = [1] * nl
            for A, s in zip(labels, signs):
                eps[A] = s
            eps = tuple(eps)
            for image in regions:
                f = _propagate(B, sigma, eps, root, image)
                if f is None or len(f) != len(regions) or sorted(f.values()) != regions:
                    continue
                g = CubicalIsometry(tuple(sorted(f.items())), sigma, eps)
                if {g.image_cell(B, c) for c in all_cells} != all_cells:
                    continue
                if S is not None and not _metric_preserved(B, S, g):
                    continue
                found.append(g)
    return sorted(found, key=lambda g: (not g.is_identity(), g.sigma, g.eps, g.f))


def group_check(isos: list[CubicalIsometry]) -> bool:
    """Closed under composition and inverses, and contains the identity."""
    members = set(isos)
    if not any(g.is_identity() for g in isos):
        return False
    return all(g.inverse() in members for g in isos) and all(
        g.compose(h) in members for g in isos for h in isos)


def h1_action(B: BlowupComplex, g: CubicalIsometry) -> np.ndarray:
    """Integer matrix of g on H_1 in the basis of generators (columns are images).

    The basis class of v is its characteristic cycle; the image cycle is
    pushed through the collapse to the Salvetti complex, which forgets
    partition edges and reads each generator edge as that generator.
    """
    n = len(B.G.vertices)
    M = np.zeros((n, n), dtype=np.int64)
    for v in range(n):
        e = B.edges_with_label(v)[0]
        cyc = characteristic_cycle(B, B.G.vertices[v], e)
        for (edge, s) in cyc.steps:
            A = edge[0][0]
            X = g.sigma[A]
            if not B.is_partition_label(X):
                M[X, v] += s * g.eps[A]
    return M


def matrix_order(M: np.ndarray, limit: int = 10_000) -> int | None:
    n = M.shape[0]
    P = np.eye(n, dtype=np.int64)
    for k in range(1, limit + 1):
        P = P @ M
        if np.array_equal(P, np.eye(n, dtype=np.int64)):
            return k
    return None


@dataclass
class CentralDecomposition:
    center: tuple[str, ...]
    central_labels: tuple[int, ...]
    X0: frozenset[Cell]
    certified: bool

    def X0_f_vector(self) -> tuple[int, ...]:
        return _f_vector(self.X0)


def central_decomposition(B: BlowupComplex) -> CentralDecomposition:
    """B = X_0 x (central circles), cell by cell."""
    Z = tuple(B.G.sorted(central_clique(B.G)))
    zl = tuple(B.label_of(v) for v in Z)
    # st(v) = V means no partition can split v, so every central edge is a loop
    assert all(B.flip[A] == 0 for A in zl)
    cells = set(B.all_cells())
    X0 = frozenset(c for c in cells if not set(c[0]) & set(zl))
    ok = True
    for c in X0:
        for k in range(len(zl) + 1):
            for extra in itertools.combinations(zl, k):
                if (tuple(sorted(c[0] + extra)), c[1]) not in cells:
                    ok = False
    expect = _f_vector(X0)
    for _ in zl:
        expect = tuple(a + b for a, b in itertools.zip_longest(expect + (0,), (0,) + expect, fillvalue=0))
    ok = ok and len(cells) == len(X0) * 2 ** len(zl) and expect == B.f_vector()
    return CentralDecomposition(Z, zl, X0, ok)


@dataclass
class TorusRestriction:
    clique: tuple[str, ...]
    preserved: bool
    shift: tuple[int, ...] | None
    central_only: bool

    def to_dict(self) -> dict:
        return {"clique": list(self.clique), "preserved": self.preserved,
                "shift": None if self.shift is None else list(self.shift), "central_only": self.central_only}


def restriction_to_torus(B: BlowupComplex, S: SkewedStructure | None, g: CubicalIsometry,
                         T: MaximalTorus, check_h1: bool = True) -> TorusRestriction:
    """Is g on T a shift along the product of characteristic cycles, and by how much?"""
    if check_h1 and not np.array_equal(h1_action(B, g), np.eye(len(B.G.vertices), dtype=np.int64)):
        raise ValueError("restriction_to_torus needs an isometry acting trivially on H_1")
    image = {g.image_cell(B, c) for c in T.cells}
    if image != set(T.cells):
        return TorusRestriction(T.clique, False, None, False)
    lengths = T.cycle_lengths()
    shift = tuple((q - p) % L for p, q, L in zip(T.coords[T.base], T.coords[g.vertex_map[T.base]], lengths))
    (start,) = {kc for kc, _ in T.product}
    for (kc, choice), c in T.product.items():
        moved = tuple((kind, (p + s) % L) for (kind, p), s, L in zip(choice, shift, lengths))
        if g.image_cell(B, c) != T.product[(start, moved)]:
            return TorusRestriction(T.clique, True, None, False)
    center = central_clique(B.G)
    central_only = all(s == 0 or v in center for v, s in zip(T.clique, shift))
    return TorusRestriction(T.clique, True, shift, central_only)


def _is_central_translation(B: BlowupComplex, g: CubicalIsometry, tori) -> bool:
    """A full-cycle shift along central circles, seen on every maximal torus."""
    for T in tori:
        r = restriction_to_torus(B, None, g, T, check_h1=False)
        if not (r.preserved and r.shift is not None and r.central_only):
            return False
        # central circles are single loops, so the only central shift is trivial
        if any(r.shift):
            return False
    return True


def trivial_h1_audit(B: BlowupComplex, S: SkewedStructure | None = None, isos=None) -> dict:
    isos = cubical_isometries(B, S) if isos is None else isos
    n = len(B.G.vertices)
    eye = np.eye(n, dtype=np.int64)
    tori = all_maximal_tori(B)
    violations = []
    if not group_check(isos):
        violations.append("not a group")
    mats = [h1_action(B, g) for g in isos]
    index = {g: i for i, g in enumerate(isos)}
    for i, M in enumerate(mats):
        d = round(float(np.linalg.det(M))) if n else 1
        if d not in (1, -1):
            violations.append(f"det {d} for element {i}")
        if matrix_order(M, len(isos) + 1) is None:
            violations.append(f"infinite order for element {i}")
    for i, g in enumerate(isos):
        for j, h in enumerate(isos):
            k = index.get(g.compose(h))
            if k is not None and not np.array_equal(mats[k], mats[i] @ mats[j]):
                violations.append(f"h1 not multiplicative at ({i},{j})")
    kernel = [g for g, M in zip(isos, mats) if np.array_equal(M, eye)]
    for g in kernel:
        if not _is_central_translation(B, g, tori):
            violations.append(f"kernel element is not a central translation: {g.describe(B)}")
    if len(kernel) != 1 or not kernel[0].is_identity():
        violations.append(f"trivial-H1 subgroup has order {len(kernel)}")
    distinct = {M.tobytes() for M in mats}
    injective = len(distinct) * len(kernel) == len(isos)
    if not injective:
        violations.append("H1 representation of the quotient is not injective")
    return {
        "group_order": len(isos),
        "kernel_order": len(kernel),
        "center": list(B.G.sorted(central_clique(B.G))),
        "injective": injective,
        "h1_images": sorted({tuple(map(tuple, M.tolist())) for M in mats}),
        "violations": violations,
        "passed": not violations,
    }
