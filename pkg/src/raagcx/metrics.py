"""Allowable parallelotope structures (skewed metrics) on blowups.

A structure stores a global length per label and, for every maximal cube,
the factorisation M = DU of its edge matrix with columns ordered from the
largest label to the smallest in a fixed total order extending the twist
order. Shears u_ij (i < j) are only allowed when A_i >=_t A_j.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .blowup import BlowupComplex, Cell, all_characteristic_cycles
from .graph import twist_dominant
from .partitions import label_twist_leq, max_set

TOL = 1e-9
REASONS = ("order", "cubes", "degenerate", "shear", "length", "coherence", "angle")


class StraighteningError(ValueError):
    pass


def twist_leq(B: BlowupComplex, A: int, C: int) -> bool:
    return label_twist_leq(B.G, B.labels[A], B.labels[C])


@dataclass(frozen=True)
class TotalLabelOrder:
    """A total order on label indices, listed from smallest to largest.

    It must extend the twist preorder; twist-equivalent labels may come in
    either order.
    """

    sequence: tuple[int, ...]

    @classmethod
    def default(cls, B: BlowupComplex) -> "TotalLabelOrder":
        # the size of the twist down-set strictly grows along strict twist order
        labels = range(len(B.labels))
        down = {A: sum(twist_leq(B, X, A) for X in labels) for A in labels}
        return cls(tuple(sorted(labels, key=lambda A: (down[A], A))))

    @classmethod
    def from_names(cls, B: BlowupComplex, names) -> "TotalLabelOrder":
        lookup = {B.label_name(A): A for A in range(len(B.labels))}
        return cls(tuple(lookup[n] for n in names))

    @property
    def ranks(self) -> dict[int, int]:
        return {A: i for i, A in enumerate(self.sequence)}

    def descending(self, labels) -> tuple[int, ...]:
        r = self.ranks
        return tuple(sorted(labels, key=lambda A: -r[A]))

    def violations(self, B: BlowupComplex) -> list[tuple[int, int]]:
        if sorted(self.sequence) != list(range(len(B.labels))):
            return [(-1, -1)]
        r = self.ranks
        return [(A, C) for A, C in itertools.permutations(self.sequence, 2)
                if r[A] > r[C] and twist_leq(B, A, C) and not twist_leq(B, C, A)]

    def is_valid(self, B: BlowupComplex) -> bool:
        return not self.violations(B)

    def names(self, B: BlowupComplex) -> list[str]:
        return [B.label_name(A) for A in self.sequence]


@dataclass
class CubeMetric:
    """Edge matrix M = DU of one maximal cube; ``labels`` run in descending order."""

    labels: tuple[int, ...]
    diag: np.ndarray
    shear: np.ndarray

    def matrix(self) -> np.ndarray:
        return self.diag[:, None] * self.shear

    def gram(self) -> np.ndarray:
        M = self.matrix()
        return M.T @ M

    def copy(self) -> "CubeMetric":
        return CubeMetric(self.labels, self.diag.copy(), self.shear.copy())


@dataclass
class SkewedStructure:
    order: TotalLabelOrder
    lengths: dict[int, float]
    cubes: dict[Cell, CubeMetric]
    seed: int | None = None
    notes: list[str] = field(default_factory=list)

    def is_rectilinear(self) -> bool:
        return all(np.allclose(c.shear, np.eye(len(c.labels)), atol=TOL, rtol=0)
                   for c in self.cubes.values())

    def pair_grams(self) -> dict[tuple[int, int], list[float]]:
        """Every value taken by the Gram entry of each label pair, over all maximal cubes."""
        out: dict[tuple[int, int], list[float]] = {}
        for cm in self.cubes.values():
            G = cm.gram()
            for i, j in itertools.combinations(range(len(cm.labels)), 2):
                A, C = cm.labels[i], cm.labels[j]
                out.setdefault((min(A, C), max(A, C)), []).append(float(G[i, j]))
        return out

    def gram_entry(self, A: int, C: int) -> float | None:
        vals = self.pair_grams().get((min(A, C), max(A, C)))
        return vals[0] if vals else None

    def cosine(self, A: int, C: int) -> float | None:
        g = self.gram_entry(A, C)
        return None if g is None else g / (self.lengths[A] * self.lengths[C])

    def copy(self) -> "SkewedStructure":
        return SkewedStructure(self.order, dict(self.lengths),
                               {c: m.copy() for c, m in self.cubes.items()}, self.seed, list(self.notes))

    def to_dict(self, B: BlowupComplex) -> dict:
        cubes = []
        for c in sorted(self.cubes):
            cm = self.cubes[c]
            n = len(cm.labels)
            cubes.append({
                "cube": B.describe(c),
                "labels": [B.label_name(A) for A in cm.labels],
                "diag": [round(float(x), 12) for x in cm.diag],
                "shear": [[i, j, round(float(cm.shear[i, j]), 12)]
                          for i in range(n) for j in range(i + 1, n) if cm.shear[i, j] != 0],
            })
        return {
            "seed": self.seed,
            "order": self.order.names(B),
            "lengths": {B.label_name(A): round(float(self.lengths[A]), 12) for A in sorted(self.lengths)},
            "cubes": cubes,
            "rectilinear": self.is_rectilinear(),
            "notes": list(self.notes),
        }


def structure_from_dict(B: BlowupComplex, data: dict) -> SkewedStructure:
    order = TotalLabelOrder.from_names(B, data["order"])
    lookup = {B.label_name(A): A for A in range(len(B.labels))}
    by_name = {B.describe(c): c for c in B.maximal_cells()}
    cubes = {}
    for entry in data["cubes"]:
        labels = tuple(lookup[n] for n in entry["labels"])
        U = np.eye(len(labels))
        for i, j, u in entry["shear"]:
            U[i, j] = u
        cubes[by_name[entry["cube"]]] = CubeMetric(labels, np.array(entry["diag"], dtype=float), U)
    lengths = {lookup[n]: float(x) for n, x in data["lengths"].items()}
    return SkewedStructure(order, lengths, cubes, data.get("seed"), list(data.get("notes", [])))


def _cube_from_gram(labels: tuple[int, ...], G: np.ndarray) -> CubeMetric:
    R = np.linalg.cholesky(G).T  # G = R^T R with R upper triangular
    d = np.diag(R).copy()
    return CubeMetric(labels, d, R / d[:, None])


def structure_from_gram(B: BlowupComplex, order: TotalLabelOrder, lengths: dict[int, float],
                        gram, seed=None) -> SkewedStructure:
    """Factor each maximal cube's Gram matrix; ``gram(A, C)`` gives the off-diagonal entries."""
    cubes = {}
    for c in B.maximal_cells():
        labels = order.descending(c[0])
        n = len(labels)
        G = np.empty((n, n))
        for i in range(n):
            for j in range(n):
                A, C = labels[i], labels[j]
                G[i, j] = lengths[A] ** 2 if i == j else gram(A, C)
        cubes[c] = _cube_from_gram(labels, G) if n else CubeMetric((), np.zeros(0), np.zeros((0, 0)))
    return SkewedStructure(order, dict(lengths), cubes, seed)


def unit_structure(B: BlowupComplex, order: TotalLabelOrder | None = None,
                   lengths: dict[int, float] | None = None) -> SkewedStructure:
    order = TotalLabelOrder.default(B) if order is None else order
    lengths = {A: 1.0 for A in B.label_set()} if lengths is None else dict(lengths)
    return structure_from_gram(B, order, lengths, lambda A, C: 0.0)


def representative(B: BlowupComplex, A: int) -> int:
    """The generator whose angles a label must copy: v when max(A) = {v} is twist-dominant."""
    if not B.is_partition_label(A):
        return A
    mx = max_set(B.G, B.labels[A])
    if len(mx) == 1:
        (v,) = mx
        if twist_dominant(B.G, v):
            return B.G.index(v)
    return A


def shear_permitted(B: BlowupComplex, A: int, C: int) -> bool:
    return twist_leq(B, A, C) or twist_leq(B, C, A)


def random_allowable(B: BlowupComplex, order: TotalLabelOrder | None = None, seed: int = 0,
                     shear_scale: float = 0.3) -> SkewedStructure:
    """Random lengths, plus random cosines on twist-comparable adjacent pairs.

    Cosines are attached to pairs of representatives, which ties the angle
    of e_A to that of its twist-dominant max generator. Their size keeps each
    Gram matrix diagonally dominant.
    """
    order = TotalLabelOrder.default(B) if order is None else order
    rng = np.random.default_rng(seed)
    labels = sorted(B.label_set())
    lengths = {A: float(rng.uniform(0.5, 2.0)) for A in labels}
    dim = B.dim
    bound = min(shear_scale, 0.9 / (dim - 1)) if dim > 1 else 0.0
    reps = sorted({representative(B, A) for A in labels})
    cos: dict[tuple[int, int], float] = {}
    for x, y in itertools.combinations(reps, 2):
        c = float(rng.uniform(-bound, bound))
        if B.label_adj[x][y] and shear_permitted(B, x, y):
            cos[(x, y)] = c

    def gram(A, C):
        x, y = sorted((representative(B, A), representative(B, C)))
        return cos.get((x, y), 0.0) * lengths[A] * lengths[C]

    S = structure_from_gram(B, order, lengths, gram, seed)
    ok, reasons = validate_allowable(B, order, S)
    if not ok:
        # a forced shear at a forbidden position; fall back to the rectilinear metric
        S = structure_from_gram(B, order, lengths, lambda A, C: 0.0, seed)
        S.notes.append(f"rectilinear fallback: {','.join(reasons)}")
    return S


def validate_allowable(B: BlowupComplex, order: TotalLabelOrder, S: SkewedStructure
                       ) -> tuple[bool, list[str]]:
    found: set[str] = set()
    complete = sorted(order.sequence) == list(range(len(B.labels)))
    if not complete or not order.is_valid(B) or S.order != order:
        found.add("order")
    maximal = set(B.maximal_cells())
    if set(S.cubes) != maximal or any(S.lengths.get(A, 0.0) <= TOL for A in B.label_set()):
        found.add("cubes")
    ranks = order.ranks if complete else None
    for c, cm in S.cubes.items():
        if c not in maximal or sorted(cm.labels) != list(c[0]):
            found.add("cubes")
            continue
        n = len(cm.labels)
        if ranks is not None and any(ranks[cm.labels[i]] < ranks[cm.labels[i + 1]] for i in range(n - 1)):
            found.add("order")
        if np.any(cm.diag <= TOL):
            found.add("degenerate")
        if np.any(np.abs(np.diag(cm.shear) - 1) > TOL) or np.any(np.abs(np.tril(cm.shear, -1)) > TOL):
            found.add("degenerate")
        for i in range(n):
            for j in range(i + 1, n):
                if abs(cm.shear[i, j]) > TOL and not twist_leq(B, cm.labels[j], cm.labels[i]):
                    found.add("shear")
        norms = np.sqrt(np.diag(cm.gram())) if n else []
        for A, x in zip(cm.labels, norms):
            if abs(x - S.lengths.get(A, 0.0)) > TOL:
                found.add("length")
    pairs = S.pair_grams()
    if any(max(vals) - min(vals) > TOL for vals in pairs.values()):
        found.add("coherence")
    if angle_violations(B, S, pairs):
        found.add("angle")
    reasons = [r for r in REASONS if r in found]
    return not reasons, reasons


def angle_violations(B: BlowupComplex, S: SkewedStructure, pairs=None) -> list[tuple[int, int]]:
    """Pairs (A, C) where the angle of e_A with e_C differs from that of e_v, max(A) = {v}."""
    pairs = S.pair_grams() if pairs is None else pairs

    def cos_values(A, C):
        vals = pairs.get((min(A, C), max(A, C)), [])
        return [g / (S.lengths[A] * S.lengths[C]) for g in vals]

    bad = []
    for A in sorted(B.label_set()):
        v = representative(B, A)
        if v == A:
            continue
        for C in sorted(B.label_set()):
            if C in (A, v) or not B.label_adj[A][C]:
                continue
            ours, theirs = cos_values(A, C), cos_values(v, C)
            if any(abs(x - y) > TOL for x in ours for y in theirs):
                bad.append((A, C))
    return bad


def geodesic_cycle_check(B: BlowupComplex, S: SkewedStructure, v: str) -> bool:
    """Angle equalities at every corner of every characteristic cycle of a twist-dominant v."""
    if not twist_dominant(B.G, v):
        raise ValueError(f"{v} is not twist-dominant")
    vi = B.G.index(v)
    labels = sorted(B.label_set())
    for e in B.edges_with_label(vi):
        for cyc in all_characteristic_cycles(B, v, e):
            steps = [f[0][0] for f, _ in cyc.steps]
            for A, C in zip(steps, steps[1:] + steps[:1]):
                for L in labels:
                    if L in (A, C, vi) or not (B.label_adj[A][L] and B.label_adj[C][L]):
                        continue
                    cs = [x for x in (S.cosine(X, L) for X in (A, vi, C)) if x is not None]
                    if cs and max(cs) - min(cs) > TOL:
                        return False
    return True


def straighten(B: BlowupComplex, S: SkewedStructure, t: float) -> SkewedStructure:
    """Scale every shear by (1 - t) and rebuild the diagonal so edge lengths stay fixed."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if t == 0:
        return S.copy()
    out = S.copy()
    for c, cm in out.cubes.items():
        n = len(cm.labels)
        U = np.eye(n) + (1.0 - t) * np.triu(cm.shear, 1)
        d = np.zeros(n)
        for j in range(n):
            rad = S.lengths[cm.labels[j]] ** 2 - sum(d[i] ** 2 * U[i, j] ** 2 for i in range(j))
            if rad <= 0:
                raise StraighteningError(f"nonpositive radicand {rad:.3g} in {B.describe(c)} at t={t}")
            d[j] = np.sqrt(rad)
        out.cubes[c] = CubeMetric(cm.labels, d, U)
    ok, reasons = validate_allowable(B, out.order, out)
    if not ok:
        raise StraighteningError(f"straightened structure at t={t} is not allowable: {','.join(reasons)}")
    return out


def inject_shear(S: SkewedStructure, cube: Cell, i: int, j: int, value: float) -> SkewedStructure:
    """Copy of S with u_ij set in one cube; the diagonal is rebuilt to keep column lengths."""
    out = S.copy()
    cm = out.cubes[cube]
    cm.shear[i, j] = value
    for col in range(len(cm.labels)):
        rad = S.lengths[cm.labels[col]] ** 2 - sum(cm.diag[r] ** 2 * cm.shear[r, col] ** 2 for r in range(col))
        if rad > 0:
            cm.diag[col] = np.sqrt(rad)
    return out


def face_incidences(B: BlowupComplex) -> dict:
    """How many times each cell is attached as a codimension-one face, with multiplicity."""
    count: dict = {}
    for k in range(1, len(B.cells)):
        for c in B.cells[k]:
            for j in range(k):
                for end in (0, 1):
                    f = B.face(c, j, end)
                    count[f] = count.get(f, 0) + 1
    return count


def free_face_check(B: BlowupComplex, S=None) -> bool:
    """No codimension-one face of a maximal cube is free.

    A face is free when it is attached exactly once to a cell one dimension
    up; a square glued to itself along opposite sides covers that edge twice.
    ``S`` is accepted for interface symmetry; the answer depends only on B.
    """
    count = face_incidences(B)
    for c in B.maximal_cells():
        for j in range(len(c[0])):
            for end in (0, 1):
                if count.get(B.face(c, j, end), 0) < 2:
                    return False
    return True
