"""Full invariant sweep over every compatible collection of a graph."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .blowup import (BlowupError, all_characteristic_cycles, build_blowup, check_flag,
                     check_hyperplanes, collapse_all, collapse_partition, collapsed_word,
                     hyperplane_of, maximal_label_sets_unique, salvetti_euler, splitters)
from .graph import DefiningGraph, twist_dominant
from .metrics import free_face_check
from .partitions import compatible_collections, max_set
from .tori import (TorusError, all_maximal_tori, chain_tori, intersect_tori, partition_slice,
                   torus_cover_check, torus_f_vector)


@dataclass
class CollectionReport:
    index: int
    size: int
    f_vector: tuple[int, ...]
    euler: int
    violations: list[str] = field(default_factory=list)
    vertex_free_pairs: int = 0

    def to_dict(self) -> dict:
        return {"index": self.index, "size": self.size, "f_vector": list(self.f_vector),
                "euler": self.euler, "vertex_free_torus_pairs": self.vertex_free_pairs,
                "violations": list(self.violations)}


def check_collection(G: DefiningGraph, Pi, index: int = 0, collapse_orders: int = 2) -> CollectionReport:
    """Run every structural invariant on one blowup; violations are collected, not raised."""
    B = build_blowup(G, Pi)
    rep = CollectionReport(index, len(Pi), B.f_vector(), B.euler())
    bad = rep.violations
    if not check_flag(B):
        bad.append("flag")
    if B.euler() != salvetti_euler(G):
        bad.append("euler")
    if not check_hyperplanes(B):
        bad.append("hyperplanes")
    if not maximal_label_sets_unique(B):
        bad.append("unique_maximal_cube")
    if not free_face_check(B):
        bad.append("free_face")
    for P in Pi:
        try:
            collapse_partition(B, P)
        except BlowupError as exc:
            bad.append(f"collapse:{exc}")
    if len(Pi) > 1 and collapse_orders > 1:
        orders = itertools.islice(itertools.permutations(Pi), collapse_orders)
        maps = []
        for order in orders:
            try:
                final, m = collapse_all(B, order)
            except BlowupError as exc:
                bad.append(f"collapse_all:{exc}")
                break
            maps.append(m.cell_map)
        if any(m != maps[0] for m in maps):
            bad.append("collapse_order")
    _check_cycles(G, B, bad)
    try:
        tori = all_maximal_tori(B)
    except TorusError as exc:
        bad.append(f"torus:{exc}")
        return rep
    ok, _ = torus_cover_check(B, tori)
    if not ok:
        bad.append("torus_cover")
    for T in tori:
        if T.f_vector() != torus_f_vector(T.cycle_lengths()) or T.euler() != 0:
            bad.append(f"torus_product:{T.clique}")
        lengths = T.cycle_lengths()
        # slice through the partition subcomplex is a product of paths
        expect = _path_product_f_vector([L - 1 for L in lengths])
        got = _fv(partition_slice(B, T))
        if got != expect:
            bad.append(f"torus_partition_slice:{T.clique}")
    for T1, T2 in itertools.combinations(tori, 2):
        try:
            I = intersect_tori(B, T1, T2)
        except TorusError as exc:
            if "share no vertex" in str(exc):
                rep.vertex_free_pairs += 1
            else:
                bad.append(f"intersection:{exc}")
        else:
            if not I.K_acyclic:
                bad.append(f"intersection_K_not_acyclic:{T1.clique},{T2.clique}")
            if not I.K_in_partition_subcomplex:
                bad.append(f"intersection_K_labels:{T1.clique},{T2.clique}")
        try:
            chain_tori(B, T1, T2, tori)
        except TorusError as exc:
            bad.append(f"chain:{exc}")
    return rep


def _fv(cells):
    counts: dict[int, int] = {}
    for c in cells:
        counts[len(c[0])] = counts.get(len(c[0]), 0) + 1
    return tuple(counts.get(k, 0) for k in range(max(counts) + 1)) if counts else ()


def _path_product_f_vector(edge_counts) -> tuple[int, ...]:
    fv = [1]
    for m in edge_counts:
        path = [m + 1, m] if m else [1]
        out = [0] * (len(fv) + len(path) - 1)
        for i, a in enumerate(fv):
            for j, b in enumerate(path):
                out[i + j] += a * b
        fv = out
    return tuple(fv)


def _check_cycles(G: DefiningGraph, B, bad: list[str]) -> None:
    for vi, v in enumerate(G.vertices):
        split = splitters(B, vi)
        for e in B.edges_with_label(vi):
            cycles = all_characteristic_cycles(B, v, e)
            for cyc in cycles:
                labels = {f[0][0] for f, _ in cyc.steps[1:]}
                if labels != split or len(cyc.steps) != len(split) + 1:
                    bad.append(f"characteristic_cycle:{v}")
                if collapsed_word(B, cyc) != [(v, 1)]:
                    bad.append(f"cycle_collapse:{v}")
            if twist_dominant(G, v):
                carrier = set()
                for A in B.label_set():
                    if v in max_set(G, B.labels[A]):
                        carrier |= hyperplane_of(B, A).carrier
                for cyc in cycles:
                    if not all(f in carrier for f, _ in cyc.steps):
                        bad.append(f"td_geodesic:{v}")
        if twist_dominant(G, v):
            for A in split:
                if max_set(G, B.labels[A]) != {v}:
                    bad.append(f"td_max:{v}")


def census(G: DefiningGraph, collapse_orders: int = 2) -> dict:
    collections = compatible_collections(G)
    reports = [check_collection(G, Pi, i, collapse_orders) for i, Pi in enumerate(collections)]
    violations = sum(len(r.violations) for r in reports)
    return {
        "graph": {"vertices": list(G.vertices), "edges": G.edge_list()},
        "collections": len(collections),
        "complexes": len(reports),
        "salvetti_euler": salvetti_euler(G),
        "euler_values": sorted({r.euler for r in reports}),
        "vertex_free_torus_pairs": sum(r.vertex_free_pairs for r in reports),
        "violations": violations,
        "failing": [r.to_dict() for r in reports if r.violations],
        "passed": violations == 0,
    }
