"""Acceptance criteria 1-7, each run at its stated tolerance.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""
import time

import numpy as np
import pytest

from oracles import brute_partitions
from raagcx.blowup import build_blowup
from raagcx.census import census
from raagcx.cli import RunConfig, render, run_command
from raagcx.fixtures import D2, E2, F3, K3, P3, fixture_blowups
from raagcx.graph import components_minus_star, small_graphs
from raagcx.isometry import (central_decomposition, cubical_isometries, h1_action, matrix_order,
                             trivial_h1_audit)
from raagcx.metrics import (TotalLabelOrder, geodesic_cycle_check, inject_shear, random_allowable,
                            straighten, structure_from_gram, unit_structure, validate_allowable)
from raagcx.partitions import enumerate_partitions, make_partition, sing_and_max
from raagcx.tori import intersect_tori, maximal_torus
from raagcx.words import (compose, identity, is_identity, ls_generators, partial_conjugation,
                          verify_relators, whitehead_automorphism, words_equal)

BLOWUPS = fixture_blowups()
TIMES = (0.0, 0.25, 0.5, 0.75, 1.0)
CENSUS_BUDGET = 300.0
_census_reports: dict = {}


@pytest.mark.criterion(1, "partition census against the brute-force oracle")
def test_criterion_1_partition_census(criterion):
    expected = {"E2": (E2, 0), "K3": (K3, 0), "D2": (D2, 2), "P3": (P3, 2), "F3": (F3, 4)}
    for name, (G, count) in expected.items():
        parts = enumerate_partitions(G)
        oracle = brute_partitions(G)
        assert len(parts) == len(oracle) == count, name
        assert {frozenset((P.plus, P.minus)) for P in parts} == oracle
    criterion.done("E2 0, K3 0, D2 2, P3 2, F3 4")


@pytest.mark.criterion(2, "blowup census over all graphs on at most 4 vertices")
def test_criterion_2_blowup_census(criterion):
    start = time.perf_counter()
    complexes = violations = 0
    failing = []
    for G in small_graphs(4):
        rep = census(G)
        _census_reports[repr(G)] = render(rep)
        complexes += rep["complexes"]
        violations += rep["violations"]
        assert rep["euler_values"] in ([rep["salvetti_euler"]], [])
        failing += rep["failing"][:2]
    elapsed = time.perf_counter() - start
    assert violations == 0, failing
    assert elapsed <= CENSUS_BUDGET, f"census took {elapsed:.0f}s"
    criterion.done(f"{complexes} complexes, 0 violations, {elapsed:.0f}s")


@pytest.mark.criterion(3, "fixture f-vectors")
def test_criterion_3_fixture_f_vectors(criterion):
    assert BLOWUPS["D2 theta"].f_vector() == (2, 3)
    p3 = BLOWUPS["P3 blowup"]
    assert p3.f_vector() == (2, 5, 3)
    D = central_decomposition(p3)
    assert D.certified and D.center == ("b",) and D.X0_f_vector() == (2, 3)
    P = make_partition(F3, ["b", "w"], ["b^-1", "w^-1"])
    assert build_blowup(F3, (P,)).f_vector() == (2, 5, 2)
    I = intersect_tori(p3, maximal_torus(p3, ("a", "b")), maximal_torus(p3, ("b", "c")))
    assert I.f_vector() == (2, 3, 1)
    criterion.done("(2,3); (2,5,3) = (2,3) x circle; (2,5,2); (2,3,1)")


@pytest.mark.criterion(4, "metric suite")
def test_criterion_4_metric_suite(criterion):
    structures = 0
    for name, B in sorted(BLOWUPS.items()):
        for seed in range(100):
            S = random_allowable(B, seed=seed)
            assert not S.notes, (name, seed, S.notes)
            assert validate_allowable(B, S.order, S) == (True, []), (name, seed)
            for t in TIMES:
                St = straighten(B, S, t)
                assert validate_allowable(B, St.order, St) == (True, []), (name, seed, t)
                for cm in St.cubes.values():
                    norms = np.linalg.norm(cm.matrix(), axis=0)
                    assert np.all(np.abs(norms - [S.lengths[A] for A in cm.labels]) <= 1e-9)
                if t == 1.0:
                    assert all(np.array_equal(cm.shear, np.eye(len(cm.labels))) for cm in St.cubes.values())
            structures += 1
    # forbidden shears in C4 squares
    c4 = BLOWUPS["C4 salvetti"]
    U = unit_structure(c4)
    for sq in c4.cells[2]:
        assert validate_allowable(c4, U.order, inject_shear(U, sq, 0, 1, 0.2)) == (False, ["shear"])
    # F3 angle-condition violation
    f3 = BLOWUPS["F3 blowup"]
    a, b, Pl = f3.label_of("a"), f3.label_of("b"), f3.label_of(f3.Pi[0])
    bad = structure_from_gram(f3, TotalLabelOrder.default(f3), {A: 1.0 for A in f3.label_set()},
                              lambda A, C: {frozenset((a, b)): 0.2, frozenset((a, Pl)): -0.1}.get(
                                  frozenset((A, C)), 0.0))
    assert validate_allowable(f3, bad.order, bad) == (False, ["angle"])
    assert not geodesic_cycle_check(f3, bad, "b")
    criterion.done(f"{structures} structures x {len(TIMES)} times; shear and angle rejections")


@pytest.mark.criterion(5, "automorphism suite")
def test_criterion_5_automorphisms(criterion):
    generators = whiteheads = 0
    for G in small_graphs(4):
        for phi in ls_generators(G):
            assert verify_relators(G, phi), phi.name
            assert is_identity(G, compose(G, phi, phi.inverse)), phi.name
            generators += 1
        for P in enumerate_partitions(G):
            for m in sing_and_max(G, P)[1]:
                phi = whitehead_automorphism(G, P, m)
                assert verify_relators(G, phi) and is_identity(G, compose(G, phi, phi))
                whiteheads += 1
        for v in G.vertices:
            prod = identity(G)
            for C in components_minus_star(G, v):
                prod = compose(G, partial_conjugation(G, v, C), prod)
            for g in G.vertices:
                assert words_equal(G, prod.images[g], ((v, 1), (g, 1), (v, -1)))
    criterion.done(f"{generators} generators, {whiteheads} Whitehead automorphisms")


@pytest.mark.criterion(6, "isometry audit")
def test_criterion_6_isometry_audit(criterion):
    rose = BLOWUPS["D2 rose"]
    assert len(cubical_isometries(rose, unit_structure(rose))) == 8
    uneven = structure_from_gram(rose, TotalLabelOrder.default(rose), {0: 1.0, 1: 2.0}, lambda A, C: 0.0)
    assert len(cubical_isometries(rose, uneven)) == 4
    audits = 0
    for name, B in sorted(BLOWUPS.items()):
        for seed in range(20):
            S = random_allowable(B, seed=seed)
            isos = cubical_isometries(B, S)
            rep = trivial_h1_audit(B, S, isos)
            assert rep["passed"], (name, seed, rep["violations"])
            assert rep["kernel_order"] == 1 and rep["injective"]
            for g in isos:
                M = h1_action(B, g)
                assert round(abs(np.linalg.det(M))) == 1 and matrix_order(M) is not None
            audits += 1
    criterion.done(f"{audits} audits, kernel trivial and injective throughout")


@pytest.mark.criterion(7, "determinism of census reports")
def test_criterion_7_determinism(criterion):
    graphs = [G for G in small_graphs(4)]
    for G in graphs:
        first = _census_reports.get(repr(G))
        if first is None:
            first = render(census(G))
        assert render(census(G)) == first, repr(G)
    reports = []
    for _ in range(2):
        status, rep = run_command(RunConfig("census", "fixture:C4"))
        reports.append(render(rep).encode())
    assert status == 0 and reports[0] == reports[1]
    criterion.done(f"{len(graphs)} graphs re-run byte-identically")
