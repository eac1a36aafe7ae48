import itertools

import numpy as np
import pytest

from oracles import oracle_group_order
from raagcx.fixtures import D2, fixture_blowups
from raagcx.isometry import (central_decomposition, cubical_isometries, group_check, h1_action,
                             identity_isometry, matrix_order, restriction_to_torus,
                             trivial_h1_audit)
from raagcx.metrics import (TotalLabelOrder, random_allowable, straighten, structure_from_gram,
                            unit_structure)
from raagcx.partitions import make_partition
from raagcx.tori import all_maximal_tori, maximal_torus

BLOWUPS = fixture_blowups()
NAMES = sorted(BLOWUPS)
D2_P = make_partition(D2, ["a", "b"], ["a^-1", "b^-1"])
THETA = BLOWUPS["D2 theta"]
ROSE = BLOWUPS["D2 rose"]


UNIT_ORDERS = {"E2 salvetti": 8, "D2 rose": 8, "D2 theta": 12, "P3 salvetti": 16, "P3 blowup": 24,
               "K3 salvetti": 48, "C4 salvetti": 128, "F3 salvetti": 16, "F3 blowup": 8}


@pytest.mark.parametrize("name", NAMES)
def test_unit_group_order_against_brute_force(name):
    B = BLOWUPS[name]
    isos = cubical_isometries(B, unit_structure(B))
    assert len(isos) == UNIT_ORDERS[name] == oracle_group_order(B)
    assert len(set(isos)) == len(isos)
    assert isos[0].is_identity()
    assert group_check(isos)


def test_rose_examples():
    order = TotalLabelOrder.default(ROSE)
    uneven = structure_from_gram(ROSE, order, {0: 1.0, 1: 2.0}, lambda A, C: 0.0)
    assert len(cubical_isometries(ROSE, unit_structure(ROSE))) == 8
    assert len(cubical_isometries(ROSE, uneven)) == 4


def test_theta_distinct_lengths():
    order = TotalLabelOrder.default(THETA)
    S = structure_from_gram(THETA, order, {0: 1.0, 1: 1.5, 2: 0.7}, lambda A, C: 0.0)
    isos = cubical_isometries(THETA, S)
    assert len(isos) == 2
    swap = next(g for g in isos if not g.is_identity())
    assert np.array_equal(h1_action(THETA, swap), -np.eye(2, dtype=np.int64))


def test_h1_examples():
    B = ROSE
    assert np.array_equal(h1_action(B, identity_isometry(B)), np.eye(2, dtype=np.int64))
    inv_a = next(g for g in cubical_isometries(B)
                 if g.sigma == (0, 1) and g.eps == (-1, 1))
    assert np.array_equal(h1_action(B, inv_a), np.diag([-1, 1]))


@pytest.mark.parametrize("name", NAMES)
def test_h1_is_a_homomorphism(name):
    B = BLOWUPS[name]
    isos = cubical_isometries(B, unit_structure(B))
    mats = {g: h1_action(B, g) for g in isos}
    for g, M in mats.items():
        assert round(abs(np.linalg.det(M))) == 1 if M.size else True
        assert matrix_order(M) is not None
    for g, h in itertools.islice(itertools.product(isos, repeat=2), 400):
        assert np.array_equal(mats[g.compose(h)], mats[g] @ mats[h])
        assert g.compose(g.inverse()).is_identity()


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("seed", range(20))
def test_trivial_h1_kernel_random_metrics(name, seed):
    B = BLOWUPS[name]
    S = random_allowable(B, seed=seed)
    rep = trivial_h1_audit(B, S)
    assert rep["passed"], rep["violations"]
    assert rep["kernel_order"] == 1 and rep["injective"]


@pytest.mark.parametrize("name", NAMES)
def test_trivial_h1_kernel_unit_metric(name):
    B = BLOWUPS[name]
    rep = trivial_h1_audit(B, unit_structure(B))
    assert rep["passed"] and rep["group_order"] == UNIT_ORDERS[name]


def test_theta_audit_images():
    rep = trivial_h1_audit(THETA, random_allowable(THETA, seed=1))
    assert rep["kernel_order"] == 1
    images = {np.array(M).tobytes() for M in rep["h1_images"]}
    assert np.eye(2, dtype=np.int64).tobytes() in images


@pytest.mark.parametrize("name", NAMES)
def test_straightening_only_adds_symmetry(name):
    B = BLOWUPS[name]
    for seed in range(5):
        S = random_allowable(B, seed=seed)
        before = set(cubical_isometries(B, S))
        after = set(cubical_isometries(B, straighten(B, S, 1.0)))
        assert before <= after


@pytest.mark.parametrize("B, center, x0", [
    (BLOWUPS["P3 blowup"], ("b",), (2, 3)),
    (BLOWUPS["K3 salvetti"], ("a", "b", "c"), (1,)),
    (THETA, (), (2, 3)),
])
def test_central_decomposition(B, center, x0):
    D = central_decomposition(B)
    assert D.center == center and D.X0_f_vector() == x0 and D.certified


def test_restriction_examples():
    B = BLOWUPS["P3 blowup"]
    T = maximal_torus(B, ("a", "b"))
    r = restriction_to_torus(B, None, identity_isometry(B), T)
    assert r.preserved and r.shift == (0, 0) and r.central_only
    swap = next(g for g in cubical_isometries(ROSE) if g.sigma == (1, 0))
    with pytest.raises(ValueError):
        restriction_to_torus(ROSE, None, swap, maximal_torus(ROSE, ("a",)))


def test_every_trivial_h1_isometry_fixes_tori():
    B = BLOWUPS["P3 blowup"]
    eye = np.eye(3, dtype=np.int64)
    for seed in range(5):
        S = random_allowable(B, seed=seed)
        for g in cubical_isometries(B, S):
            if np.array_equal(h1_action(B, g), eye):
                for T in all_maximal_tori(B):
                    r = restriction_to_torus(B, S, g, T)
                    assert r.preserved and not any(r.shift)
