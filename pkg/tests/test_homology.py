import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import invariant_factors

from raagcx.blowup import build_blowup, salvetti
from raagcx.fixtures import D2, K3, P3
from raagcx.homology import acyclic_certificate, homology, is_connected, smith_diagonal
from raagcx.partitions import make_partition

matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_smith_against_sympy(rows):
    expected = [abs(int(x)) for x in invariant_factors(sympy.Matrix(rows), domain=sympy.ZZ) if x != 0]
    got = smith_diagonal(rows)
    assert got == expected
    assert all(b % a == 0 for a, b in zip(got, got[1:]))


@pytest.mark.parametrize("rows, expected", [
    ([[2, 0], [0, 3]], [1, 6]),
    ([[0, 0], [0, 0]], []),
    ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], [2, 6, 12]),
])
def test_smith_examples(rows, expected):
    assert smith_diagonal(rows) == expected


@pytest.mark.parametrize("B, ranks", [
    (salvetti(D2), [1, 2]),
    (salvetti(K3), [1, 3, 3, 1]),
    (build_blowup(P3, (make_partition(P3, ["a", "c"], ["a^-1", "c^-1"]),)), [1, 3, 2]),
])
def test_homology_ranks(B, ranks):
    H = homology(B, list(B.all_cells()))
    assert [r for r, _ in H] == ranks
    assert is_connected(B, list(B.all_cells()))


def test_acyclic_certificate():
    B = build_blowup(P3, (make_partition(P3, ["a", "c"], ["a^-1", "c^-1"]),))
    (eP,) = B.edges_with_label(B.label_of(B.Pi[0]))
    assert acyclic_certificate(B, list(B.cells[0]) + [eP])
    assert not acyclic_certificate(B, list(B.cells[0]))  # two points
    (ea,) = B.edges_with_label(B.label_of("a"))
    assert not acyclic_certificate(B, list(B.cells[0]) + [eP, ea])  # a circle
