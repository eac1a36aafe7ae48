import pytest

from raagcx.census import census, check_collection
from raagcx.fixtures import C4, D2, F3, K3, P3
from raagcx.graph import small_graphs
from raagcx.partitions import compatible_collections

# the two largest graphs are covered by the acceptance run
SMALL = [G for G in small_graphs(4) if len(compatible_collections(G)) <= 500]


@pytest.mark.parametrize("G", SMALL, ids=repr)
def test_census_clean(G):
    rep = census(G)
    assert rep["passed"], rep["failing"][:3]
    assert rep["complexes"] == rep["collections"] == len(compatible_collections(G))
    assert rep["euler_values"] == [rep["salvetti_euler"]]


@pytest.mark.parametrize("G, collections", [(K3, 1), (P3, 3), (D2, 3), (C4, 9), (F3, 9)])
def test_census_counts(G, collections):
    rep = census(G)
    assert rep["collections"] == collections and rep["passed"]


def test_k3_report():
    rep = census(K3)
    assert rep["euler_values"] == [0] and rep["complexes"] == 1


def test_collection_report_shape():
    Pi = compatible_collections(P3)[1]
    rep = check_collection(P3, Pi, 1).to_dict()
    assert rep["f_vector"] == [2, 5, 3] and rep["euler"] == 0 and rep["violations"] == []
