"""The small named graphs used throughout the tests and examples."""
from .graph import DefiningGraph

E2 = DefiningGraph.from_lists("ab", [("a", "b")])
D2 = DefiningGraph.from_lists("ab", [])
P3 = DefiningGraph.from_lists("abc", [("a", "b"), ("b", "c")])
K3 = DefiningGraph.from_lists("abc", [("a", "b"), ("b", "c"), ("a", "c")])
C4 = DefiningGraph.from_lists("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
F3 = DefiningGraph.from_lists(["a", "b", "w"], [("a", "b")])

FIXTURES = {"E2": E2, "D2": D2, "P3": P3, "K3": K3, "C4": C4, "F3": F3}


def fixture_collections() -> dict[str, tuple]:
    """Named (graph, collection) pairs: the Salvetti complexes and the small blowups."""
    from .partitions import enumerate_partitions, make_partition

    return {
        "E2 salvetti": (E2, ()),
        "D2 rose": (D2, ()),
        "D2 theta": (D2, (enumerate_partitions(D2)[0],)),
        "P3 salvetti": (P3, ()),
        "P3 blowup": (P3, (enumerate_partitions(P3)[0],)),
        "K3 salvetti": (K3, ()),
        "C4 salvetti": (C4, ()),
        "F3 salvetti": (F3, ()),
        "F3 blowup": (F3, (make_partition(F3, ["b", "w"], ["b^-1", "w^-1"]),)),
    }


def fixture_blowups() -> dict:
    from .blowup import build_blowup

    return {name: build_blowup(G, Pi) for name, (G, Pi) in fixture_collections().items()}
