from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from raagcx.fixtures import D2, E2, F3, K3, P3, FIXTURES
from raagcx.graph import components_minus_star, small_graphs
from raagcx.partitions import PartitionError, enumerate_partitions, make_partition, sing_and_max
from raagcx.words import (compose, endomorphism, identity, inverse, is_identity, ls_generators,
                          normal_form, parse_word, partial_conjugation, reduce_word, transvection,
                          verify_relators, whitehead_automorphism, word_str, words_equal)


def W(text):
    return parse_word(text)


@pytest.mark.parametrize("G, word, expected", [
    (E2, "a b a^-1 b^-1", ""),
    (D2, "a b a^-1 b^-1", "a b a^-1 b^-1"),
    (P3, "b c b^-1", "c"),
])
def test_normal_form_examples(G, word, expected):
    assert normal_form(G, W(word)) == W(expected)


def test_parse_unicode_inverse():
    assert W("a⁻¹ b") == (("a", -1), ("b", 1))
    assert word_str(W("a^-1 b")) == "a^-1 b"


def letters(G):
    return st.tuples(st.sampled_from(G.vertices), st.sampled_from([1, -1]))


def words(G, max_size=12):
    return st.lists(letters(G), max_size=max_size).map(tuple)


def _free_reduce(w):
    out = []
    for x in w:
        if out and out[-1] == (x[0], -x[1]):
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@given(words(D2))
def test_free_group_oracle(w):
    assert normal_form(D2, w) == _free_reduce(w)


@given(words(K3))
def test_abelian_oracle(w):
    exps = Counter()
    for v, s in w:
        exps[v] += s
    nf = normal_form(K3, w)
    assert Counter(v for v, _ in nf) == Counter({v: abs(e) for v, e in exps.items() if e})
    assert all(s == (1 if exps[v] > 0 else -1) for v, s in nf)


@pytest.mark.parametrize("name", sorted(FIXTURES))
@settings(max_examples=60)
@given(data=st.data())
def test_normal_form_properties(name, data):
    G = FIXTURES[name]
    w = data.draw(words(G))
    nf = normal_form(G, w)
    assert normal_form(G, nf) == nf
    assert normal_form(G, w + inverse(w)) == ()
    # random commuting swaps and inserted cancelling pairs do not change the normal form
    v = list(w)
    for _ in range(data.draw(st.integers(0, 20))):
        if len(v) < 2:
            break
        i = data.draw(st.integers(0, len(v) - 2))
        if G.adjacent(v[i][0], v[i + 1][0]):
            v[i], v[i + 1] = v[i + 1], v[i]
    x = data.draw(letters(G))
    k = data.draw(st.integers(0, len(v)))
    v[k:k] = [x, (x[0], -x[1])]
    assert normal_form(G, v) == nf
    assert len(reduce_word(G, w)) == len(nf)


@pytest.mark.parametrize("G, phi, word, expected", [
    (P3, partial_conjugation(P3, "a", ["c"]), "c", "a c a^-1"),
    (P3, endomorphism(P3, {"b": "b^-1"}), "b b", "b^-1 b^-1"),
])
def test_apply_examples(G, phi, word, expected):
    assert phi(G, W(word)) == normal_form(G, W(expected))


def test_identity_applies_normal_form():
    w = W("b c b^-1 a")
    assert identity(P3)(P3, w) == normal_form(P3, w)


def test_verify_relators_examples():
    assert verify_relators(P3, partial_conjugation(P3, "a", ["c"]))
    # b is central in P3, so a -> a c is still a homomorphism; b -> a c is not
    assert verify_relators(P3, endomorphism(P3, {"a": "a c"}))
    assert not verify_relators(P3, endomorphism(P3, {"b": "a c"}))
    assert verify_relators(P3, identity(P3))


def test_ls_generator_examples():
    p3 = {phi.name: phi for phi in ls_generators(P3)}
    assert p3["phi_b,a"].images["a"] == W("b a") and p3["phi_b,a"].tag == "twist"
    d2 = {phi.name: phi for phi in ls_generators(D2)}
    assert d2["phi_a,b"].images["b"] == W("a b") and d2["phi_a,b"].tag == "fold"
    assert all(phi.tag == "twist" for phi in ls_generators(K3) if phi.kind == "transvection")
    with pytest.raises(ValueError):
        transvection(P3, "a", "b")


@pytest.mark.parametrize("G", small_graphs(4), ids=repr)
def test_generators_are_automorphisms(G):
    for phi in ls_generators(G):
        assert verify_relators(G, phi), phi.name
        assert is_identity(G, compose(G, phi, phi.inverse)), phi.name
        assert is_identity(G, compose(G, phi.inverse, phi)), phi.name


@pytest.mark.parametrize("G", small_graphs(4), ids=repr)
def test_whitehead_automorphisms(G):
    for P in enumerate_partitions(G):
        sing, mx = sing_and_max(G, P)
        for m in mx:
            phi = whitehead_automorphism(G, P, m)
            assert verify_relators(G, phi)
            assert is_identity(G, compose(G, phi, phi))
        for m in sing - mx:
            with pytest.raises(PartitionError):
                whitehead_automorphism(G, P, m)


@pytest.mark.parametrize("G", small_graphs(4), ids=repr)
def test_partial_conjugations_multiply_to_conjugation(G):
    for v in G.vertices:
        prod = identity(G)
        for C in components_minus_star(G, v):
            prod = compose(G, partial_conjugation(G, v, C), prod)
        for g in G.vertices:
            assert words_equal(G, prod.images[g], ((v, 1), (g, 1), (v, -1)))


@pytest.mark.parametrize("G, plus, minus, m, expected", [
    (D2, "a b", "a^-1 b^-1", "a", {"a": "a^-1", "b": "b a^-1"}),
    (P3, "a c", "a^-1 c^-1", "a", {"a": "a^-1", "c": "c a^-1", "b": "b"}),
    (F3, "b w", "b^-1 w^-1", "b", {"b": "b^-1", "w": "w b^-1", "a": "a"}),
])
def test_whitehead_examples(G, plus, minus, m, expected):
    P = make_partition(G, W(plus), W(minus))
    phi = whitehead_automorphism(G, P, m)
    for v, img in expected.items():
        assert words_equal(G, phi.images[v], W(img))
