import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from independent import A, B, all_reduced_words, subgroup_ball
from splitgroups.stallings import INFINITE, build_and_fold, expand_symbols, index, member, rank
from splitgroups.words import Word, concat
from strategies import words

W = Word.parse
AB = {A, B}

AGREEMENT_SUBGROUPS = [
    ["a b", "b a"],
    ["a b a^-1 b^-1"],
    ["a^3", "b^3", "a b"],
    ["a b^2", "b a^2"],
    ["a^2 b^-1", "b^2"],
]
FINITE_INDEX = [
    (["a^2", "b", "a b a^-1"], 2),
    (["a^2", "b^2", "a b"], 2),
    (["a^2", "a b a^-1", "b^2", "b a b^-1"], 3),
    (["a", "b"], 1),
    (["a^3", "b", "a b a^-1", "a^2 b a^-2"], 3),
]


def fold(gens, alphabet=AB, rng=None):
    return build_and_fold([W(g) for g in gens], alphabet, rng)


def test_single_loop():
    g = fold(["a"], {A})
    assert g.num_vertices == 1 and len(g.edges) == 1 and index(g) == 1


def test_a_squared_b():
    g = fold(["a^2", "b"])
    assert g.num_vertices == 2
    assert sorted((s, str(x), d) for s, x, d in g.edges) == [(0, "a", 1), (0, "b", 0), (1, "a", 0)]


def test_index_two_example():
    g = fold(["a^2", "b", "a b a^-1"])
    assert g.num_vertices == 2 and g.is_folded()
    for v in range(2):
        for x in AB:
            assert (v, x) in g.out and (v, x) in g.inc
    assert (rank(g), index(g)) == (3, 2)


@pytest.mark.parametrize(
    "gens, word, expected",
    [(["a^2", "b"], "a^2 b", True), (["a^2", "b"], "a", False), (["a^2", "b"], "1", True), (["a b"], "1", True)],
)
def test_member_examples(gens, word, expected):
    assert member(fold(gens), W(word)) is expected


def test_rank_index_examples():
    g = fold(["a"])
    assert (rank(g), index(g)) == (1, INFINITE)
    g = fold(["a", "b"])
    assert (rank(g), index(g)) == (2, 1)


def test_expression_and_coset_rep():
    gens = [W("a^2"), W("b"), W("a b a^-1")]
    g = build_and_fold(gens, AB)
    expr = g.express(W("a^2 b"))
    assert expr == W("h_0 h_1")
    assert expand_symbols(expr, gens) == W("a^2 b")
    h, rep = g.coset_rep(W("a^3 b"))
    assert rep == W("a")
    assert concat(expand_symbols(h, gens), rep) == W("a^3 b")


@pytest.mark.parametrize("gens", AGREEMENT_SUBGROUPS)
def test_member_agrees_with_enumeration(gens):
    g = fold(gens)
    members = subgroup_ball([W(x) for x in gens], 4, 6)
    for w in all_reduced_words(AB, 6):
        assert member(g, w) == (w in members), str(w)


@pytest.mark.parametrize("gens, k", FINITE_INDEX)
def test_nielsen_schreier_and_enumeration_soundness(gens, k):
    g = fold(gens)
    assert index(g) == k
    assert rank(g) - 1 == k * (len(g.alphabet) - 1)
    for w in subgroup_ball([W(x) for x in gens], 4, 6):
        assert member(g, w)


@pytest.mark.parametrize("gens", AGREEMENT_SUBGROUPS + [f for f, _ in FINITE_INDEX])
def test_fold_order_independence(gens):
    rng = random.Random(7)
    reference = fold(gens).canonical_form()
    for _ in range(100):
        assert fold(gens, rng=rng).canonical_form() == reference


gens_lists = st.lists(words([A, B], 6).filter(bool), min_size=1, max_size=3)


@settings(max_examples=60)
@given(gens_lists, words([A, B], 8))
def test_generators_are_members_and_expressions_expand(gens, w):
    g = build_and_fold(gens, AB)
    for i, h in enumerate(gens):
        assert g.express(h) is not None
    expr = g.express(w)
    if expr is not None:
        assert expand_symbols(expr, gens) == w
    h, rep = g.coset_rep(w)
    assert concat(expand_symbols(h, gens), rep) == w
    # the representative is the same for every element of the coset
    assert g.coset_rep(concat(gens[0], w))[1] == rep


@settings(max_examples=60)
@given(gens_lists)
def test_folded_core_invariants(gens):
    g = build_and_fold(gens, AB)
    assert g.is_folded()
    degree = {}
    for s, _, d in g.edges:
        degree[s] = degree.get(s, 0) + 1
        degree[d] = degree.get(d, 0) + 1
    assert all(degree.get(v, 0) >= 2 for v in range(1, g.num_vertices))
    idx = index(g)
    if idx != INFINITE:
        assert rank(g) - 1 == idx * (len(AB) - 1)
    assert rank(g) <= len(gens)


@settings(max_examples=40)
@given(gens_lists, st.randoms(use_true_random=False))
def test_random_fold_orders_agree(gens, rnd):
    reference = build_and_fold(gens, AB).canonical_form()
    assert build_and_fold(gens, AB, random.Random(rnd.random())).canonical_form() == reference


def test_dot_export():
    text = fold(["a^2", "b"]).to_dot()
    assert text.startswith("digraph subgroup {") and '0 -> 1 [label="a"];' in text
