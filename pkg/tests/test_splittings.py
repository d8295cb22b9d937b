import random

import pytest
from hypothesis import given, settings

from independent import A, T, X, Y, all_reduced_words, bs12_matrices, random_word, trefoil_form
from splitgroups.oracles import FiniteBallOracle, Verdict
from splitgroups.presentations import parse_presentation as P
from splitgroups.splittings import (
    H,
    H_PRIME,
    AmalgamData,
    HNNData,
    amalgam_normal_form,
    britton_reduce,
    default_oracles,
    find_pinches,
    word_problem,
)
from splitgroups.words import Generator, Word, concat, invert
from strategies import words

W = Word.parse

BS12 = HNNData(P("gens: a"), T, [W("a^2")], [W("a")])
TREFOIL = AmalgamData(P("gens: x"), P("gens: y"), [W("x^2")], [W("y^3")])
Z2_Z2 = AmalgamData(P("gens: a b\nrel: a b a^-1 b^-1"), P("gens: c d\nrel: c d c^-1 d^-1"), [W("a")], [W("c")])


def test_splitting_validation():
    with pytest.raises(ValueError):
        AmalgamData(P("gens: x"), P("gens: x"))
    with pytest.raises(ValueError):
        AmalgamData(P("gens: x"), P("gens: y"), [W("x")], [])
    with pytest.raises(ValueError):
        HNNData(P("gens: a"), Generator("a"))
    with pytest.raises(ValueError):
        HNNData(P("gens: a"), T, [W("b")], [W("a")])


def test_presentations_of_splittings():
    assert BS12.presentation() == P("gens: a t\nrel: t a t^-1 a^-2")
    assert TREFOIL.presentation() == P("gens: x y\nrel: x^2 y^-3")


@pytest.mark.parametrize(
    "word, expected",
    [("t a t^-1 a^-2", "1"), ("t^-1 a^2 t", "a"), ("t^-1 a t", "t^-1 a t"), ("t a^3 t^-1", "a^6"),
     ("t^-2 a^4 t^2", "a")],
)
def test_britton_examples(word, expected):
    nf = britton_reduce(BS12, W(word))
    assert nf.to_word() == W(expected) and nf.canonical


def test_britton_output_is_pinch_free():
    (oracle,) = default_oracles(BS12)
    nf = britton_reduce(BS12, W("t^-1 a t a t^-1 a^2 t"), oracle)
    assert find_pinches(BS12, nf, oracle) == []


@settings(max_examples=200)
@given(words([A, T], 12))
def test_britton_matches_matrix_oracle(w):
    (oracle,) = default_oracles(BS12)
    nf = britton_reduce(BS12, w, oracle)
    rep = bs12_matrices()
    assert rep.evaluate(nf.to_word()) == rep.evaluate(w)
    assert find_pinches(BS12, nf, oracle) == []
    assert (word_problem(BS12, w, oracle) is Verdict.TRIVIAL) == rep.is_trivial(w)


@pytest.mark.parametrize(
    "word, head, syllables",
    [("x^2 y^-3", "1", []), ("x y", "1", [("A", "x"), ("B", "y")]), ("x^3 y^-3", "1", [("A", "x")]),
     ("x^3", "h_0", [("A", "x")]), ("y^2", "h_0", [("B", "y^-1")]), ("x^-1", "h_0^-1", [("A", "x")])],
)
def test_amalgam_examples(word, head, syllables):
    nf = amalgam_normal_form(TREFOIL, W(word))
    assert nf.head == W(head)
    assert [(f, str(s)) for f, s in nf.syllables] == syllables
    assert nf.to_word(TREFOIL) == W(word) or word_problem(TREFOIL, concat(nf.to_word(TREFOIL), invert(W(word)))) is Verdict.TRIVIAL


@pytest.mark.parametrize(
    "word, expected",
    [("x^2 y^-3", Verdict.TRIVIAL), ("x y", Verdict.NONTRIVIAL), ("x^2 y x^-2 y^-1", Verdict.TRIVIAL)],
)
def test_trefoil_word_problem(word, expected):
    assert word_problem(TREFOIL, W(word)) is expected


def test_bs12_word_problem():
    assert word_problem(BS12, W("t a t^-1 a^-2")) is Verdict.TRIVIAL
    assert word_problem(BS12, W("t a t^-1 a^-1")) is Verdict.NONTRIVIAL


def test_amalgam_against_rewriting_oracle_length_6():
    oa, ob = default_oracles(TREFOIL)
    for w in all_reduced_words([X, Y], 6):
        nf = amalgam_normal_form(TREFOIL, w, oa, ob)
        k, syl = trefoil_form(w)
        assert sum(x.sign for x in nf.head) == k
        assert tuple((f, s[0].sign) for f, s in nf.syllables) == syl


@settings(max_examples=60)
@given(words([Generator(n) for n in "abcd"], 8))
def test_z2_amalgam_normal_form_is_an_invariant(w):
    oa, ob = default_oracles(Z2_Z2)
    nf = amalgam_normal_form(Z2_Z2, w, oa, ob)
    assert word_problem(Z2_Z2, concat(nf.to_word(Z2_Z2), invert(w)), oa, ob) is Verdict.TRIVIAL
    # commuting letters inside a factor does not change the form
    swapped = Word(list(w) + [x for x in W("a b a^-1 b^-1")])
    assert amalgam_normal_form(Z2_Z2, swapped, oa, ob) == nf
    assert all(f != g for (f, _), (g, _) in zip(nf.syllables, nf.syllables[1:]))


def test_undecided_pinch_marks_noncanonical():
    # a one-relator base where membership cannot be settled by the tiny search
    base = P("gens: a b\nrel: a b a b^-1 a^2 b^-2")
    hnn = HNNData(base, T, [W("a")], [W("b^3 a b^-1")])
    oracle = FiniteBallOracle(base, {H: hnn.h_gens, H_PRIME: hnn.h_prime_gens}, max_length=4, budget=5)
    nf = britton_reduce(hnn, W("t a^2 b^5 a b t^-1"), oracle)
    assert not nf.canonical
    assert nf.to_word() == W("t a^2 b^5 a b t^-1")
    assert word_problem(hnn, W("t a^2 b^5 a b t^-1"), oracle) is Verdict.UNKNOWN


def test_random_bs12_words_seeded():
    rng = random.Random(11)
    rep = bs12_matrices()
    (oracle,) = default_oracles(BS12)
    for _ in range(200):
        w = random_word(rng, [A, T], 12)
        assert rep.evaluate(britton_reduce(BS12, w, oracle).to_word()) == rep.evaluate(w)
