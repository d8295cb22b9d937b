import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from independent import A, B, T, bs12_matrices, klein_affine, prefix_sum_rewrite, random_word
from splitgroups.magnus import (
    BaseDescription,
    BaseKind,
    Hierarchy,
    OneRelatorSolver,
    PartialHierarchy,
    PreconditionError,
    StepKind,
    check_step,
    classify_base,
    hierarchy,
    moldavanskii_step,
    one_relator_wp,
    stabilize_step,
)
from splitgroups.oracles import Verdict
from splitgroups.presentations import OneRelatorPresentation, abelian_invariants
from splitgroups.presentations import parse_presentation as P
from splitgroups.words import Generator, Word, exponent_sum, format_word

W = Word.parse
KLEIN = P("gens: a b\nrel: a b a b^-1")
BS12 = P("gens: a t\nrel: t a t^-1 a^-2")
Z2 = P("gens: a b\nrel: a b a^-1 b^-1")
TREFOIL = P("gens: x y\nrel: x^2 y^-3")

CORPUS = {
    "klein": KLEIN,
    "bs12": BS12,
    "z2": Z2,
    "trefoil": TREFOIL,
    "bs23": P("gens: a t\nrel: t a^2 t^-1 a^-3"),
    "genus2": P("gens: a b c d\nrel: a b a^-1 b^-1 c d c^-1 d^-1"),
    "cyclic5": P("gens: a\nrel: a^5"),
    "z3_free": P("gens: a b\nrel: a^3"),
    "baumslag_gersten": P("gens: a b\nrel: b^-1 a^-1 b a b^-1 a b a^-2"),
    "positive": P("gens: a b\nrel: a b a b b"),
    "torus_35": P("gens: x y\nrel: x^3 y^-5"),
    "free": P("gens: a b"),
}


def one(p):
    return OneRelatorPresentation.from_presentation(p)


@pytest.mark.parametrize(
    "p, expected",
    [
        (P("gens: a\nrel: a^5"), BaseDescription(BaseKind.FREE_TIMES_FINITE_CYCLIC, 0, 5)),
        (P("gens: a b\nrel: a^3"), BaseDescription(BaseKind.FREE_TIMES_FINITE_CYCLIC, 1, 3)),
        (KLEIN, None),
        (P("gens: a b c\nrel: a b a^-1 c"), BaseDescription(BaseKind.FREE, 2)),
        (P("gens: a b"), BaseDescription(BaseKind.FREE, 2)),
    ],
)
def test_classify_base(p, expected):
    assert classify_base(p) == expected


@pytest.mark.parametrize(
    "p, t, relator, edges",
    [
        (KLEIN, B, "a_0 a_1", [("a_0", "a_1")]),
        (BS12, T, "a_1 a_0^-2", [("a_0", "a_1")]),
        (Z2, B, "a_0 a_1^-1", [("a_0", "a_1")]),
    ],
)
def test_moldavanskii_examples(p, t, relator, edges):
    step = moldavanskii_step(one(p), t)
    assert step.base.relator == W(relator)
    assert [(str(u), str(v)) for u, v in zip(step.edge_neg, step.edge_pos)] == edges
    assert all(v is not False for v in check_step(step).values())
    assert abelian_invariants(step.hnn_presentation()) == abelian_invariants(p)


def test_moldavanskii_requires_zero_exponent():
    with pytest.raises(PreconditionError):
        moldavanskii_step(one(KLEIN), A)


def _families(word):
    return [(x.generator.name, x.generator.subscript, x.sign) for x in word]


@pytest.mark.parametrize("name", ["klein", "bs12", "z2", "bs23", "genus2", "baumslag_gersten"])
def test_rewriting_matches_prefix_sum_scan(name):
    p = one(CORPUS[name])
    zero = [g for g in p.alphabet if exponent_sum(p.relator, g) == 0 and g in p.relator.generators()]
    for t in zero:
        step = moldavanskii_step(p, t)
        assert _families(step.base.relator) == prefix_sum_rewrite(p.relator, t)


def test_trefoil_stabilization():
    step = stabilize_step(one(TREFOIL))
    assert step.kind is StepKind.STABILIZED
    assert format_word(step.basis_change[Generator("x")]) == "c z^3"
    assert format_word(step.basis_change[Generator("y")]) == "d z^2"
    assert step.base.relator == W("c_0 c_3 d_4^-1 d_2^-1 d_0^-1")
    z = step.stable
    assert exponent_sum(step.rewritten_relator, z) == 0
    stabilized = P("gens: c d z\nrel: " + format_word(step.rewritten_relator))
    assert abelian_invariants(stabilized) == abelian_invariants(TREFOIL).plus_free(1)
    assert all(check_step(step).values())


@given(st.integers(-4, 4).filter(bool), st.integers(-4, 4).filter(bool))
def test_stabilization_exponent_identity(p, q):
    r = Word.of(A, p) * Word.of(B, q) * W("a b^-1")
    pres = one(P("gens: a b\nrel: " + format_word(r)))
    if any(exponent_sum(pres.relator, g) == 0 for g in (A, B)) or len(pres.relator.generators()) < 2:
        return
    step = stabilize_step(pres)
    assert exponent_sum(step.rewritten_relator, step.stable) == 0
    assert step.stable in step.rewritten_relator.generators()


def test_stabilization_preconditions():
    with pytest.raises(PreconditionError):
        stabilize_step(one(KLEIN))
    with pytest.raises(PreconditionError):
        stabilize_step(one(P("gens: a\nrel: a^3")))


@pytest.mark.parametrize(
    "name, kinds, base",
    [
        ("klein", ["MOLDAVANSKII"], "F1"),
        ("bs12", ["MOLDAVANSKII"], "F1"),
        ("z2", ["MOLDAVANSKII"], "F1"),
        ("trefoil", ["STABILIZED"], "F8"),
        ("cyclic5", [], "F0 * Z/5"),
        ("z3_free", [], "F1 * Z/3"),
        ("genus2", ["MOLDAVANSKII"], "F3"),
    ],
)
def test_hierarchy_certificates(name, kinds, base):
    h = hierarchy(CORPUS[name])
    assert isinstance(h, Hierarchy)
    assert [s.kind.name for s in h.steps] == kinds
    assert str(h.base_classification) == base


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corpus_terminates_and_checks(name):
    h = hierarchy(CORPUS[name], max_depth=8)
    assert h.complete
    for step in h.steps:
        checks = check_step(step, max_relator_length=12)
        assert all(v is not False for v in checks.values()), checks


def test_depth_limit_gives_partial_hierarchy():
    # the stabilizing substitution never shortens this relator
    fig8 = P("gens: a b\nrel: a b^-1 a^-1 b a^-1 b a b^-1 a^-1 b")
    h = hierarchy(fig8, max_depth=3)
    assert isinstance(h, PartialHierarchy) and not h.complete
    assert len(h.steps) == 3 and "depth" in h.reason
    assert hierarchy(TREFOIL, max_depth=0).complete is False


@pytest.mark.parametrize(
    "p, word, expected",
    [
        (KLEIN, "a b a b^-1", Verdict.TRIVIAL),
        (KLEIN, "b a b^-1 a", Verdict.TRIVIAL),
        (KLEIN, "a^2", Verdict.NONTRIVIAL),
        (KLEIN, "b^2 a b^-2 a", Verdict.NONTRIVIAL),
        (BS12, "t^-1 a^2 t a^-1", Verdict.TRIVIAL),
        (BS12, "t^-1 a t a^-1", Verdict.NONTRIVIAL),
        (TREFOIL, "x^2 y x^-2 y^-1", Verdict.TRIVIAL),
        (TREFOIL, "x y x^-1 y^-1", Verdict.NONTRIVIAL),
    ],
)
def test_one_relator_examples(p, word, expected):
    assert one_relator_wp(p, W(word)) is expected


@pytest.mark.parametrize("p, rep, alphabet", [(KLEIN, klein_affine, [A, B]), (BS12, bs12_matrices, [A, T])])
def test_one_relator_random_agreement(p, rep, alphabet):
    rng = random.Random(5)
    solver = OneRelatorSolver(max_depth=5)
    oracle = rep()
    for _ in range(150):
        w = random_word(rng, alphabet, 10)
        verdict = solver.word_problem(p, w)
        assert verdict is not Verdict.UNKNOWN
        assert (verdict is Verdict.TRIVIAL) == oracle.is_trivial(w)


@settings(max_examples=60)
@given(st.lists(st.sampled_from([W("a"), W("b"), W("a^-1"), W("b^-1")]), max_size=6))
def test_conjugates_of_relator_are_trivial(parts):
    u = Word([x for p in parts for x in p])
    w = u * W("a b a b^-1") * ~u
    assert one_relator_wp(KLEIN, w) is Verdict.TRIVIAL


def test_rewrite_preserves_stable_exponent():
    step = moldavanskii_step(one(BS12), T)
    for word in ["a", "t", "t a^3 t^-2", "a^-1 t^2 a"]:
        w = W(word)
        image = step.rewrite(w)
        assert exponent_sum(image, T) == exponent_sum(w, T)
        assert image.generators() <= set(step.hnn_base.alphabet) | {T}
    assert step.rewrite(W("a")) == W("a_0")
