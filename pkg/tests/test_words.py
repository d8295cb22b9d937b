import pytest
from hypothesis import given
from hypothesis import strategies as st

from splitgroups.words import (
    Generator,
    Letter,
    Word,
    WordSyntaxError,
    concat,
    cyclic_reduce,
    exponent_sum,
    format_word,
    free_reduce,
    invert,
    letter_key,
    parse_word,
    shortlex_key,
)
from strategies import GENS, raw_words, words

a, b, x, y = (Generator(n) for n in "abxy")
W = Word.parse


@pytest.mark.parametrize(
    "text, expected",
    [("a a^-1 b", "b"), ("1", "1"), ("a b b^-1 a", "a^2"), ("a^3 a^-3", "1"), ("a_2 a_2^-1 b_-1", "b_-1")],
)
def test_free_reduce(text, expected):
    assert format_word(free_reduce(parse_word(text).letters)) == expected


@pytest.mark.parametrize(
    "text, core, conj",
    [("a b a^-1", "b", "a"), ("b", "b", "1"), ("a b a b^-1", "a b a b^-1", "1"), ("a b c b^-1 a^-1", "c", "a b")],
)
def test_cyclic_reduce(text, core, conj):
    c, k = cyclic_reduce(W(text))
    assert (format_word(c), format_word(k)) == (core, conj)


@pytest.mark.parametrize(
    "text, g, expected",
    [("a b a b^-1", a, 2), ("a b a b^-1", b, 0), ("x^2 y^-3", y, -3)],
)
def test_exponent_sum(text, g, expected):
    assert exponent_sum(W(text), g) == expected


def test_invert_and_concat_examples():
    assert invert(W("a b^-1")) == W("b a^-1")
    assert concat(W("a b"), W("b^-1 c")) == W("a c")


def test_letter_order_puts_generator_before_inverse():
    assert letter_key(Letter(a, 1)) < letter_key(Letter(a, -1)) < letter_key(Letter(b, 1))
    assert Generator("a") < Generator("a", 0) < Generator("a", 1) < Generator("b")
    assert Generator("a", -1) < Generator("a", 0)


def test_shortlex_orders_by_length_first():
    assert shortlex_key(W("b").letters) < shortlex_key(W("a a").letters)
    assert shortlex_key(W("a b").letters) < shortlex_key(W("a b^-1").letters)


def test_subscripts_and_powers_round_trip():
    w = W("a_-1^2 b_3^-1 t")
    assert format_word(w) == "a_-1^2 b_3^-1 t"
    assert w[0].generator == Generator("a", -1)


@pytest.mark.parametrize("text, column", [("a ^2", 3), ("a b$", 3), ("a_x", 1)])
def test_parse_errors_carry_column(text, column):
    with pytest.raises(WordSyntaxError) as err:
        parse_word(text)
    assert err.value.column == column


def test_unknown_generator_rejected_with_alphabet():
    with pytest.raises(WordSyntaxError):
        parse_word("a c", [a, b])


def test_power_operator():
    assert W("a b") ** 2 == W("a b a b")
    assert W("a b") ** -1 == W("b^-1 a^-1")
    assert W("a") ** 0 == Word()


@given(raw_words())
def test_reduction_is_idempotent_and_reduced(letters):
    w = Word(letters)
    assert Word(w.letters) == w
    assert all(not (p.generator == q.generator and p.sign == -q.sign) for p, q in zip(w.letters, w.letters[1:]))


@given(words(), words(), words())
def test_concat_is_associative(u, v, w):
    assert concat(concat(u, v), w) == concat(u, concat(v, w))


@given(words())
def test_inverse_law(w):
    assert concat(w, invert(w)) == Word()
    assert concat(invert(w), w) == Word()
    assert invert(invert(w)) == w


@given(words())
def test_cyclic_reduce_conjugates_back(w):
    core, conj = cyclic_reduce(w)
    assert concat(concat(conj, core), invert(conj)) == w
    if len(core) > 1:
        assert not (core[0].generator == core[-1].generator and core[0].sign == -core[-1].sign)


@given(words(), words())
def test_exponent_sum_is_additive(u, v):
    for g in GENS:
        assert exponent_sum(concat(u, v), g) == exponent_sum(u, g) + exponent_sum(v, g)


@given(words())
def test_format_parse_round_trip(w):
    assert parse_word(format_word(w)) == w


@given(st.lists(st.sampled_from(GENS), min_size=1, max_size=4), words())
def test_substitute_identity_images(gens, w):
    assert w.substitute({g: Word.of(g) for g in gens}) == w
