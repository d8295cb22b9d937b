"""Amalgamated products and HNN extensions with normal-form reduction.

Conjugation convention for HNN extensions: ``t * h_prime_gens[i] * t^-1 ==
h_gens[i]``.  A pinch is therefore ``t g t^-1`` with ``g`` in ``H'`` or
``t^-1 g t`` with ``g`` in ``H``.  Swapping the convention swaps the two
pinch patterns.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .oracles import FactorOracle, OracleUnknown, Verdict, factor_oracle
from .presentations import Presentation
from .stallings import expand_symbols
from .words import Generator, Word, concat, format_word, invert

__all__ = [
    "AmalgamData",
    "HNNData",
    "AmalgamNormalForm",
    "HNNNormalForm",
    "britton_reduce",
    "amalgam_normal_form",
    "word_problem",
    "default_oracles",
    "find_pinches",
    "H",
    "H_PRIME",
]

H = "H"
H_PRIME = "H'"


@dataclass(frozen=True)
class AmalgamData:
    A: Presentation
    B: Presentation
    h_in_A: tuple = ()
    h_in_B: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "h_in_A", tuple(self.h_in_A))
        object.__setattr__(self, "h_in_B", tuple(self.h_in_B))
        if len(self.h_in_A) != len(self.h_in_B):
            raise ValueError("edge generator lists must have equal length")
        if set(self.A.alphabet) & set(self.B.alphabet):
            raise ValueError("factor alphabets must be disjoint")
        for h in self.h_in_A:
            if not h.generators() <= set(self.A.alphabet):
                raise ValueError(f"edge generator {h} is not a word over A")
        for h in self.h_in_B:
            if not h.generators() <= set(self.B.alphabet):
                raise ValueError(f"edge generator {h} is not a word over B")

    @property
    def alphabet(self) -> tuple:
        return self.A.alphabet + self.B.alphabet

    def factor_of(self, g: Generator) -> str:
        if g in self.A.alphabet:
            return "A"
        if g in self.B.alphabet:
            return "B"
        raise ValueError(f"generator {g} belongs to neither factor")

    def presentation(self) -> Presentation:
        glue = [concat(a, invert(b)) for a, b in zip(self.h_in_A, self.h_in_B)]
        return Presentation(self.alphabet, self.A.relators + self.B.relators + tuple(glue))


@dataclass(frozen=True)
class HNNData:
    A: Presentation
    stable: Generator
    h_gens: tuple = ()
    h_prime_gens: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "h_gens", tuple(self.h_gens))
        object.__setattr__(self, "h_prime_gens", tuple(self.h_prime_gens))
        if len(self.h_gens) != len(self.h_prime_gens):
            raise ValueError("associated subgroup generator lists must have equal length")
        if self.stable in self.A.alphabet:
            raise ValueError("stable letter must be fresh")
        for h in self.h_gens + self.h_prime_gens:
            if not h.generators() <= set(self.A.alphabet):
                raise ValueError(f"associated generator {h} is not a word over the base")

    @property
    def alphabet(self) -> tuple:
        return self.A.alphabet + (self.stable,)

    def presentation(self) -> Presentation:
        t = Word.of(self.stable)
        glue = [t * hp * invert(t) * invert(h) for h, hp in zip(self.h_gens, self.h_prime_gens)]
        return Presentation(self.alphabet, self.A.relators + tuple(glue))


@dataclass(frozen=True)
class AmalgamNormalForm:
    """``expand(head) * syllables[0] * syllables[1] * ...``; syllables are ``(factor, rep)``."""

    head: Word
    syllables: tuple = ()
    canonical: bool = True

    def is_identity_form(self) -> bool:
        return not self.head and not self.syllables

    def to_word(self, am: AmalgamData) -> Word:
        out = expand_symbols(self.head, am.h_in_A)
        for _, s in self.syllables:
            out = concat(out, s)
        return out

    def __str__(self) -> str:
        body = " | ".join(f"{f}:{format_word(s)}" for f, s in self.syllables)
        return f"[{format_word(self.head)}] {body}".rstrip()


@dataclass(frozen=True)
class HNNNormalForm:
    """``prefix * t^e1 * g1 * t^e2 * g2 ...``; syllables are ``(e_i, g_i)``."""

    prefix: Word
    syllables: tuple = ()
    canonical: bool = True
    stable: Optional[Generator] = field(default=None, compare=False)

    def stable_count(self) -> int:
        return len(self.syllables)

    def to_word(self, stable: Optional[Generator] = None) -> Word:
        t = stable or self.stable
        out = self.prefix
        for e, g in self.syllables:
            out = concat(concat(out, Word.of(t, e)), g)
        return out

    def __str__(self) -> str:
        return format_word(self.to_word())


def default_oracles(split, **options):
    """Oracles chosen by factor shape; one for an HNN base, two for an amalgam."""
    if isinstance(split, HNNData):
        return (factor_oracle(split.A, {H: split.h_gens, H_PRIME: split.h_prime_gens}, **options),)
    return (
        factor_oracle(split.A, {H: split.h_in_A}, **options),
        factor_oracle(split.B, {H: split.h_in_B}, **options),
    )


def _hnn_segments(w: Word, stable: Generator):
    seg: list = []
    for x in w:
        if x.generator == stable:
            yield Word._trusted(tuple(seg))
            yield x.sign
            seg = []
        else:
            seg.append(x)
    yield Word._trusted(tuple(seg))


def britton_reduce(hnn: HNNData, w: Word, oracle: Optional[FactorOracle] = None) -> HNNNormalForm:
    """Remove pinches until none remain.  Undecided pinches are left in place
    and the result is flagged non-canonical."""
    if oracle is None:
        (oracle,) = default_oracles(hnn)
    gs = [Word()]
    ts: list = []
    canonical = True
    for item in _hnn_segments(w, hnn.stable):
        if isinstance(item, Word):
            gs[-1] = concat(gs[-1], item)
            continue
        e = item
        if ts and ts[-1] == -e:
            tag = H_PRIME if ts[-1] > 0 else H
            try:
                expr = oracle.subgroup_member(gs[-1], tag)
            except OracleUnknown:
                expr, canonical = None, False
            if expr is not None:
                image = hnn.h_gens if tag == H_PRIME else hnn.h_prime_gens
                ts.pop()
                gs.pop()
                gs[-1] = concat(gs[-1], expand_symbols(expr, image))
                continue
        ts.append(e)
        gs.append(Word())
    return HNNNormalForm(gs[0], tuple(zip(ts, gs[1:])), canonical, hnn.stable)


def find_pinches(hnn: HNNData, nf: HNNNormalForm, oracle: FactorOracle) -> list:
    """Indices ``i`` where syllables ``i, i+1`` bracket a pinch."""
    found = []
    for i in range(len(nf.syllables) - 1):
        (e1, g), (e2, _) = nf.syllables[i], nf.syllables[i + 1]
        if e1 == -e2:
            try:
                if oracle.subgroup_member(g, H_PRIME if e1 > 0 else H) is not None:
                    found.append(i)
            except OracleUnknown:
                pass
    return found


def _amalgam_syllables(am: AmalgamData, w: Word):
    out: list = []
    for x in w:
        f = am.factor_of(x.generator)
        if out and out[-1][0] == f:
            out[-1][1].append(x)
        else:
            out.append((f, [x]))
    return [(f, Word._trusted(tuple(s))) for f, s in out]


def amalgam_normal_form(
    am: AmalgamData,
    w: Word,
    oracle_a: Optional[FactorOracle] = None,
    oracle_b: Optional[FactorOracle] = None,
) -> AmalgamNormalForm:
    """Right-to-left coset rewriting: each syllable becomes the shortlex-least
    representative of its right ``H``-coset and the ``H`` part moves left."""
    if oracle_a is None or oracle_b is None:
        oracle_a, oracle_b = default_oracles(am)
    oracles = {"A": (oracle_a, am.h_in_A), "B": (oracle_b, am.h_in_B)}
    out: deque = deque()
    carry = Word()
    canonical = True
    for f, s in reversed(_amalgam_syllables(am, w)):
        oracle, hgens = oracles[f]
        x = concat(s, expand_symbols(carry, hgens))
        if out and out[0][0] == f:
            x = concat(x, out.popleft()[1])
        try:
            carry, rep = oracle.coset_rep(x, H)
        except OracleUnknown:
            canonical = False
            carry, rep = Word(), x
        if rep:
            out.appendleft((f, rep))
    return AmalgamNormalForm(carry, tuple(out), canonical)


def word_problem(split, w: Word, *oracles) -> Verdict:
    """Decide triviality in the splitting; ``UNKNOWN`` only when an oracle was."""
    if not oracles:
        oracles = default_oracles(split)
    if isinstance(split, HNNData):
        (oracle,) = oracles
        nf = britton_reduce(split, w, oracle)
        if nf.syllables:
            return Verdict.NONTRIVIAL if nf.canonical else Verdict.UNKNOWN
        return oracle.word_problem(nf.prefix)
    oracle_a, oracle_b = oracles
    nf = amalgam_normal_form(split, w, oracle_a, oracle_b)
    if nf.syllables:
        return Verdict.NONTRIVIAL if nf.canonical else Verdict.UNKNOWN
    return oracle_a.word_problem(expand_symbols(nf.head, split.h_in_A))
