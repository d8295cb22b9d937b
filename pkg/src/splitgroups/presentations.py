"""Finite presentations, abelianization, and the free-factor transformer."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from .lattice import smith_normal_form, solve_in_span
from .words import (
    Generator,
    Word,
    WordSyntaxError,
    cyclic_reduce,
    exponent_sum,
    format_word,
    invert,
    parse_word,
    shortlex_key,
)

__all__ = [
    "Presentation",
    "OneRelatorPresentation",
    "AbelianInvariants",
    "AbelianImage",
    "parse_presentation",
    "format_presentation",
    "add_free_factor",
    "abelian_invariants",
    "relation_matrix",
    "fresh_generator",
]


def _cyclic_class_key(w: Word):
    best = None
    for v in (w, invert(w)):
        s = v.letters
        for i in range(len(s)):
            k = shortlex_key(s[i:] + s[:i])
            if best is None or k < best:
                best = k
    return best


@dataclass(frozen=True)
class Presentation:
    alphabet: tuple = ()
    relators: tuple = ()

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        if len(set(alphabet)) != len(alphabet):
            raise ValueError("duplicate generator in alphabet")
        known = set(alphabet)
        rels, seen = [], set()
        for r in self.relators:
            r = r if isinstance(r, Word) else Word(r)
            missing = r.generators() - known
            if missing:
                raise ValueError(f"relator uses unknown generator {sorted(missing)[0]}")
            core, _ = cyclic_reduce(r)
            if not core:
                continue
            key = _cyclic_class_key(core)
            if key not in seen:
                seen.add(key)
                rels.append(core)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "relators", tuple(rels))

    @property
    def rank(self) -> int:
        return len(self.alphabet)

    def __str__(self) -> str:
        gens = ", ".join(map(str, self.alphabet))
        rels = ", ".join(format_word(r) for r in self.relators)
        return f"< {gens} | {rels} >"


@dataclass(frozen=True)
class OneRelatorPresentation(Presentation):
    def __post_init__(self):
        super().__post_init__()
        if len(self.relators) != 1:
            raise ValueError("one-relator presentation needs exactly one nonempty relator")

    @property
    def relator(self) -> Word:
        return self.relators[0]

    @classmethod
    def from_presentation(cls, p: Presentation) -> "OneRelatorPresentation":
        return cls(p.alphabet, p.relators)


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.free_rank < 0 or any(d < 2 for d in self.torsion):
            raise ValueError("invalid abelian invariants")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError("torsion coefficients must form a divisibility chain")

    def plus_free(self, k: int = 1) -> "AbelianInvariants":
        return AbelianInvariants(self.free_rank + k, self.torsion)

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def relation_matrix(p: Presentation):
    return [[exponent_sum(r, g) for g in p.alphabet] for r in p.relators]


def abelian_invariants(p: Presentation) -> AbelianInvariants:
    M = relation_matrix(p)
    if not M:
        return AbelianInvariants(p.rank, ())
    diag, _, _ = smith_normal_form(M)
    return AbelianInvariants(p.rank - len(diag), tuple(d for d in diag if d > 1))


class AbelianImage:
    """Coordinates of words in the abelianization ``Z^n / rowspace(M)``."""

    def __init__(self, p: Presentation):
        self.alphabet = p.alphabet
        self._index = {g: i for i, g in enumerate(p.alphabet)}
        M = relation_matrix(p)
        n = p.rank
        if M:
            self.diag, _, self.V = smith_normal_form(M)
        else:
            self.diag, self.V = [], [[int(i == j) for j in range(n)] for i in range(n)]
        self.relation_rows = M

    def vector(self, w: Iterable) -> list:
        v = [0] * len(self.alphabet)
        for x in w:
            v[self._index[x.generator]] += x.sign
        return v

    def key(self, w) -> tuple:
        v = self.vector(w)
        n = len(v)
        y = [sum(v[i] * self.V[i][j] for i in range(n)) for j in range(n)]
        return tuple(y[j] % self.diag[j] if j < len(self.diag) else y[j] for j in range(n))

    def is_zero(self, w) -> bool:
        return not any(self.key(w))

    def in_image_of(self, w, subgroup_gens) -> bool:
        """Whether ``w`` maps into the image of ``<subgroup_gens>``."""
        rows = list(self.relation_rows) + [self.vector(h) for h in subgroup_gens]
        return solve_in_span(rows, self.vector(w)) is not None


def fresh_generator(taken, stem: str = "z") -> Generator:
    taken_names = {g.name for g in taken}
    if stem not in taken_names:
        return Generator(stem)
    i = 1
    while f"{stem}{i}" in taken_names:
        i += 1
    return Generator(f"{stem}{i}")


def add_free_factor(p: Presentation) -> Presentation:
    z = fresh_generator(p.alphabet)
    return Presentation(p.alphabet + (z,), p.relators)


_LINE_RE = re.compile(r"\s*([A-Za-z.]+)\s*:(.*)\Z")


def parse_presentation(text: str) -> Presentation:
    gens: list = []
    rel_lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE_RE.match(line)
        if m is None:
            col = len(line) - len(line.lstrip()) + 1
            raise WordSyntaxError("expected 'gens:' or 'rel:'", lineno, col)
        key, body = m.group(1), m.group(2)
        offset = m.start(2)
        if key == "gens":
            for g in parse_word(body, line=lineno, column_offset=offset).letters:
                if g.sign < 0 or g.generator in gens:
                    raise WordSyntaxError(f"bad generator declaration {g}", lineno, offset + 1)
                gens.append(g.generator)
        elif key == "rel":
            rel_lines.append((lineno, body, offset))
        else:
            raise WordSyntaxError(f"unknown key {key!r}", lineno, m.start(1) + 1)
    rels = [parse_word(body, gens, line=ln, column_offset=off) for ln, body, off in rel_lines]
    return Presentation(tuple(gens), tuple(rels))


def format_presentation(p: Presentation) -> str:
    lines = ["gens: " + " ".join(map(str, p.alphabet))]
    lines += ["rel: " + format_word(r) for r in p.relators]
    return "\n".join(lines) + "\n"
