"""Free-group words over named, optionally subscripted generators.

Text syntax: whitespace-separated tokens ``name``, ``name^k`` or
``name_s^k`` where ``s`` is an integer subscript (``a_-1^2`` is a
generator ``a`` with subscript -1, squared).  ``1`` denotes the identity.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

__all__ = [
    "Generator",
    "Letter",
    "Word",
    "WordSyntaxError",
    "free_reduce",
    "cyclic_reduce",
    "exponent_sum",
    "invert",
    "concat",
    "parse_word",
    "format_word",
    "letter_key",
    "shortlex_key",
]

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*\Z")
_TOKEN_RE = re.compile(r"([A-Za-z][A-Za-z0-9]*)(?:_(-?\d+))?(?:\^(-?\d+))?\Z")


@dataclass(frozen=True, slots=True)
class Generator:
    name: str
    subscript: Optional[int] = None

    def __post_init__(self):
        if not _NAME_RE.match(self.name):
            raise ValueError(f"invalid generator name {self.name!r}")

    @property
    def key(self):
        return (self.name, self.subscript is not None, self.subscript or 0)

    def __lt__(self, other: "Generator") -> bool:
        return self.key < other.key

    def shifted(self, k: int) -> "Generator":
        return Generator(self.name, (self.subscript or 0) + k)

    def __str__(self) -> str:
        if self.subscript is None:
            return self.name
        return f"{self.name}_{self.subscript}"

    def __repr__(self) -> str:
        return f"Generator({str(self)!r})"


class Letter(NamedTuple):
    generator: Generator
    sign: int

    def __invert__(self) -> "Letter":
        return Letter(self.generator, -self.sign)

    def __str__(self) -> str:
        return str(self.generator) if self.sign > 0 else f"{self.generator}^-1"


def letter_key(letter: Letter):
    """Total order on letters: by generator, then ``g`` before ``g^-1``."""
    return letter.generator.key + ((0 if letter.sign > 0 else 1),)


def shortlex_key(letters: Sequence[Letter]):
    return (len(letters), tuple(letter_key(x) for x in letters))


def _reduce(letters: Iterable[Letter]) -> tuple:
    out: list = []
    for x in letters:
        if out and out[-1].generator == x.generator and out[-1].sign == -x.sign:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class Word:
    """A freely reduced word.  Immutable and hashable."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[Letter] = ()):
        self.letters = _reduce(letters)
        self._hash = None

    @classmethod
    def _trusted(cls, letters: tuple) -> "Word":
        w = cls.__new__(cls)
        w.letters = letters
        w._hash = None
        return w

    @classmethod
    def of(cls, g: Generator, k: int = 1) -> "Word":
        sign = 1 if k > 0 else -1
        return cls._trusted((Letter(g, sign),) * abs(k))

    @classmethod
    def parse(cls, text: str, alphabet=None) -> "Word":
        return parse_word(text, alphabet)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word._trusted(self.letters[item])
        return self.letters[item]

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.letters)
        return self._hash

    def __mul__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return invert(self) ** -k
        out = Word()
        for _ in range(k):
            out = concat(out, self)
        return out

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"

    def generators(self) -> set:
        return {x.generator for x in self.letters}

    def substitute(self, images) -> "Word":
        """Replace each generator ``g`` by ``images[g]`` (missing ones kept)."""
        out: list = []
        for x in self.letters:
            img = images.get(x.generator)
            if img is None:
                out.append(x)
            elif x.sign > 0:
                out.extend(img.letters)
            else:
                out.extend(invert(img).letters)
        return Word(out)


def free_reduce(letters: Iterable[Letter]) -> Word:
    return Word(letters)


def cyclic_reduce(w: Word) -> tuple:
    """Return ``(core, conjugator)`` with ``conjugator * core * conjugator^-1 == w``."""
    s = w.letters
    i, j = 0, len(s) - 1
    while i < j and s[i].generator == s[j].generator and s[i].sign == -s[j].sign:
        i += 1
        j -= 1
    return Word._trusted(s[i : j + 1]), Word._trusted(s[:i])


def exponent_sum(w: Iterable[Letter], g: Generator) -> int:
    return sum(x.sign for x in w if x.generator == g)


def invert(w: Word) -> Word:
    return Word._trusted(tuple(Letter(x.generator, -x.sign) for x in reversed(w.letters)))


def concat(u: Word, v: Word) -> Word:
    a, b = u.letters, v.letters
    i = 0
    n = min(len(a), len(b))
    while i < n and a[-1 - i].generator == b[i].generator and a[-1 - i].sign == -b[i].sign:
        i += 1
    return Word._trusted(a[: len(a) - i] + b[i:])


class WordSyntaxError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


def parse_word(text: str, alphabet=None, *, line: int = 1, column_offset: int = 0) -> Word:
    """Parse the token syntax.  With ``alphabet`` given, unknown generators raise."""
    letters: list = []
    known = None if alphabet is None else set(alphabet)
    for m in re.finditer(r"\S+", text):
        tok = m.group(0)
        col = m.start() + 1 + column_offset
        if tok == "1":
            continue
        tm = _TOKEN_RE.match(tok)
        if tm is None:
            raise WordSyntaxError(f"bad token {tok!r}", line, col)
        name, sub, power = tm.groups()
        g = Generator(name, int(sub) if sub is not None else None)
        if known is not None and g not in known:
            raise WordSyntaxError(f"unknown generator {g}", line, col)
        k = int(power) if power is not None else 1
        letters.extend([Letter(g, 1 if k > 0 else -1)] * abs(k))
    return Word(letters)


def format_word(w: Iterable[Letter]) -> str:
    """Render with run-length powers; the identity renders as ``1``."""
    tokens = []
    run_letter, run = None, 0
    for x in list(w) + [None]:
        if run_letter is not None and x == run_letter:
            run += 1
            continue
        if run_letter is not None:
            k = run * run_letter.sign
            g = str(run_letter.generator)
            tokens.append(g if k == 1 else f"{g}^{k}")
        run_letter, run = x, 1
    return " ".join(tokens) if tokens else "1"
