"""Word-problem and subgroup oracles for the factors of a splitting.

An oracle answers three questions about a presented factor group:

* ``word_problem(w)`` -> :class:`Verdict`
* ``subgroup_member(w, tag)`` -> expression of ``w`` over the symbols
  ``h_0, h_1, ...`` of the tagged subgroup's generators, or ``None``
* ``coset_rep(w, tag)`` -> ``(expr, rep)`` with ``w = expand(expr) * rep``
  and ``rep`` shortlex-least in its right coset

Undecidable queries raise :class:`OracleUnknown`.
"""
from __future__ import annotations

import enum
import heapq
import threading
from itertools import product
from typing import Callable, Dict, Optional, Sequence

from .lattice import SpanSolver, solve_in_span
from .presentations import AbelianImage, Presentation
from .stallings import build_and_fold, expand_symbols, subgroup_symbol
from .words import Letter, Word, concat, cyclic_reduce, invert, letter_key, shortlex_key

__all__ = [
    "Verdict",
    "OracleUnknown",
    "FactorOracle",
    "FreeOracle",
    "FreeAbelianOracle",
    "CyclicOracle",
    "FiniteBallOracle",
    "factor_oracle",
    "symbols_word",
]


class Verdict(enum.Enum):
    TRIVIAL = "TRIVIAL"
    NONTRIVIAL = "NONTRIVIAL"
    UNKNOWN = "UNKNOWN"

    def __str__(self) -> str:
        return self.value


class OracleUnknown(Exception):
    """A query could not be decided within the oracle's resource limits."""


def symbols_word(coeffs) -> Word:
    """``h_0^c0 h_1^c1 ...`` for an integer coefficient list."""
    out: list = []
    for i, c in enumerate(coeffs):
        out.extend([Letter(subgroup_symbol(i), 1 if c > 0 else -1)] * abs(c))
    return Word(out)


def _letters(alphabet):
    return [Letter(g, s) for g in sorted(alphabet) for s in (1, -1)]


def shortlex_words(alphabet, max_length: int):
    """All reduced words over ``alphabet`` in shortlex order."""
    letters = _letters(alphabet)
    layer = [()]
    yield Word()
    for _ in range(max_length):
        nxt = []
        for w in layer:
            for x in letters:
                if w and w[-1].generator == x.generator and w[-1].sign == -x.sign:
                    continue
                nxt.append(w + (x,))
        for w in nxt:
            yield Word._trusted(w)
        layer = nxt


_MISSING = object()


class FactorOracle:
    """Base class.  ``subgroups`` maps a tag to the subgroup's generating words."""

    def __init__(self, presentation: Presentation, subgroups: Optional[Dict[str, Sequence[Word]]] = None):
        self.presentation = presentation
        self.subgroups = {tag: tuple(gens) for tag, gens in (subgroups or {}).items()}
        self._lock = threading.Lock()
        self._memo: dict = {}

    def _cached(self, key, compute):
        hit = self._memo.get(key, _MISSING)
        if hit is _MISSING:
            hit = compute()
            with self._lock:
                self._memo[key] = hit
        return hit

    def expand(self, expr: Word, tag: str) -> Word:
        return expand_symbols(expr, self.subgroups[tag])

    def word_problem(self, w: Word) -> Verdict:
        raise NotImplementedError

    def subgroup_member(self, w: Word, tag: str) -> Optional[Word]:
        raise NotImplementedError

    def coset_rep(self, w: Word, tag: str):
        # any rep is no longer than w itself, which lies in its own coset
        undecided = False
        for rep in shortlex_words(self.presentation.alphabet, len(w)):
            try:
                expr = self.subgroup_member(concat(w, invert(rep)), tag)
            except OracleUnknown:
                undecided = True
                continue
            if expr is not None:
                if undecided:
                    raise OracleUnknown(f"coset of {w} undecided")
                return expr, rep
        raise OracleUnknown(f"no coset representative found for {w}")

    def normal_key(self, w: Word):
        """Hashable canonical form of the element, or ``None`` if unavailable."""
        return None


class FreeOracle(FactorOracle):
    """Exact oracle for a free factor, via folded subgroup graphs."""

    def graph(self, tag: str):
        return self._cached(("graph", tag), lambda: build_and_fold(self.subgroups[tag], self.presentation.alphabet))

    def word_problem(self, w: Word) -> Verdict:
        return Verdict.NONTRIVIAL if w else Verdict.TRIVIAL

    def subgroup_member(self, w: Word, tag: str) -> Optional[Word]:
        return self.graph(tag).express(w)

    def coset_rep(self, w: Word, tag: str):
        return self.graph(tag).coset_rep(w)

    def normal_key(self, w: Word):
        return w


class FreeAbelianOracle(FactorOracle):
    """Exact oracle for a free abelian factor, via exponent vectors."""

    def __init__(self, presentation, subgroups=None):
        super().__init__(presentation, subgroups)
        self._gens = sorted(presentation.alphabet)
        self._index = {g: i for i, g in enumerate(self._gens)}

    def vector(self, w) -> list:
        v = [0] * len(self._gens)
        for x in w:
            v[self._index[x.generator]] += x.sign
        return v

    def _solver(self, tag) -> SpanSolver:
        return self._cached(("span", tag), lambda: SpanSolver([self.vector(h) for h in self.subgroups[tag]]))

    def word_problem(self, w: Word) -> Verdict:
        return Verdict.NONTRIVIAL if any(self.vector(w)) else Verdict.TRIVIAL

    def subgroup_member(self, w: Word, tag: str) -> Optional[Word]:
        coeffs = self._solver(tag).solve(self.vector(w))
        return None if coeffs is None else symbols_word(coeffs)

    def word_for(self, v) -> Word:
        out: list = []
        for g, c in zip(self._gens, v):
            out.extend([Letter(g, 1 if c > 0 else -1)] * abs(c))
        return Word._trusted(tuple(out))

    def _shell(self, d, n):
        if n == 0:
            if d == 0:
                yield ()
            return
        for a in range(-d, d + 1):
            for rest in self._shell(d - abs(a), n - 1):
                yield (a,) + rest

    def coset_rep(self, w: Word, tag: str):
        v = self.vector(w)
        return self._cached(("coset", tag, tuple(v)), lambda: self._coset_rep(v, tag))

    def _coset_rep(self, v, tag: str):
        solver = self._solver(tag)
        for d in range(sum(map(abs, v)) + 1):
            best = None
            for u in self._shell(d, len(v)):
                coeffs = solver.solve([a - b for a, b in zip(v, u)])
                if coeffs is None:
                    continue
                key = shortlex_key(self.word_for(u).letters)
                if best is None or key < best[0]:
                    best = (key, u, coeffs)
            if best is not None:
                return symbols_word(best[2]), self.word_for(best[1])
        raise AssertionError("unreachable: w lies in its own coset")

    def normal_key(self, w: Word):
        return tuple(self.vector(w))


class CyclicOracle(FactorOracle):
    """Exact oracle for a finite cyclic factor ``<a | a^k>``."""

    def __init__(self, presentation, subgroups=None):
        super().__init__(presentation, subgroups)
        (self.generator,) = presentation.alphabet
        (rel,) = presentation.relators
        self.order = len(rel)

    def exponent(self, w) -> int:
        return sum(x.sign for x in w) % self.order

    def word_problem(self, w: Word) -> Verdict:
        return Verdict.NONTRIVIAL if self.exponent(w) else Verdict.TRIVIAL

    def subgroup_member(self, w: Word, tag: str) -> Optional[Word]:
        rows = [[sum(x.sign for x in h)] for h in self.subgroups[tag]] + [[self.order]]
        coeffs = solve_in_span(rows, [self.exponent(w)])
        return None if coeffs is None else symbols_word(coeffs[:-1])

    def coset_rep(self, w: Word, tag: str):
        for j in sorted(range(-self.order, self.order + 1), key=lambda j: (abs(j), j < 0)):
            rep = Word.of(self.generator, j) if j else Word()
            expr = self.subgroup_member(concat(w, invert(rep)), tag)
            if expr is not None:
                return expr, rep
        raise AssertionError("unreachable")

    def normal_key(self, w: Word):
        return self.exponent(w)


class FiniteBallOracle(FactorOracle):
    """Bounded-search fallback for an arbitrary finite presentation.

    Triviality is proved by a bounded relator-substitution search on cyclic
    words of length at most ``max_length``; nontriviality only via the
    abelianization.  Membership is proved by free-group folding or by a
    bounded search over subgroup words; non-membership only via the
    abelianization.  Everything else is :class:`OracleUnknown`.
    """

    def __init__(
        self,
        presentation,
        subgroups=None,
        max_length: int = 12,
        budget: int = 20000,
        word_problem: Optional[Callable[[Word], Verdict]] = None,
    ):
        super().__init__(presentation, subgroups)
        self.max_length = max_length
        self.budget = budget
        self._wp = word_problem
        self._ab = AbelianImage(presentation)
        rels = []
        for r in presentation.relators:
            for v in (r, invert(r)):
                s = v.letters
                rels.extend(s[i:] + s[:i] for i in range(len(s)))
        self._rotations = sorted(set(rels), key=shortlex_key)

    def word_problem(self, w: Word) -> Verdict:
        return self._cached(("wp", w), lambda: self._decide(w))

    def _decide(self, w: Word) -> Verdict:
        if not w:
            return Verdict.TRIVIAL
        if not self._ab.is_zero(w):
            return Verdict.NONTRIVIAL
        if self._wp is not None:
            return self._wp(w)
        return Verdict.TRIVIAL if self._dehn_search(w) else Verdict.UNKNOWN

    @staticmethod
    def _cyclic_canon(s: tuple) -> tuple:
        core, _ = cyclic_reduce(Word(s))
        c = core.letters
        if not c:
            return ()
        return min((c[i:] + c[:i] for i in range(len(c))), key=lambda t: tuple(map(letter_key, t)))

    def _dehn_search(self, w: Word) -> bool:
        start = self._cyclic_canon(w.letters)
        seen = {start}
        heap = [(len(start), 0, start)]
        tick = 0
        while heap and len(seen) < self.budget:
            _, _, cur = heapq.heappop(heap)
            if not cur:
                return True
            n = len(cur)
            doubled = cur + cur
            for i in range(n):
                for rho in self._rotations:
                    # match a prefix of rho against the cyclic word at i
                    kmax = 0
                    while kmax < len(rho) and kmax < n and doubled[i + kmax] == rho[kmax]:
                        kmax += 1
                    for k in range(kmax, 0, -1):
                        rest = invert(Word._trusted(rho[k:])).letters
                        cand = self._cyclic_canon(doubled[i + k : i + n] + rest)
                        if len(cand) <= self.max_length and cand not in seen:
                            seen.add(cand)
                            tick += 1
                            heapq.heappush(heap, (len(cand), tick, cand))
        return False

    def subgroup_member(self, w: Word, tag: str) -> Optional[Word]:
        return self._cached(("member", tag, w), lambda: self._member(w, tag))

    def _member(self, w: Word, tag: str):
        gens = self.subgroups[tag]
        graph = self._cached(("graph", tag), lambda: build_and_fold(gens, self.presentation.alphabet))
        expr = graph.express(w)
        if expr is not None:
            return expr
        if not self._ab.in_image_of(w, gens):
            return None
        symbols = [subgroup_symbol(i) for i in range(len(gens))]
        checked = 0
        for u in shortlex_words(symbols, self.max_length):
            if checked >= self.budget:
                break
            checked += 1
            if self.word_problem(concat(w, invert(expand_symbols(u, gens)))) is Verdict.TRIVIAL:
                return u
        raise OracleUnknown(f"membership of {w} in {tag} undecided")


def _is_commutator_of(r: Word):
    s = r.letters
    if len(s) != 4:
        return None
    x, y = s[0].generator, s[1].generator
    if x == y or s[2].generator != x or s[3].generator != y:
        return None
    if s[0].sign != -s[2].sign or s[1].sign != -s[3].sign:
        return None
    return frozenset((x, y))


def factor_oracle(presentation: Presentation, subgroups=None, **fallback_options) -> FactorOracle:
    """Pick the exact oracle matching the presentation's shape, else the fallback."""
    p = presentation
    if not p.relators:
        return FreeOracle(p, subgroups)
    if len(p.alphabet) == 1 and len(p.relators) == 1:
        return CyclicOracle(p, subgroups)
    pairs = {_is_commutator_of(r) for r in p.relators}
    wanted = {frozenset((a, b)) for a, b in product(p.alphabet, p.alphabet) if a != b}
    if None not in pairs and pairs == wanted:
        return FreeAbelianOracle(p, subgroups)
    return FiniteBallOracle(p, subgroups, **fallback_options)
