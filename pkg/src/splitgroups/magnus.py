"""One-relator hierarchy and a recursive word-problem solver.

Subscript convention: ``x_e`` stands for ``t^e x t^-e``.  Scanning the
relator left to right with a running stable-letter exponent ``e``, each
other letter at level ``e`` becomes ``x_e``.  In the resulting HNN
extension ``t x_i t^-1 = x_{i+1}``, so ``edge_neg`` (all but the top
subscript of each family) is the ``H'`` side and ``edge_pos`` the ``H``
side.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .oracles import FactorOracle, FiniteBallOracle, OracleUnknown, Verdict, shortlex_words
from .presentations import (
    AbelianImage,
    OneRelatorPresentation,
    Presentation,
    abelian_invariants,
    fresh_generator,
)
from .splittings import H, H_PRIME, HNNData, britton_reduce
from .stallings import build_and_fold, expand_symbols, subgroup_symbol
from .words import Generator, Letter, Word, concat, exponent_sum, invert

__all__ = [
    "StepKind",
    "BaseKind",
    "BaseDescription",
    "HierarchyStep",
    "Hierarchy",
    "PartialHierarchy",
    "PreconditionError",
    "classify_base",
    "moldavanskii_step",
    "stabilize_step",
    "hierarchy",
    "check_step",
    "one_relator_wp",
    "OneRelatorSolver",
]


class PreconditionError(ValueError):
    pass


class StepKind(enum.Enum):
    MOLDAVANSKII = "MOLDAVANSKII"
    STABILIZED = "STABILIZED"


class BaseKind(enum.Enum):
    FREE = "FREE"
    FREE_TIMES_FINITE_CYCLIC = "FREE_TIMES_FINITE_CYCLIC"


@dataclass(frozen=True)
class BaseDescription:
    kind: BaseKind
    rank: int
    order: int = 1

    def __str__(self) -> str:
        if self.kind is BaseKind.FREE:
            return f"F{self.rank}"
        return f"F{self.rank} * Z/{self.order}"


@dataclass(frozen=True)
class HierarchyStep:
    kind: StepKind
    source: OneRelatorPresentation
    stable: Generator
    basis_change: dict
    rewritten_relator: Word
    hnn_base: Presentation
    base: OneRelatorPresentation
    free_rank: int
    edge_neg: tuple
    edge_pos: tuple
    reconstruction: dict

    def hnn(self) -> HNNData:
        return HNNData(
            self.hnn_base,
            self.stable,
            tuple(Word.of(g) for g in self.edge_pos),
            tuple(Word.of(g) for g in self.edge_neg),
        )

    def hnn_presentation(self) -> Presentation:
        return self.hnn().presentation()

    def rewrite(self, w: Word) -> Word:
        """Image of a word over the source alphabet in the HNN extension."""
        return w.substitute(self.reconstruction)


@dataclass(frozen=True)
class Hierarchy:
    steps: tuple
    base_classification: BaseDescription
    complete: bool = field(default=True, init=False)


@dataclass(frozen=True)
class PartialHierarchy:
    steps: tuple
    stuck_at: Presentation
    reason: str
    complete: bool = field(default=False, init=False)


def _occurring(p: Presentation) -> list:
    gens = set()
    for r in p.relators:
        gens |= r.generators()
    return [g for g in p.alphabet if g in gens]


def _single_occurrence(r: Word) -> Optional[Generator]:
    counts: dict = {}
    for x in r:
        counts[x.generator] = counts.get(x.generator, 0) + 1
    once = [g for g, k in counts.items() if k == 1]
    return min(once) if once else None


def _eliminate(r: Word, g: Generator) -> Word:
    """Expression for ``g`` when it occurs exactly once in the relator ``r``."""
    i = next(i for i, x in enumerate(r) if x.generator == g)
    u, v = r[:i], r[i + 1 :]
    image = invert(concat(v, u))  # u g v = 1  =>  g = u^-1 v^-1
    return image if r[i].sign > 0 else invert(image)


def classify_base(p: Presentation) -> Optional[BaseDescription]:
    """Recognize free groups and free products of a free group with a finite
    cyclic group.  Returns ``None`` when ``p`` is not of base shape."""
    if not p.relators:
        return BaseDescription(BaseKind.FREE, p.rank)
    if len(p.relators) != 1:
        return None
    (r,) = p.relators
    gens = r.generators()
    if len(gens) == 1:
        k = len(r)
        if k == 1:
            return BaseDescription(BaseKind.FREE, p.rank - 1)
        return BaseDescription(BaseKind.FREE_TIMES_FINITE_CYCLIC, p.rank - 1, k)
    if _single_occurrence(r) is not None:
        return BaseDescription(BaseKind.FREE, p.rank - 1)
    return None


def _family_generator(x: Generator, level: int, taken_names: set) -> Generator:
    if x.subscript is None:
        return Generator(x.name, level)
    stem = f"{x.name}{x.subscript}" if x.subscript >= 0 else f"{x.name}m{-x.subscript}"
    while stem in taken_names:
        stem += "q"
    return Generator(stem, level)


def moldavanskii_step(p: OneRelatorPresentation, t: Generator) -> HierarchyStep:
    r = p.relator
    if t not in r.generators() or exponent_sum(r, t) != 0:
        raise PreconditionError(f"stable letter {t} must occur with exponent sum 0")
    names = {g.name for g in p.alphabet}
    family = {x: _family_generator(x, 0, names - {x.name}) for x in p.alphabet if x != t}
    level, letters = 0, []
    lo, hi = {}, {}
    for x in r:
        if x.generator == t:
            level += x.sign
            continue
        g = x.generator
        letters.append(Letter(Generator(family[g].name, level), x.sign))
        lo[g] = min(lo.get(g, level), level)
        hi[g] = max(hi.get(g, level), level)
    assert level == 0
    base_relator = Word(letters)

    alphabet, edge_neg, edge_pos, reconstruction = [], [], [], {}
    for x in p.alphabet:
        if x == t:
            continue
        m, M = lo.get(x, 0), hi.get(x, 0)
        name = family[x].name
        alphabet += [Generator(name, i) for i in range(m, M + 1)]
        edge_neg += [Generator(name, i) for i in range(m, M)]
        edge_pos += [Generator(name, i) for i in range(m + 1, M + 1)]
        anchor = min(max(0, m), M)
        tw = Word.of(t, anchor)
        reconstruction[x] = invert(tw) * Word.of(Generator(name, anchor)) * tw
    reconstruction[t] = Word.of(t)
    hnn_base = Presentation(tuple(alphabet), (base_relator,))
    occurring = _occurring(hnn_base)
    base = OneRelatorPresentation(tuple(occurring), hnn_base.relators)
    return HierarchyStep(
        kind=StepKind.MOLDAVANSKII,
        source=p,
        stable=t,
        basis_change={g: Word.of(g) for g in p.alphabet},
        rewritten_relator=r,
        hnn_base=hnn_base,
        base=base,
        free_rank=len(alphabet) - len(occurring),
        edge_neg=tuple(edge_neg),
        edge_pos=tuple(edge_pos),
        reconstruction=reconstruction,
    )


def _fresh_names(taken: set, count: int) -> list:
    out = []
    candidates = [chr(c) for c in range(ord("c"), ord("z"))]
    i = 1
    while len(out) < count:
        if not candidates:
            candidates = [f"c{i}", f"d{i}"]
            i += 1
        name = candidates.pop(0)
        if name not in taken:
            out.append(name)
            taken.add(name)
    return out


def stabilize_step(p: OneRelatorPresentation) -> HierarchyStep:
    """Adjoin a free generator ``z`` and change basis so that ``z`` has
    exponent sum zero, then take a Moldavanskii step with stable ``z``."""
    r = p.relator
    occ = _occurring(p)
    sigma = {g: exponent_sum(r, g) for g in occ}
    if len(occ) < 2 or any(s == 0 for s in sigma.values()):
        raise PreconditionError("needs >= 2 occurring generators, all with nonzero exponent sum")
    ordered = sorted(occ)
    pairs = [(ordered[i], ordered[j]) for i in range(len(ordered)) for j in range(i + 1, len(ordered))]
    a, b = min(pairs, key=lambda ab: abs(sigma[ab[0]]) * abs(sigma[ab[1]]))
    alpha, beta = sigma[a], sigma[b]
    z = fresh_generator(p.alphabet)
    c_name, d_name = _fresh_names({g.name for g in p.alphabet} | {z.name}, 2)
    c, d = Generator(c_name), Generator(d_name)
    alphabet = tuple(c if g == a else d if g == b else g for g in p.alphabet) + (z,)
    za, zb = Word.of(z, -beta), Word.of(z, alpha)
    # z can cancel completely (e.g. when sigma_a = -sigma_b and a, b^-1 are
    # always adjacent); then try the z-powers on the other side.
    for side_a, side_b in ((1, 1), (-1, -1), (1, -1), (-1, 1)):
        basis_change = {g: Word.of(g) for g in p.alphabet}
        basis_change[a] = Word.of(c) * za if side_a > 0 else za * Word.of(c)
        basis_change[b] = Word.of(d) * zb if side_b > 0 else zb * Word.of(d)
        stabilized = OneRelatorPresentation(alphabet, (r.substitute(basis_change),))
        if z in stabilized.relator.generators():
            break
    else:
        raise PreconditionError("the adjoined letter cancels under every substitution")
    assert exponent_sum(stabilized.relator, z) == 0
    inner = moldavanskii_step(stabilized, z)
    reconstruction = {g: basis_change[g].substitute(inner.reconstruction) for g in p.alphabet}
    return HierarchyStep(
        kind=StepKind.STABILIZED,
        source=p,
        stable=z,
        basis_change=basis_change,
        rewritten_relator=stabilized.relator,
        hnn_base=inner.hnn_base,
        base=inner.base,
        free_rank=inner.free_rank,
        edge_neg=inner.edge_neg,
        edge_pos=inner.edge_pos,
        reconstruction=reconstruction,
    )


def _next_step(p: OneRelatorPresentation) -> HierarchyStep:
    r = p.relator
    zero = [g for g in _occurring(p) if exponent_sum(r, g) == 0]
    if zero:
        # ties go to the last generator in canonical order
        return moldavanskii_step(p, max(zero))
    return stabilize_step(p)


def hierarchy(p: Presentation, max_depth: int = 8, max_relator_letters: int = 64):
    """Decompose a one-relator group down to a free or free-times-cyclic base.

    Returns a :class:`Hierarchy`, or a :class:`PartialHierarchy` when the
    limits are hit before a base is reached.
    """
    if len(p.relators) > 1:
        raise PreconditionError("at most one relator")
    steps: list = []
    split_rank = 0
    current = p
    while True:
        occ = _occurring(current)
        split_rank += current.rank - len(occ)
        current = Presentation(tuple(occ), current.relators)
        base = classify_base(current)
        if base is not None:
            return Hierarchy(tuple(steps), BaseDescription(base.kind, base.rank + split_rank, base.order))
        if len(steps) >= max_depth:
            return PartialHierarchy(tuple(steps), current, f"depth limit {max_depth} reached")
        if len(current.relators[0]) > max_relator_letters:
            return PartialHierarchy(tuple(steps), current, f"relator longer than {max_relator_letters}")
        try:
            step = _next_step(OneRelatorPresentation.from_presentation(current))
        except PreconditionError as exc:
            return PartialHierarchy(tuple(steps), current, str(exc))
        steps.append(step)
        split_rank += step.free_rank
        current = step.base


def check_step(step: HierarchyStep, max_relator_length: int = 8) -> dict:
    """Re-derive the defining properties of a step; maps check name to bool
    (``None`` when a check does not apply)."""
    t = step.stable
    checks = {}
    checks["stable_exponent_zero"] = exponent_sum(step.rewritten_relator, t) == 0
    checks["base_free_of_stable"] = all(t not in r.generators() for r in step.hnn_base.relators)

    families: dict = {}
    for r in step.base.relators:
        for x in r:
            families.setdefault(x.generator.name, set()).add(x.generator.subscript)
    ok = len(step.edge_neg) == len(step.edge_pos)
    neg, pos = set(step.edge_neg), set(step.edge_pos)
    for name, subs in families.items():
        ok = ok and Generator(name, max(subs)) not in neg and Generator(name, min(subs)) not in pos
    ok = ok and [g.shifted(1) for g in step.edge_neg] == list(step.edge_pos)
    checks["edges_shift"] = ok

    expected = abelian_invariants(step.source)
    if step.kind is StepKind.STABILIZED:
        expected = expected.plus_free(1)
    checks["abelianization"] = abelian_invariants(step.hnn_presentation()) == expected

    r = step.source.relator
    if len(r) <= max_relator_length:
        hnn = step.hnn()
        oracle = FiniteBallOracle(step.hnn_base, {H: hnn.h_gens, H_PRIME: hnn.h_prime_gens})
        nf = britton_reduce(hnn, step.rewrite(r), oracle)
        checks["relator_reduces"] = not nf.syllables and oracle.word_problem(nf.prefix) is Verdict.TRIVIAL
    else:
        checks["relator_reduces"] = None
    return checks


class _MagnusOracle(FactorOracle):
    """Factor oracle for the base of a hierarchy step, backed by the solver."""

    def __init__(self, solver: "OneRelatorSolver", step: HierarchyStep, depth: int):
        hnn = step.hnn()
        super().__init__(step.hnn_base, {H: hnn.h_gens, H_PRIME: hnn.h_prime_gens})
        self.solver = solver
        self.depth = depth
        self.gens = {H: step.edge_pos, H_PRIME: step.edge_neg}

    def word_problem(self, w: Word) -> Verdict:
        return self.solver.word_problem(self.presentation, w, self.depth)

    def subgroup_member(self, w: Word, tag: str) -> Optional[Word]:
        return self.solver.member(self.presentation, self.gens[tag], w, self.depth)


def _free_product_syllables(w: Word, core: set) -> list:
    out: list = []
    for x in w:
        side = x.generator in core
        if out and out[-1][0] == side:
            out[-1][1].append(x)
        else:
            out.append((side, [x]))
    return [[side, Word(s)] for side, s in out]


class OneRelatorSolver:
    """Recursive word problem and Magnus-subgroup membership for one-relator
    groups.  Memo tables live on the instance."""

    def __init__(self, max_depth: int = 5, search_length: int = 12, budget: int = 2000):
        self.max_depth = max_depth
        self.search_length = search_length
        self.budget = budget
        self._plans: dict = {}
        self._ab: dict = {}
        self._wp: dict = {}
        self._member: dict = {}
        self._graphs: dict = {}

    def _abelian(self, p) -> AbelianImage:
        if p not in self._ab:
            self._ab[p] = AbelianImage(p)
        return self._ab[p]

    def plan(self, p: Presentation):
        if p in self._plans:
            return self._plans[p]
        if not p.relators:
            plan = ("free",)
        else:
            (r,) = p.relators
            occ = _occurring(p)
            if len(occ) < p.rank:
                plan = ("split", Presentation(tuple(occ), p.relators))
            elif len(occ) == 1:
                plan = ("cyclic", occ[0], len(r))
            elif _single_occurrence(r) is not None:
                g = _single_occurrence(r)
                plan = ("eliminate", g, _eliminate(r, g))
            else:
                plan = ("step", _next_step(OneRelatorPresentation.from_presentation(p)))
        self._plans[p] = plan
        return plan

    # word problem ---------------------------------------------------------

    def word_problem(self, p: Presentation, w: Word, depth: int = 0) -> Verdict:
        key = (p, w)
        if key not in self._wp:
            self._wp[key] = self._decide(p, w, depth)
        return self._wp[key]

    def _decide(self, p: Presentation, w: Word, depth: int) -> Verdict:
        if not w:
            return Verdict.TRIVIAL
        if not p.relators:
            return Verdict.NONTRIVIAL
        if not self._abelian(p).is_zero(w):
            return Verdict.NONTRIVIAL
        plan = self.plan(p)
        kind = plan[0]
        if kind == "split":
            return self._free_product_wp(plan[1], w, depth)
        if kind == "cyclic":
            return Verdict.TRIVIAL if sum(x.sign for x in w) % plan[2] == 0 else Verdict.NONTRIVIAL
        if kind == "eliminate":
            image = w.substitute({plan[1]: plan[2]})
            return Verdict.NONTRIVIAL if image else Verdict.TRIVIAL
        if depth >= self.max_depth:
            return Verdict.UNKNOWN
        step = plan[1]
        nf = britton_reduce(step.hnn(), step.rewrite(w), _MagnusOracle(self, step, depth + 1))
        if nf.syllables:
            return Verdict.NONTRIVIAL if nf.canonical else Verdict.UNKNOWN
        return self.word_problem(step.hnn_base, nf.prefix, depth + 1)

    def _reduce_free_product(self, core: Presentation, w: Word, depth: int):
        """Delete trivial core syllables until none remain.
        Returns ``(syllables, undecided)``."""
        gens = set(core.alphabet)
        syl = _free_product_syllables(w, gens)
        undecided = False
        changed = True
        while changed:
            changed = False
            for i, (side, s) in enumerate(syl):
                if not side:
                    continue
                v = self.word_problem(core, s, depth)
                if v is Verdict.UNKNOWN:
                    undecided = True
                if v is Verdict.TRIVIAL:
                    rest = syl[:i] + syl[i + 1 :]
                    merged = Word()
                    for _, piece in rest:
                        merged = concat(merged, piece)
                    syl = _free_product_syllables(merged, gens)
                    changed = True
                    break
        return syl, undecided

    def _free_product_wp(self, core: Presentation, w: Word, depth: int) -> Verdict:
        syl, undecided = self._reduce_free_product(core, w, depth)
        if not syl:
            return Verdict.TRIVIAL
        return Verdict.UNKNOWN if undecided else Verdict.NONTRIVIAL

    # Magnus subgroup membership ------------------------------------------

    def member(self, p: Presentation, gens: tuple, w: Word, depth: int = 0) -> Optional[Word]:
        """Expression of ``w`` over symbols ``h_i`` for ``gens[i]``, ``None`` if
        not a member; raises :class:`OracleUnknown` when undecided."""
        key = (p, gens, w)
        if key in self._member:
            hit = self._member[key]
            if isinstance(hit, OracleUnknown):
                raise hit
            return hit
        try:
            result = self._decide_member(p, tuple(gens), w, depth)
        except OracleUnknown as exc:
            self._member[key] = exc
            raise
        self._member[key] = result
        return result

    @staticmethod
    def _direct(gens, w) -> Optional[Word]:
        index = {g: i for i, g in enumerate(gens)}
        if all(x.generator in index for x in w):
            return Word([Letter(subgroup_symbol(index[x.generator]), x.sign) for x in w])
        return None

    def _decide_member(self, p: Presentation, gens: tuple, w: Word, depth: int) -> Optional[Word]:
        direct = self._direct(gens, w)
        if direct is not None:
            return direct
        if not p.relators:
            return self._fold_member(p.alphabet, [Word.of(g) for g in gens], w)
        plan = self.plan(p)
        kind = plan[0]
        if kind == "eliminate":
            g0, image = plan[1], plan[2]
            free = tuple(g for g in p.alphabet if g != g0)
            images = [Word.of(g).substitute({g0: image}) for g in gens]
            return self._fold_member(free, images, w.substitute({g0: image}))
        if kind == "split":
            return self._free_product_member(plan[1], p, gens, w, depth)
        if kind == "cyclic":
            if not gens:
                v = self.word_problem(p, w, depth)
                return Word() if v is Verdict.TRIVIAL else None
            # any subgroup containing the only occurring generator is everything
            if plan[1] in gens:
                i = gens.index(plan[1])
                return Word.of(subgroup_symbol(i), sum(x.sign for x in w))
        return self._search_member(p, gens, w, depth)

    def _fold_member(self, alphabet, images, w) -> Optional[Word]:
        key = (tuple(alphabet), tuple(images))
        if key not in self._graphs:
            self._graphs[key] = build_and_fold(images, alphabet)
        return self._graphs[key].express(w)

    def _free_product_member(self, core, p, gens, w, depth) -> Optional[Word]:
        syl, undecided = self._reduce_free_product(core, w, depth)
        if undecided:
            raise OracleUnknown(f"free-product reduction of {w} undecided")
        core_gens = tuple(g for g in gens if g in set(core.alphabet))
        core_index = [i for i, g in enumerate(gens) if g in set(core.alphabet)]
        expr = Word()
        for side, s in syl:
            if side:
                sub = self.member(core, core_gens, s, depth)
                if sub is None:
                    return None
                sub = Word([Letter(subgroup_symbol(core_index[x.generator.subscript]), x.sign) for x in sub])
            else:
                sub = self._direct(gens, s)
                if sub is None:
                    return None
            expr = concat(expr, sub)
        return expr

    def _search_member(self, p, gens, w, depth) -> Optional[Word]:
        ab = self._abelian(p)
        if not ab.in_image_of(w, [Word.of(g) for g in gens]):
            return None
        if depth >= self.max_depth:
            raise OracleUnknown("depth limit reached in membership search")
        checked = 0
        for u in shortlex_words([subgroup_symbol(i) for i in range(len(gens))], self.search_length):
            if checked >= self.budget:
                break
            checked += 1
            image = expand_symbols(u, [Word.of(g) for g in gens])
            if self.word_problem(p, concat(w, invert(image)), depth + 1) is Verdict.TRIVIAL:
                return u
        raise OracleUnknown(f"membership of {w} undecided by bounded search")


def one_relator_wp(p: Presentation, w: Word, max_depth: int = 5, **limits) -> Verdict:
    """Word problem in a one-relator group; ``UNKNOWN`` only on resource exhaustion."""
    if len(p.relators) > 1:
        raise PreconditionError("at most one relator")
    return OneRelatorSolver(max_depth=max_depth, **limits).word_problem(p, w)
