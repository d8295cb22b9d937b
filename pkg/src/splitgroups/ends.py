"""Finite-scale end structure of Cayley graphs and amalgam covers.

Everything here lives inside a ball ``B(N)`` of the Cayley graph.  Component
counts of ``B(N) - B(n)`` are evidence about ends, never proof: two
components may still merge beyond the horizon ``N``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .magnus import OneRelatorSolver, PreconditionError
from .oracles import FactorOracle, Verdict, factor_oracle
from .presentations import AbelianImage, Presentation
from .splittings import (
    H,
    AmalgamData,
    HNNData,
    amalgam_normal_form,
    default_oracles,
    word_problem as splitting_word_problem,
)
from .words import Letter, Word, concat, format_word, invert

__all__ = [
    "OUTSIDE",
    "UNKNOWN",
    "Ball",
    "EndReport",
    "RayPrefix",
    "CoverTruncation",
    "ProbeReport",
    "GroupOracle",
    "group_oracle",
    "cayley_ball",
    "complement_components",
    "end_reports",
    "same_end_prefix",
    "build_cover_truncation",
    "split_complex",
    "figure1_probe",
    "probe_series",
    "default_horizon",
    "ball_to_dot",
]

OUTSIDE = -1
UNKNOWN = -2


def default_horizon(n: int) -> int:
    return 2 * n + 4


@dataclass
class GroupOracle:
    """How a ball decides equality: a canonical ``key`` when one exists,
    otherwise pairwise ``wp`` on ``u * v^-1``."""

    alphabet: tuple
    wp: Callable[[Word], Verdict]
    key: Optional[Callable[[Word], object]] = None
    prefilter: Optional[Callable[[Word], object]] = None


def _amalgam_key(am: AmalgamData, oa: FactorOracle, ob: FactorOracle):
    """Normal form as a hashable key; ``None`` when the form is not canonical.
    The head is keyed by the A-factor's canonical form when it has one."""

    def key(w: Word):
        nf = amalgam_normal_form(am, w, oa, ob)
        if not nf.canonical:
            return None
        head = oa.normal_key(oa.expand(nf.head, H))
        return (nf.head if head is None else head, nf.syllables)

    return key


def group_oracle(group, oracle_length: int = 12, max_depth: int = 5) -> GroupOracle:
    """Equality oracle for ``group``: exact keys for free, free abelian and
    cyclic groups and for amalgams of those, pairwise word problems otherwise."""
    options = {"max_length": oracle_length}
    if isinstance(group, AmalgamData):
        oa, ob = default_oracles(group, **options)
        return GroupOracle(
            tuple(sorted(group.alphabet)),
            lambda w: splitting_word_problem(group, w, oa, ob),
            _amalgam_key(group, oa, ob),
            AbelianImage(group.presentation()).key,
        )
    if isinstance(group, HNNData):
        oracles = default_oracles(group, **options)
        return GroupOracle(
            tuple(sorted(group.alphabet)),
            lambda w: splitting_word_problem(group, w, *oracles),
            None,
            AbelianImage(group.presentation()).key,
        )
    p: Presentation = group
    oracle = factor_oracle(p, **options)
    if oracle.normal_key(Word()) is not None:
        return GroupOracle(tuple(sorted(p.alphabet)), oracle.word_problem, oracle.normal_key)
    if len(p.relators) == 1:
        solver = OneRelatorSolver(max_depth=max_depth, search_length=oracle_length)
        return GroupOracle(tuple(sorted(p.alphabet)), lambda w: solver.word_problem(p, w), None, AbelianImage(p).key)
    return GroupOracle(tuple(sorted(p.alphabet)), oracle.word_problem, None, AbelianImage(p).key)


@dataclass(frozen=True)
class Ball:
    """A ball of the Cayley graph.  ``adjacency[v][j]`` is the neighbor of
    vertex ``v`` along ``letters[j]``: an index, ``OUTSIDE`` or ``UNKNOWN``."""

    radius: int
    letters: tuple
    vertices: tuple
    distance: tuple
    adjacency: tuple
    approximate: bool = False
    _lookup: dict = field(default_factory=dict, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.vertices)

    def layer(self, d: int) -> list:
        return [i for i, k in enumerate(self.distance) if k == d]

    def neighbors(self, v: int):
        for j, u in enumerate(self.adjacency[v]):
            if u >= 0:
                yield j, u

    def find(self, w: Word) -> Optional[int]:
        """Index of the vertex whose canonical word is ``w`` (exact match)."""
        return self._lookup.get(w)

    def walk(self, w: Word) -> list:
        """Vertex indices visited reading ``w`` from the identity."""
        index = {x: j for j, x in enumerate(self.letters)}
        path = [0]
        for x in w:
            u = self.adjacency[path[-1]][index[x]]
            if u < 0:
                raise PreconditionError(f"path {format_word(w)} leaves the ball")
            path.append(u)
        return path


def _letters_of(alphabet) -> tuple:
    return tuple(Letter(g, s) for g in sorted(alphabet) for s in (1, -1))


def cayley_ball(group, n: int, wp=None, key=None, **options) -> Ball:
    """Breadth-first ball of radius ``n``; vertices carry shortlex-least words.

    ``wp`` and ``key`` override the oracle picked by :func:`group_oracle`.
    Undecided equalities keep vertices apart and mark the ball approximate.
    """
    if n < 0:
        raise PreconditionError("radius must be nonnegative")
    if wp is None and key is None:
        go = group_oracle(group, **options)
    else:
        alphabet = tuple(sorted(group.alphabet))
        prefilter = None
        if key is None:
            pres = group if isinstance(group, Presentation) else group.presentation()
            prefilter = AbelianImage(pres).key
        go = GroupOracle(alphabet, wp, key, prefilter)
    letters = _letters_of(go.alphabet)
    inverse_slot = [letters.index(~x) for x in letters]

    words: List[Word] = [Word()]
    dist: List[int] = [0]
    adj: List[list] = [[None] * len(letters)]
    exact: Dict[Word, int] = {Word(): 0}
    by_key: Dict[object, int] = {}
    by_filter: Dict[Tuple[int, object], list] = {}
    approximate = False

    def register(i: int):
        w = words[i]
        if go.key is not None:
            k = go.key(w)
            if k is not None:
                by_key.setdefault(k, i)
        f = go.prefilter(w) if go.prefilter else None
        by_filter.setdefault((dist[i], f), []).append(i)

    register(0)

    def locate(u: Word, d: int):
        """Existing index equal to ``u`` (which has length-distance <= d+1),
        or ``None`` with a flag saying whether some comparison was undecided."""
        hit = exact.get(u)
        if hit is not None:
            return hit, False
        if go.key is not None:
            k = go.key(u)
            if k is not None:
                return by_key.get(k), False
        f = go.prefilter(u) if go.prefilter else None
        undecided = False
        for layer in (d - 1, d, d + 1):
            for c in by_filter.get((layer, f), ()):
                verdict = go.wp(concat(u, invert(words[c])))
                if verdict is Verdict.TRIVIAL:
                    return c, False
                if verdict is Verdict.UNKNOWN:
                    undecided = True
        return None, undecided

    frontier = [0]
    for d in range(n + 1):
        nxt = []
        for v in frontier:
            for j, x in enumerate(letters):
                if adj[v][j] is not None:
                    continue
                u = concat(words[v], Word._trusted((x,)))
                idx, undecided = locate(u, d)
                if undecided:
                    approximate = True
                if idx is None:
                    if d == n:
                        adj[v][j] = UNKNOWN if undecided else OUTSIDE
                        continue
                    idx = len(words)
                    words.append(u)
                    dist.append(d + 1)
                    adj.append([None] * len(letters))
                    exact[u] = idx
                    register(idx)
                    nxt.append(idx)
                adj[v][j] = idx
                adj[idx][inverse_slot[j]] = v
        frontier = nxt
    return Ball(
        n,
        letters,
        tuple(words),
        tuple(dist),
        tuple(tuple(row) for row in adj),
        approximate,
        exact,
    )


def _components(ball: Ball, members: set, edges=None) -> list:
    """Connected components of the subgraph induced on ``members``, each a
    sorted tuple, listed by smallest vertex."""
    seen: set = set()
    comps = []
    for s in sorted(members):
        if s in seen:
            continue
        seen.add(s)
        comp, queue = [s], deque([s])
        while queue:
            v = queue.popleft()
            nbrs = edges(v) if edges is not None else (u for _, u in ball.neighbors(v))
            for u in nbrs:
                if u in members and u not in seen:
                    seen.add(u)
                    comp.append(u)
                    queue.append(u)
        comps.append(tuple(sorted(comp)))
    return comps


def _refine(fine: list, coarse: list) -> list:
    """Index of the coarse component containing each fine component."""
    where = {v: i for i, comp in enumerate(coarse) for v in comp}
    out = []
    for comp in fine:
        targets = {where.get(v) for v in comp}
        if len(targets) != 1 or None in targets:
            raise AssertionError("refinement is not well defined")
        out.append(targets.pop())
    return out


@dataclass(frozen=True)
class EndReport:
    """Components of ``B(N) - B(n)``.  ``refinement[i]`` names the component
    of the ``n``-report containing component ``i`` of the ``(n+1)``-report."""

    n: int
    N: int
    components: tuple
    sphere_contacts: tuple
    refinement: Optional[tuple] = None
    approximate: bool = False

    @property
    def count(self) -> int:
        return len(self.components)

    @property
    def outer_count(self) -> int:
        """Components reaching the horizon sphere."""
        return sum(1 for c in self.sphere_contacts if c)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "count": self.count,
            "outer_count": self.outer_count,
            "sizes": [len(c) for c in self.components],
            "sphere_contacts": list(self.sphere_contacts),
            "refinement": None if self.refinement is None else list(self.refinement),
            "approximate": self.approximate,
        }


def complement_components(ball: Ball, n: int, refine: bool = True) -> EndReport:
    if not 0 <= n < ball.radius:
        raise PreconditionError("cut radius must satisfy 0 <= n < N")

    def comps_at(cut):
        return _components(ball, {i for i, d in enumerate(ball.distance) if d > cut})

    comps = comps_at(n)
    contacts = tuple(sum(1 for v in c if ball.distance[v] == ball.radius) for c in comps)
    refinement = None
    if refine and n + 1 < ball.radius:
        refinement = tuple(_refine(comps_at(n + 1), comps))
    return EndReport(n, ball.radius, tuple(comps), contacts, refinement, ball.approximate)


def end_reports(ball: Ball) -> list:
    """Reports for every cut ``0 <= n < N``."""
    return [complement_components(ball, n) for n in range(ball.radius)]


@dataclass(frozen=True)
class RayPrefix:
    """A finite initial segment of a ray from the identity."""

    letters: Word

    def vertices(self, ball: Ball) -> list:
        return ball.walk(self.letters)


def same_end_prefix(r1: RayPrefix, r2: RayPrefix, ball: Ball, n: int) -> bool:
    """Whether the tails of both prefixes beyond their last visit to ``B(n)``
    lie in one component of ``B(N) - B(n)``."""
    comps = complement_components(ball, n, refine=False).components
    where = {v: i for i, c in enumerate(comps) for v in c}
    found = []
    for r in (r1, r2):
        path = r.vertices(ball)
        if ball.distance[path[-1]] <= n:
            raise PreconditionError(f"prefix {format_word(r.letters)} ends inside the cut")
        found.append(where[path[-1]])
    return found[0] == found[1]


@dataclass(frozen=True)
class CoverTruncation:
    """A ball in the Cayley graph of an amalgam with coset tags.

    Tags are canonical words for the cosets ``gA``, ``gB`` and ``gH``.
    ``h_edges`` realize the Cayley graph of ``H`` on its own generators as
    composite edges between vertices.
    """

    amalgam: AmalgamData
    ball: Ball
    a_tag: tuple
    b_tag: tuple
    h_tag: tuple
    h_edges: tuple
    approximate: bool = False

    @property
    def gamma0(self) -> frozenset:
        return frozenset(i for i, t in enumerate(self.h_tag) if not t)

    @property
    def x0(self) -> frozenset:
        return frozenset(i for i, t in enumerate(self.a_tag) if not t)

    @property
    def y0(self) -> frozenset:
        return frozenset(i for i, t in enumerate(self.b_tag) if not t)

    def side(self, j: int) -> str:
        return self.amalgam.factor_of(self.ball.letters[j].generator)

    def to_dot(self, color_sets: Sequence = ()) -> str:
        return ball_to_dot(self.ball, color_sets, extra_edges=self.h_edges)


def _left_syllables(am: AmalgamData, w: Word, oa, ob) -> tuple:
    nf = amalgam_normal_form(am, invert(w), oa, ob)
    return tuple((f, invert(s)) for f, s in reversed(nf.syllables)), nf.canonical


def build_cover_truncation(am: AmalgamData, n: int, oracles=None, **options) -> CoverTruncation:
    oa, ob = oracles if oracles is not None else default_oracles(am, **options)
    amalgam_key = _amalgam_key(am, oa, ob)

    ball = cayley_ball(am, n, wp=lambda w: splitting_word_problem(am, w, oa, ob), key=amalgam_key)
    a_tag, b_tag, h_tag = [], [], []
    approximate = ball.approximate
    for w in ball.vertices:
        syl, canonical = _left_syllables(am, w, oa, ob)
        approximate = approximate or not canonical
        words = [s for _, s in syl]
        whole = Word([x for s in words for x in s])
        h_tag.append(whole)
        for tags, side in ((a_tag, "A"), (b_tag, "B")):
            if syl and syl[-1][0] == side:
                tags.append(Word([x for s in words[:-1] for x in s]))
            else:
                tags.append(whole)
    key_to_index: dict = {}
    for i, w in enumerate(ball.vertices):
        k = amalgam_key(w)
        if k is not None:
            key_to_index[k] = i
    h_edges = []
    for i, w in enumerate(ball.vertices):
        for h in am.h_in_A:
            j = key_to_index.get(amalgam_key(concat(w, h)))
            if j is not None and j != i:
                h_edges.append((i, j))
    return CoverTruncation(am, ball, tuple(a_tag), tuple(b_tag), tuple(h_tag), tuple(h_edges), approximate)


def _h_adjacency(tr: CoverTruncation) -> dict:
    out: dict = {}
    for i, j in tr.h_edges:
        out.setdefault(i, set()).add(j)
        out.setdefault(j, set()).add(i)
    return out


def _half(tr: CoverTruncation, removed_side: str, removed: frozenset) -> frozenset:
    """Component containing ``Gamma_0`` of ``(ball - removed) | Gamma_0`` where
    edges on ``removed_side`` touching ``removed`` are dropped."""
    gamma0 = tr.gamma0
    members = {i for i in range(len(tr.ball)) if i not in removed} | set(gamma0)
    hadj = _h_adjacency(tr)

    def edges(v):
        for j, u in tr.ball.neighbors(v):
            if tr.side(j) == removed_side and (v in removed or u in removed):
                continue
            yield u
        yield from hadj.get(v, ())

    comps = _components(tr.ball, members, edges)
    keep = [c for c in comps if gamma0 & set(c)]
    return frozenset(v for c in keep for v in c)


def split_complex(tr: CoverTruncation):
    """``(Zplus, Zminus)``: the halves on the A side and the B side."""
    if tr.approximate:
        raise PreconditionError("truncation is approximate")
    zplus = _half(tr, "B", tr.y0)
    zminus = _half(tr, "A", tr.x0)
    return zplus, zminus


@dataclass(frozen=True)
class ProbeReport:
    """Incidence of components of ``Gamma_0 - C`` with components of
    ``Zplus - C`` and ``Zminus - C`` that meet ``Gamma_0``, for ``C = B(n)``."""

    n: int
    gamma_components: tuple
    plus_components: tuple
    minus_components: tuple
    incidence_plus: tuple
    incidence_minus: tuple
    plus_total: int
    minus_total: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "gamma_sizes": [len(c) for c in self.gamma_components],
            "plus_sizes": [len(c) for c in self.plus_components],
            "minus_sizes": [len(c) for c in self.minus_components],
            "incidence_plus": [list(r) for r in self.incidence_plus],
            "incidence_minus": [list(r) for r in self.incidence_minus],
            "plus_total": self.plus_total,
            "minus_total": self.minus_total,
        }


def figure1_probe(tr: CoverTruncation, n: int, halves=None) -> ProbeReport:
    zplus, zminus = halves if halves is not None else split_complex(tr)
    outside = {i for i, d in enumerate(tr.ball.distance) if d > n}
    hadj = _h_adjacency(tr)
    gamma = _components(tr.ball, set(tr.gamma0) & outside, lambda v: hadj.get(v, ()))

    def half_components(members, removed_side, removed):
        def edges(v):
            for j, u in tr.ball.neighbors(v):
                if tr.side(j) == removed_side and (v in removed or u in removed):
                    continue
                yield u
            yield from hadj.get(v, ())

        comps = _components(tr.ball, set(members) & outside, edges)
        meeting = [c for c in comps if any(set(c) & set(g) for g in gamma)]
        rows = tuple(tuple(bool(set(g) & set(c)) for c in meeting) for g in gamma)
        return tuple(meeting), rows, len(comps)

    plus, inc_plus, plus_total = half_components(zplus, "B", tr.y0)
    minus, inc_minus, minus_total = half_components(zminus, "A", tr.x0)
    return ProbeReport(n, tuple(gamma), plus, minus, inc_plus, inc_minus, plus_total, minus_total)


def probe_series(tr: CoverTruncation, cuts: Sequence[int]):
    """Probe reports for ascending ``cuts`` with refinement maps between
    consecutive reports (``Gamma_0``, plus and minus components)."""
    halves = split_complex(tr)
    reports = [figure1_probe(tr, n, halves) for n in cuts]
    maps = []
    for coarse, fine in zip(reports, reports[1:]):
        maps.append(
            {
                "gamma": tuple(_refine(fine.gamma_components, coarse.gamma_components)),
                "plus": tuple(_refine(fine.plus_components, coarse.plus_components)),
                "minus": tuple(_refine(fine.minus_components, coarse.minus_components)),
            }
        )
    return reports, maps


_PALETTE = ("red", "blue", "darkgreen", "orange", "purple", "brown", "cyan", "magenta")


def ball_to_dot(ball: Ball, color_sets: Sequence = (), name: str = "ball", extra_edges=()) -> str:
    """DOT text; vertices in ``color_sets[k]`` get the k-th palette color."""
    color = {}
    for k, members in enumerate(color_sets):
        for v in members:
            color[v] = _PALETTE[k % len(_PALETTE)]
    lines = [f"graph {name} {{"]
    for i, w in enumerate(ball.vertices):
        attrs = f'label="{format_word(w)}"'
        if i in color:
            attrs += f', style=filled, fillcolor="{color[i]}"'
        lines.append(f"  {i} [{attrs}];")
    for v in range(len(ball)):
        for j, u in ball.neighbors(v):
            x = ball.letters[j]
            if x.sign > 0:
                lines.append(f'  {v} -- {u} [label="{x.generator}"];')
    for i, j in extra_edges:
        if i < j:
            lines.append(f"  {i} -- {j} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
