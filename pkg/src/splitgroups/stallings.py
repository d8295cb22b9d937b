"""Folded subgroup graphs for finitely generated subgroups of free groups.

Every edge carries, besides its generator label, a word over the subgroup's
generator symbols ``h_0, h_1, ...``.  Folding keeps the property that the
symbol-labels read along any closed path at the base expand to the word read
along that path, so tracing a member also yields an expression for it.
"""
from __future__ import annotations

import math
import random
from collections import deque
from typing import Optional, Sequence

from .words import Generator, Letter, Word, concat, invert

__all__ = [
    "INFINITE",
    "SubgroupGraph",
    "build_and_fold",
    "member",
    "rank",
    "index",
    "subgroup_symbol",
    "expand_symbols",
]

INFINITE = math.inf


def subgroup_symbol(i: int) -> Generator:
    return Generator("h", i)


def expand_symbols(expr: Word, gens: Sequence[Word]) -> Word:
    """Substitute ``gens[i]`` for each symbol ``h_i`` in ``expr``."""
    out: list = []
    for x in expr:
        img = gens[x.generator.subscript]
        out.extend(img.letters if x.sign > 0 else invert(img).letters)
    return Word(out)


class SubgroupGraph:
    """A folded core graph with base vertex 0, vertices numbered in BFS order."""

    def __init__(self, alphabet, num_vertices, edges, labels, generators):
        self.alphabet = tuple(sorted(alphabet))
        self.num_vertices = num_vertices
        self.edges = tuple(edges)  # (src, generator, dst)
        self.labels = dict(labels)  # edge -> Word over subgroup symbols
        self.generators = tuple(generators)
        self.base = 0
        self.out = {(s, g): d for s, g, d in self.edges}
        self.inc = {(d, g): s for s, g, d in self.edges}
        self._tree = None

    def step(self, v: int, x: Letter) -> Optional[int]:
        if x.sign > 0:
            return self.out.get((v, x.generator))
        return self.inc.get((v, x.generator))

    def trace(self, w: Word):
        """Follow ``w`` from the base; returns ``(end_vertex, steps_consumed, expr)``."""
        v, expr = self.base, []
        for i, x in enumerate(w):
            if x.sign > 0:
                d = self.out.get((v, x.generator))
                if d is None:
                    return v, i, Word(expr)
                expr.extend(self.labels[(v, x.generator, d)].letters)
            else:
                d = self.inc.get((v, x.generator))
                if d is None:
                    return v, i, Word(expr)
                expr.extend(invert(self.labels[(d, x.generator, v)]).letters)
            v = d
        return v, len(w), Word(expr)

    def express(self, w: Word) -> Optional[Word]:
        """Symbol word expanding to ``w``, or ``None`` when ``w`` is not a member."""
        v, n, expr = self.trace(w)
        if n == len(w) and v == self.base:
            return expr
        return None

    def tree_words(self) -> list:
        """Shortlex-least word from the base to each vertex."""
        if self._tree is None:
            words = [None] * self.num_vertices
            words[self.base] = Word()
            queue = deque([self.base])
            while queue:
                v = queue.popleft()
                for g in self.alphabet:
                    for x in (Letter(g, 1), Letter(g, -1)):
                        d = self.step(v, x)
                        if d is not None and words[d] is None:
                            words[d] = Word._trusted(words[v].letters + (x,))
                            queue.append(d)
            self._tree = words
        return self._tree

    def coset_rep(self, w: Word):
        """``(expr, rep)`` with ``w = expand(expr) * rep`` and ``rep`` shortlex-least in ``Hw``."""
        v, n, _ = self.trace(w)
        rep = concat(self.tree_words()[v], w[n:])
        h = concat(w, invert(rep))
        expr = self.express(h)
        assert expr is not None
        return expr, rep

    def canonical_form(self):
        return (self.num_vertices, tuple(sorted((s, g.key, d) for s, g, d in self.edges)))

    def is_folded(self) -> bool:
        return len(self.out) == len(self.edges) == len(self.inc)

    def to_dot(self, name: str = "subgroup") -> str:
        lines = [f"digraph {name} {{"]
        for v in range(self.num_vertices):
            shape = "doublecircle" if v == self.base else "circle"
            lines.append(f'  {v} [shape={shape}];')
        for s, g, d in sorted(self.edges, key=lambda e: (e[0], e[1].key, e[2])):
            lines.append(f'  {s} -> {d} [label="{g}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"SubgroupGraph(vertices={self.num_vertices}, edges={len(self.edges)})"


def _fold(edges: list, base: int, rng: Optional[random.Random]) -> list:
    """Fold a list of ``[src, gen, dst, label]`` edges in place."""
    while True:
        by_out, by_in, clashes = {}, {}, []
        for e in edges:
            k_out, k_in = (e[0], e[1]), (e[2], e[1])
            if k_out in by_out:
                clashes.append(("out", by_out[k_out], e))
            else:
                by_out[k_out] = e
            if k_in in by_in:
                clashes.append(("in", by_in[k_in], e))
            else:
                by_in[k_in] = e
        if not clashes:
            return edges
        kind, e1, e2 = rng.choice(clashes) if rng is not None else clashes[0]
        if kind == "out":
            keep, gone = e1[2], e2[2]
            if keep == gone:
                edges.remove(e2)
                continue
            if gone == base:
                e1, e2 = e2, e1
                keep, gone = gone, keep
            delta = concat(invert(e2[3]), e1[3])
        else:
            keep, gone = e1[0], e2[0]
            if keep == gone:
                edges.remove(e2)
                continue
            if gone == base:
                e1, e2 = e2, e1
                keep, gone = gone, keep
            delta = concat(e2[3], invert(e1[3]))
        inv_delta = invert(delta)
        for e in edges:
            if e[2] == gone:
                e[3] = concat(e[3], delta)
            if e[0] == gone:
                e[3] = concat(inv_delta, e[3])
        for e in edges:
            if e[0] == gone:
                e[0] = keep
            if e[2] == gone:
                e[2] = keep
        edges.remove(e2)


def _trim(edges: list, base: int) -> list:
    while True:
        degree: dict = {}
        for s, _, d, _ in edges:
            degree[s] = degree.get(s, 0) + 1
            degree[d] = degree.get(d, 0) + 1
        leaves = {v for v, k in degree.items() if k == 1 and v != base}
        if not leaves:
            return edges
        edges = [e for e in edges if e[0] not in leaves and e[2] not in leaves]


def build_and_fold(gens: Sequence[Word], alphabet=None, rng: Optional[random.Random] = None) -> SubgroupGraph:
    """Folded core graph of ``<gens>``.  ``rng`` randomizes the fold order."""
    gens = [g if isinstance(g, Word) else Word(g) for g in gens]
    if alphabet is None:
        alphabet = set().union(*(g.generators() for g in gens)) if gens else set()
    edges: list = []
    counter = 1
    for i, w in enumerate(gens):
        if not w:
            continue
        cur = 0
        for j, x in enumerate(w):
            nxt = 0 if j == len(w) - 1 else counter
            if nxt:
                counter += 1
            label = Word.of(subgroup_symbol(i)) if j == 0 else Word()
            if x.sign > 0:
                edges.append([cur, x.generator, nxt, label])
            else:
                edges.append([nxt, x.generator, cur, invert(label)])
            cur = nxt
    edges = _trim(_fold(edges, 0, rng), 0)

    # renumber by BFS from the base in letter order
    out = {(s, g): (d, lab) for s, g, d, lab in edges}
    inc = {(d, g): (s, lab) for s, g, d, lab in edges}
    order = {0: 0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for g in sorted(alphabet):
            for table in (out, inc):
                hit = table.get((v, g))
                if hit is not None and hit[0] not in order:
                    order[hit[0]] = len(order)
                    queue.append(hit[0])
    new_edges, labels = [], {}
    for s, g, d, lab in edges:
        e = (order[s], g, order[d])
        new_edges.append(e)
        labels[e] = lab
    return SubgroupGraph(alphabet, len(order), new_edges, labels, gens)


def member(graph: SubgroupGraph, w: Word) -> bool:
    return graph.express(w) is not None


def rank(graph: SubgroupGraph) -> int:
    return len(graph.edges) - graph.num_vertices + 1


def index(graph: SubgroupGraph):
    """Index in the free group on ``graph.alphabet``; ``INFINITE`` unless the graph is a cover."""
    for v in range(graph.num_vertices):
        for g in graph.alphabet:
            if (v, g) not in graph.out or (v, g) not in graph.inc:
                return INFINITE
    return graph.num_vertices
