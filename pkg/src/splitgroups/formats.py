"""Text formats for splittings and JSON encodings of results.

A splitting file has one section header, ``[amalgam]`` or ``[hnn]``,
followed by ``key: value`` lines::

    [amalgam]            [hnn]
    A.gens: x            A.gens: a
    B.gens: y            stable: t
    H.inA: x^2           map: a -> a^2
    H.inB: y^3

``A.rel``, ``B.rel``, ``H.inA``, ``H.inB`` and ``map`` may repeat, one word
(or one pair) per line.  ``map: h' -> h`` declares ``t h' t^-1 = h``.
"""
from __future__ import annotations

import re
from typing import Union

from .magnus import Hierarchy, HierarchyStep, PartialHierarchy
from .presentations import Presentation, format_presentation, parse_presentation
from .splittings import AmalgamData, HNNData
from .words import WordSyntaxError, format_word, parse_word

__all__ = [
    "FORMAT_VERSION",
    "parse_splitting",
    "format_splitting",
    "parse_group",
    "hierarchy_to_json",
    "step_to_json",
]

FORMAT_VERSION = 1

_KEY_RE = re.compile(r"\s*([A-Za-z.']+)\s*:(.*)\Z")
_SECTIONS = {"[amalgam]": "amalgam", "[hnn]": "hnn"}
_KEYS = {
    "amalgam": {"A.gens", "A.rel", "B.gens", "B.rel", "H.inA", "H.inB"},
    "hnn": {"A.gens", "A.rel", "stable", "map"},
}


def _gens(body: str, lineno: int, offset: int) -> list:
    out = []
    for x in parse_word(body, line=lineno, column_offset=offset).letters:
        if x.sign < 0 or x.generator in out:
            raise WordSyntaxError(f"bad generator declaration {x}", lineno, offset + 1)
        out.append(x.generator)
    return out


def parse_splitting(text: str) -> Union[AmalgamData, HNNData]:
    kind = None
    entries: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            if kind is not None or stripped not in _SECTIONS:
                raise WordSyntaxError(f"unexpected section {stripped}", lineno, line.index("[") + 1)
            kind = _SECTIONS[stripped]
            continue
        if kind is None:
            raise WordSyntaxError("expected [amalgam] or [hnn] first", lineno, 1)
        m = _KEY_RE.match(line)
        if m is None or m.group(1) not in _KEYS[kind]:
            col = len(line) - len(line.lstrip()) + 1
            raise WordSyntaxError(f"unknown key in [{kind}]", lineno, col)
        entries.setdefault(m.group(1), []).append((lineno, m.group(2), m.start(2)))
    if kind is None:
        raise WordSyntaxError("empty splitting file", 1, 1)

    def gens_of(key):
        out = []
        for lineno, body, off in entries.get(key, ()):
            out.extend(_gens(body, lineno, off))
        return out

    def words_of(key, alphabet):
        return [parse_word(body, alphabet, line=ln, column_offset=off) for ln, body, off in entries.get(key, ())]

    a_gens = gens_of("A.gens")
    A = Presentation(tuple(a_gens), tuple(words_of("A.rel", a_gens)))
    try:
        if kind == "amalgam":
            b_gens = gens_of("B.gens")
            B = Presentation(tuple(b_gens), tuple(words_of("B.rel", b_gens)))
            return AmalgamData(A, B, words_of("H.inA", a_gens), words_of("H.inB", b_gens))
        stable = gens_of("stable")
        if len(stable) != 1:
            raise WordSyntaxError("exactly one stable letter required", 1, 1)
        h, hp = [], []
        for lineno, body, off in entries.get("map", ()):
            if "->" not in body:
                raise WordSyntaxError("map needs the form h' -> h", lineno, off + 1)
            left, right = body.split("->", 1)
            hp.append(parse_word(left, a_gens, line=lineno, column_offset=off))
            h.append(parse_word(right, a_gens, line=lineno, column_offset=off + len(left) + 2))
        return HNNData(A, stable[0], h, hp)
    except ValueError as exc:
        if isinstance(exc, WordSyntaxError):
            raise
        raise WordSyntaxError(str(exc), 1, 1) from None


def format_splitting(split) -> str:
    def gens_line(key, p):
        return f"{key}: " + " ".join(map(str, p.alphabet))

    lines = []
    if isinstance(split, AmalgamData):
        lines += ["[amalgam]", gens_line("A.gens", split.A)]
        lines += [f"A.rel: {format_word(r)}" for r in split.A.relators]
        lines.append(gens_line("B.gens", split.B))
        lines += [f"B.rel: {format_word(r)}" for r in split.B.relators]
        lines += [f"H.inA: {format_word(h)}" for h in split.h_in_A]
        lines += [f"H.inB: {format_word(h)}" for h in split.h_in_B]
    else:
        lines += ["[hnn]", gens_line("A.gens", split.A)]
        lines += [f"A.rel: {format_word(r)}" for r in split.A.relators]
        lines.append(f"stable: {split.stable}")
        lines += [f"map: {format_word(hp)} -> {format_word(h)}" for h, hp in zip(split.h_gens, split.h_prime_gens)]
    return "\n".join(lines) + "\n"


def parse_group(text: str):
    """A presentation, or a splitting when the text opens a section."""
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            return parse_splitting(text) if line.startswith("[") else parse_presentation(text)
    return parse_presentation(text)


def step_to_json(step: HierarchyStep) -> dict:
    return {
        "kind": step.kind.name,
        "source": format_presentation(step.source),
        "stable": str(step.stable),
        "basis_change": {str(g): format_word(w) for g, w in sorted(step.basis_change.items())}
        if step.basis_change
        else {},
        "rewritten_relator": format_word(step.rewritten_relator),
        "base": format_presentation(step.base),
        "base_relator": format_word(step.base.relators[0]) if step.base.relators else "1",
        "free_rank": step.free_rank,
        "edges": [[str(a), str(b)] for a, b in zip(step.edge_neg, step.edge_pos)],
    }


def hierarchy_to_json(h, checks=None) -> dict:
    out = {
        "format": FORMAT_VERSION,
        "command": "hierarchy",
        "complete": bool(h.complete),
        "steps": [step_to_json(s) for s in h.steps],
    }
    if isinstance(h, Hierarchy):
        b = h.base_classification
        out["base"] = {"kind": b.kind.name, "rank": b.rank, "order": b.order, "text": str(b)}
    elif isinstance(h, PartialHierarchy):
        out["stuck_at"] = format_presentation(h.stuck_at)
        out["reason"] = h.reason
    if checks is not None:
        out["checks"] = checks
    return out
