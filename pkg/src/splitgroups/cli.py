"""Command-line front end.  Exit status: 0 success, 1 error, 2 when the
result is undecided or a limit was hit (partial output is still printed)."""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from typing import List, Optional

from .ends import (
    build_cover_truncation,
    cayley_ball,
    ball_to_dot,
    complement_components,
    default_horizon,
    probe_series,
    split_complex,
)
from .formats import FORMAT_VERSION, hierarchy_to_json, parse_group, parse_splitting
from .magnus import OneRelatorSolver, PreconditionError, check_step, hierarchy
from .oracles import Verdict
from .presentations import abelian_invariants, parse_presentation
from .splittings import AmalgamData, HNNData, amalgam_normal_form, britton_reduce, default_oracles
from .splittings import word_problem as splitting_wp
from .stallings import INFINITE, build_and_fold, rank
from .stallings import index as subgroup_index
from .words import Letter, Word, WordSyntaxError, cyclic_reduce, format_word, parse_word

__all__ = ["RunConfig", "Limits", "run", "main", "build_parser"]

OK, ERROR, UNDECIDED = 0, 1, 2


@dataclass(frozen=True)
class Limits:
    max_depth: int = 8
    max_ball_radius: int = 12
    oracle_length: int = 12

    def __post_init__(self):
        if min(self.max_depth, self.max_ball_radius, self.oracle_length) <= 0:
            raise ValueError("limits must be positive")


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace
    limits: Limits = field(default_factory=Limits)
    output: str = "text"
    seed: int = 0


class _Output:
    def __init__(self):
        self.lines: List[str] = []

    def __call__(self, text: str = ""):
        self.lines.append(text)

    def json(self, payload: dict):
        self.lines.append(json.dumps(payload, indent=2, sort_keys=True))

    def text(self) -> str:
        return "\n".join(self.lines) + ("\n" if self.lines else "")


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _word(text: str, alphabet=None) -> Word:
    return parse_word(text, alphabet)


def _subgroup(args):
    gens = [_word(g) for g in args.gen]
    alphabet = set().union(*(g.generators() for g in gens)) if gens else set()
    if args.alphabet:
        alphabet |= {x.generator for x in _word(args.alphabet)}
    return gens, alphabet


def _cmd_reduce(cfg: RunConfig, out: _Output) -> int:
    w = _word(cfg.args.word)
    core, conj = cyclic_reduce(w)
    if cfg.output == "json":
        out.json({"format": FORMAT_VERSION, "command": "reduce", "reduced": format_word(w),
                  "cyclic": format_word(core), "conjugator": format_word(conj), "length": len(w)})
    else:
        out(format_word(core) if cfg.args.cyclic else format_word(w))
    return OK


def _cmd_abel(cfg: RunConfig, out: _Output) -> int:
    p = parse_presentation(_read(cfg.args.file))
    inv = abelian_invariants(p)
    if cfg.output == "json":
        out.json({"format": FORMAT_VERSION, "command": "abel", "free_rank": inv.free_rank,
                  "torsion": list(inv.torsion), "text": str(inv)})
    else:
        out(str(inv))
    return OK


def _cmd_fold(cfg: RunConfig, out: _Output) -> int:
    gens, alphabet = _subgroup(cfg.args)
    g = build_and_fold(gens, alphabet)
    idx = subgroup_index(g)
    if cfg.output == "dot":
        out(g.to_dot().rstrip("\n"))
    elif cfg.output == "json":
        out.json({
            "format": FORMAT_VERSION, "command": "fold", "vertices": g.num_vertices,
            "edges": [[s, str(x), d] for s, x, d in sorted(g.edges, key=lambda e: (e[0], e[1].key, e[2]))],
            "rank": rank(g), "index": None if idx == INFINITE else idx,
        })
    else:
        out(f"vertices: {g.num_vertices}")
        for s, x, d in sorted(g.edges, key=lambda e: (e[0], e[1].key, e[2])):
            out(f"{s} -{x}-> {d}")
    return OK


def _cmd_member(cfg: RunConfig, out: _Output) -> int:
    gens, alphabet = _subgroup(cfg.args)
    w = _word(cfg.args.word)
    g = build_and_fold(gens, alphabet | w.generators())
    expr = g.express(w)
    if cfg.output == "json":
        out.json({"format": FORMAT_VERSION, "command": "member", "member": expr is not None,
                  "expression": None if expr is None else format_word(expr)})
    else:
        out("NOT MEMBER" if expr is None else f"MEMBER {format_word(expr)}")
    return OK


def _cmd_index(cfg: RunConfig, out: _Output) -> int:
    gens, alphabet = _subgroup(cfg.args)
    g = build_and_fold(gens, alphabet)
    idx = subgroup_index(g)
    if cfg.output == "json":
        out.json({"format": FORMAT_VERSION, "command": "index", "index": None if idx == INFINITE else idx,
                  "rank": rank(g), "alphabet_size": len(g.alphabet)})
    else:
        out(f"index: {'infinite' if idx == INFINITE else idx}")
        out(f"rank: {rank(g)}")
    return OK


def _oracle_options(cfg: RunConfig) -> dict:
    return {"max_length": cfg.limits.oracle_length}


def _cmd_nf(cfg: RunConfig, out: _Output) -> int:
    split = parse_splitting(_read(cfg.args.file))
    w = _word(cfg.args.word, split.alphabet)
    oracles = default_oracles(split, **_oracle_options(cfg))
    if isinstance(split, HNNData):
        nf = britton_reduce(split, w, oracles[0])
        text = format_word(nf.to_word())
        payload = {"kind": "hnn", "normal_form": text, "stable_count": nf.stable_count()}
    else:
        nf = amalgam_normal_form(split, w, *oracles)
        text = str(nf)
        payload = {"kind": "amalgam", "normal_form": text, "head": format_word(nf.head),
                   "syllables": [[f, format_word(s)] for f, s in nf.syllables]}
    payload.update({"format": FORMAT_VERSION, "command": "nf", "canonical": nf.canonical})
    if cfg.output == "json":
        out.json(payload)
    else:
        out(text if nf.canonical else f"{text}  (not canonical)")
    return OK if nf.canonical else UNDECIDED


def _random_words(alphabet, count: int, max_length: int, seed: int) -> list:
    rng = random.Random(seed)
    letters = [Letter(g, s) for g in sorted(alphabet) for s in (1, -1)]
    return [Word(rng.choice(letters) for _ in range(rng.randint(0, max_length))) for _ in range(count)]


def _cmd_wp(cfg: RunConfig, out: _Output) -> int:
    a = cfg.args
    if a.one_relator:
        p = parse_presentation(_read(a.one_relator))
        solver = OneRelatorSolver(max_depth=min(cfg.limits.max_depth, a.depth), search_length=cfg.limits.oracle_length)
        alphabet = p.alphabet

        def decide(w):
            return solver.word_problem(p, w)
    elif a.file:
        split = parse_splitting(_read(a.file))
        oracles = default_oracles(split, **_oracle_options(cfg))
        alphabet = split.alphabet

        def decide(w):
            return splitting_wp(split, w, *oracles)
    else:
        raise ValueError("wp needs a splitting file or --one-relator FILE")
    if a.random:
        words = _random_words(alphabet, a.random, a.length, cfg.seed)
    elif a.word is not None:
        words = [_word(a.word, alphabet)]
    else:
        raise ValueError("wp needs --word or --random")
    results = [(w, decide(w)) for w in words]
    unknown = sum(1 for _, v in results if v is Verdict.UNKNOWN)
    if cfg.output == "json":
        out.json({"format": FORMAT_VERSION, "command": "wp", "seed": cfg.seed,
                  "results": [{"word": format_word(w), "verdict": v.name} for w, v in results],
                  "unknown": unknown})
    elif len(results) == 1 and not a.random:
        out(results[0][1].name)
    else:
        for w, v in results:
            out(f"{v.name}\t{format_word(w)}")
    return UNDECIDED if unknown else OK


def _cmd_hierarchy(cfg: RunConfig, out: _Output) -> int:
    p = parse_presentation(_read(cfg.args.file))
    h = hierarchy(p, max_depth=cfg.limits.max_depth)
    checks = [check_step(s) for s in h.steps]
    if cfg.output == "json" or cfg.args.json:
        out.json(hierarchy_to_json(h, checks))
    else:
        for i, (s, c) in enumerate(zip(h.steps, checks)):
            out(f"step {i}: {s.kind.name} stable={s.stable}")
            if s.basis_change:
                out("  basis change: " + ", ".join(f"{g} -> {format_word(w)}" for g, w in sorted(s.basis_change.items())))
            out(f"  base relator: {format_word(s.base.relators[0]) if s.base.relators else '1'}")
            out(f"  checks: {'ok' if all(c.values()) else 'FAILED ' + ','.join(k for k, v in c.items() if not v)}")
        if h.complete:
            out(f"base: {h.base_classification}")
        else:
            out(f"stuck: {h.reason}")
    return OK if h.complete else UNDECIDED


def _ball_for(cfg: RunConfig, radius: int):
    if radius > cfg.limits.max_ball_radius:
        raise _LimitHit(f"radius {radius} exceeds max ball radius {cfg.limits.max_ball_radius}")
    group = parse_group(_read(cfg.args.file))
    return group, cayley_ball(group, radius, **_group_options(cfg))


def _group_options(cfg: RunConfig) -> dict:
    return {"oracle_length": cfg.limits.oracle_length, "max_depth": min(cfg.limits.max_depth, 5)}


class _LimitHit(Exception):
    pass


def _sphere_sizes(ball) -> list:
    sizes = [0] * (ball.radius + 1)
    for d in ball.distance:
        sizes[d] += 1
    return sizes


def _cmd_ball(cfg: RunConfig, out: _Output) -> int:
    _, ball = _ball_for(cfg, cfg.args.n)
    if cfg.output == "dot":
        out(ball_to_dot(ball).rstrip("\n"))
    elif cfg.output == "json":
        out.json({"format": FORMAT_VERSION, "command": "ball", "radius": ball.radius, "size": len(ball),
                  "spheres": _sphere_sizes(ball), "approximate": ball.approximate,
                  "vertices": [format_word(w) for w in ball.vertices]})
    else:
        out(f"vertices: {len(ball)}")
        out("spheres: " + " ".join(map(str, _sphere_sizes(ball))))
        if ball.approximate:
            out("approximate: true")
    return UNDECIDED if ball.approximate else OK


def _cmd_ends(cfg: RunConfig, out: _Output) -> int:
    a = cfg.args
    N = a.N if a.N is not None else default_horizon(a.n)
    if not 0 <= a.n < N:
        raise ValueError("need 0 <= n < N")
    _, ball = _ball_for(cfg, N)
    cuts = range(N) if a.series else [a.n]
    reports = [complement_components(ball, n) for n in cuts]
    if cfg.output == "dot":
        r = reports[-1] if not a.series else complement_components(ball, a.n)
        out(ball_to_dot(ball, r.components).rstrip("\n"))
    elif cfg.output == "json":
        out.json({"format": FORMAT_VERSION, "command": "ends", "horizon": N, "approximate": ball.approximate,
                  "reports": [r.to_json() for r in reports]})
    else:
        for r in reports:
            if a.series:
                out(f"cut {r.n}:")
            out(f"components: {r.count}")
            out(f"outer: {r.outer_count}")
            out("sizes: " + " ".join(str(len(c)) for c in r.components))
        if ball.approximate:
            out("approximate: true")
    return UNDECIDED if ball.approximate else OK


def _truncation(cfg: RunConfig, radius: int):
    if radius > cfg.limits.max_ball_radius:
        raise _LimitHit(f"radius {radius} exceeds max ball radius {cfg.limits.max_ball_radius}")
    split = parse_splitting(_read(cfg.args.file))
    if not isinstance(split, AmalgamData):
        raise ValueError("cover truncations need an [amalgam] splitting")
    return build_cover_truncation(split, radius, **_oracle_options(cfg))


def _cmd_split(cfg: RunConfig, out: _Output) -> int:
    tr = _truncation(cfg, cfg.args.n)
    if tr.approximate:
        out("approximate truncation: split not computed")
        return UNDECIDED
    zplus, zminus = split_complex(tr)
    payload = {
        "format": FORMAT_VERSION, "command": "split", "radius": tr.ball.radius, "vertices": len(tr.ball),
        "gamma0": len(tr.gamma0), "x0": len(tr.x0), "y0": len(tr.y0),
        "zplus": len(zplus), "zminus": len(zminus), "intersection": len(zplus & zminus),
        "intersection_is_gamma0": (zplus & zminus) == tr.gamma0,
    }
    if cfg.output == "dot":
        out(tr.to_dot([zplus - zminus, zminus - zplus, zplus & zminus]).rstrip("\n"))
    elif cfg.output == "json":
        out.json(payload)
    else:
        for k in ("vertices", "gamma0", "x0", "y0", "zplus", "zminus", "intersection", "intersection_is_gamma0"):
            out(f"{k}: {str(payload[k]).lower() if isinstance(payload[k], bool) else payload[k]}")
    return OK


def _cmd_probe(cfg: RunConfig, out: _Output) -> int:
    a = cfg.args
    N = a.N if a.N is not None else default_horizon(a.n)
    tr = _truncation(cfg, N)
    if tr.approximate:
        out("approximate truncation: probe not computed")
        return UNDECIDED
    cuts = list(range(a.n, N - 1))
    reports, maps = probe_series(tr, cuts)
    if cfg.output == "json":
        out.json({"format": FORMAT_VERSION, "command": "probe", "horizon": N,
                  "reports": [r.to_json() for r in reports],
                  "refinement": [{k: list(v) for k, v in m.items()} for m in maps]})
    else:
        for r in reports:
            out(f"cut {r.n}: gamma components {len(r.gamma_components)}, "
                f"plus {len(r.plus_components)}/{r.plus_total}, minus {len(r.minus_components)}/{r.minus_total}")
            for row_p, row_m in zip(r.incidence_plus, r.incidence_minus):
                out("  plus " + "".join("1" if x else "0" for x in row_p)
                    + "  minus " + "".join("1" if x else "0" for x in row_m))
    return OK


_COMMANDS = {
    "reduce": _cmd_reduce,
    "abel": _cmd_abel,
    "fold": _cmd_fold,
    "member": _cmd_member,
    "index": _cmd_index,
    "nf": _cmd_nf,
    "wp": _cmd_wp,
    "hierarchy": _cmd_hierarchy,
    "ball": _cmd_ball,
    "ends": _cmd_ends,
    "split": _cmd_split,
    "probe": _cmd_probe,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output", choices=("text", "json", "dot"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-depth", type=int, default=8)
    common.add_argument("--max-ball-radius", type=int, default=12)
    common.add_argument("--oracle-length", type=int, default=12)

    parser = argparse.ArgumentParser(prog="splitgroups", description="Splittings, normal forms and ends of groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", parents=[common], help="free and cyclic reduction of a word")
    p.add_argument("--word", required=True)
    p.add_argument("--cyclic", action="store_true")

    p = sub.add_parser("abel", parents=[common], help="abelian invariants of a presentation")
    p.add_argument("file")

    for name, helptext in (("fold", "folded subgroup graph"), ("member", "subgroup membership"),
                           ("index", "subgroup index and rank")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--gen", action="append", default=[], help="subgroup generator (repeatable)")
        p.add_argument("--alphabet", default="", help="ambient free generators, e.g. 'a b'")
        if name == "member":
            p.add_argument("--word", required=True)

    p = sub.add_parser("nf", parents=[common], help="normal form in a splitting")
    p.add_argument("file")
    p.add_argument("--word", required=True)

    p = sub.add_parser("wp", parents=[common], help="word problem in a splitting or a one-relator group")
    p.add_argument("file", nargs="?")
    p.add_argument("--one-relator", metavar="FILE")
    p.add_argument("--word")
    p.add_argument("--random", type=int, default=0, metavar="K", help="test K seeded random words")
    p.add_argument("--length", type=int, default=10, help="maximum random word length")
    p.add_argument("--depth", type=int, default=5, help="recursion depth for one-relator groups")

    p = sub.add_parser("hierarchy", parents=[common], help="hierarchy certificate of a one-relator group")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("ball", parents=[common], help="Cayley ball enumeration")
    p.add_argument("file")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("ends", parents=[common], help="components of B(N) - B(n)")
    p.add_argument("file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int)
    p.add_argument("--series", action="store_true", help="report every cut below N")

    for name, helptext in (("split", "sizes of the two halves of a cover truncation"),
                           ("probe", "incidence of edge-graph components with the halves")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("file")
        p.add_argument("--n", type=int, required=True)
        if name == "probe":
            p.add_argument("--N", type=int)
    return parser


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    out = _Output()
    try:
        status = _COMMANDS[cfg.command](cfg, out)
    except _LimitHit as exc:
        stdout.write(out.text())
        stderr.write(f"limit: {exc}\n")
        return UNDECIDED
    except WordSyntaxError as exc:
        stderr.write(f"parse error at {exc}\n")
        return ERROR
    except (ValueError, PreconditionError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return ERROR
    stdout.write(out.text())
    return status


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        limits = Limits(args.max_depth, args.max_ball_radius, args.oracle_length)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return ERROR
    cfg = RunConfig(args.command, args, limits, args.output, args.seed)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
