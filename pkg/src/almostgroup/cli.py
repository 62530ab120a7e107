"""Command-line front end.

Exit status: 0 on success, 1 when an analysis is refused (a size cap was
hit, or the input is outside what the analysis handles), 2 on bad input.
Caps can be overridden with ORACLE_MAX_STATES, GROUP_MAX_ELEMENTS and
BLOCK_LATTICE_MAX.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from .automaton import (
    AutomatonError,
    StandardizeError,
    classify_shape,
    format_states,
    format_word,
    standardize,
    word_transformation,
)
from .decision import DecideOptions, TheoremViolation, decide
from .fileformat import load_automaton, serialize_automaton
from .generate import PRNG_NAME, random_almost_group, random_imprimitive_almost_group
from .groups import (
    DEFAULT_BLOCK_CAP,
    DEFAULT_GROUP_CAP,
    BlockLatticeTooLarge,
    GeneratorSet,
    GroupError,
    IncompleteGroupError,
    NotTransitiveError,
    blocks_containing,
    system_from_block,
)
from .oracle import (
    DEFAULT_MAX_STATES,
    OracleCapError,
    reachable_subsets,
    shortest_witness,
    unreachable_subsets,
    witness_length_stats,
)
from .rystsov import build_hierarchy, dot_export


class Refusal(Exception):
    pass


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    path: str | None
    oracle_max_states: int
    group_cap: int
    block_cap: int
    seed: int = 0
    json: bool = False
    dot: str | None = None

    def __post_init__(self):
        for name in ("oracle_max_states", "group_cap", "block_cap"):
            if getattr(self, name) < 1:
                raise InputError(f"{name} must be positive")


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"environment variable {name} must be an integer, got {raw!r}") from None


def parse_subset(text: str, n: int) -> frozenset[int]:
    """``{1,3}`` (1-indexed) to a set of 0-indexed states."""
    m = re.fullmatch(r"\s*\{?\s*([\d\s,]*)\}?\s*", text)
    if not m:
        raise InputError(f"malformed subset {text!r}; expected e.g. {{1,3}}")
    tokens = [t for t in re.split(r"[,\s]+", m.group(1)) if t]
    states = set()
    for t in tokens:
        q = int(t)
        if not 1 <= q <= n:
            raise InputError(f"state {q} out of range 1..{n}")
        states.add(q - 1)
    if not states:
        raise InputError("subset must be non-empty")
    return frozenset(states)


def _emit(cfg: RunConfig, payload: dict, text: str) -> None:
    if cfg.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _load(cfg: RunConfig):
    try:
        return load_automaton(cfg.path)
    except OSError as exc:
        raise InputError(f"cannot read {cfg.path}: {exc.strerror or exc}") from None


def cmd_validate(cfg: RunConfig, args) -> None:
    automaton = _load(cfg)
    shape = classify_shape(automaton)
    info = {
        "states": automaton.n,
        "letters": list(automaton.letters),
        "perm_letters": list(shape.perm_letters),
        "defect_letter": shape.defect_letter,
        "e": shape.e + 1,
        "d": shape.d + 1,
        "coll": [q + 1 for q in sorted(shape.coll)],
        "standardized": shape.standardized,
    }
    text = (
        f"ok: {automaton.n} states, letters {' '.join(automaton.letters)}\n"
        f"permutation letters: {' '.join(shape.perm_letters) or '(none)'}\n"
        f"defect letter: {shape.defect_letter}  excl={shape.e + 1}  dupl={shape.d + 1}  "
        f"coll={format_states(shape.coll)}  standardized={'yes' if shape.standardized else 'no'}"
    )
    _emit(cfg, info, text)


def _options(cfg: RunConfig, oracle_fallback=True) -> DecideOptions:
    return DecideOptions(
        oracle_fallback=oracle_fallback,
        group_cap=cfg.group_cap,
        block_cap=cfg.block_cap,
        oracle_max_states=cfg.oracle_max_states,
    )


def cmd_decide(cfg: RunConfig, args) -> None:
    automaton = _load(cfg)
    verdict, report = decide(automaton, _options(cfg, not args.no_oracle_fallback))
    text = verdict.describe()
    for w in report.warnings:
        text += f"\nwarning: {w}"
    _emit(cfg, verdict.to_dict(), text)


def _report_text(report) -> str:
    lines = [f"states: {report.states}", f"letters: {' '.join(report.letters)}"]
    s = report.shape
    if s:
        lines.append(
            f"defect letter {s['defect_letter']}: e={s['e']} d={s['d']} "
            f"coll={{{','.join(map(str, s['coll']))}}} standardized={'yes' if s['standardized'] else 'no'}"
        )
    if report.standardization_witness is not None:
        lines.append(f"standardization word: {report.standardization_witness or 'ε'}")
    if report.transitive is not None:
        lines.append(f"transitive: {'yes' if report.transitive else 'no'}")
    if report.blocks is not None:
        shown = ", ".join("{" + ",".join(map(str, b)) + "}" for b in report.blocks) or "(none)"
        lines.append(f"nontrivial blocks containing e: {shown}")
    for lv in report.levels:
        lines.append(
            f"level {lv['level']}: {len(lv['vertices'])} vertices, {lv['edge_count']} edges "
            f"({lv['new_edge_count']} new), components {' '.join(lv['components'])}"
        )
    if report.stop_reason:
        lines.append(f"stopped: {report.stop_reason}")
    for c in report.core_checks:
        lines.append(
            f"core at level {c['level']}: block {{{','.join(map(str, c['block']))}}}, "
            f"order {c['core_order']}, transitive {'yes' if c['core_transitive'] else 'no'}"
        )
    for w in report.warnings:
        lines.append(f"warning: {w}")
    if report.verdict:
        lines.append(f"verdict: {report.verdict.describe()}")
    return "\n".join(lines)


def cmd_analyze(cfg: RunConfig, args) -> None:
    automaton = _load(cfg)
    _, report = decide(automaton, _options(cfg))
    _emit(cfg, report.to_dict(), _report_text(report))


def cmd_oracle(cfg: RunConfig, args) -> None:
    automaton = _load(cfg)
    table = reachable_subsets(automaton, cfg.oracle_max_states)
    total = (1 << automaton.n) - 1
    payload = {"states": automaton.n, "reachable": table.count, "nonempty_subsets": total,
               "completely_reachable": table.count == total}
    lines = [f"reachable non-empty subsets: {table.count} of {total}",
             "completely reachable" if table.count == total else "not completely reachable"]
    if args.list_unreachable:
        missing = unreachable_subsets(table, args.list_unreachable)
        payload["unreachable"] = [[q + 1 for q in sorted(s)] for s in missing]
        lines += [f"unreachable: {format_states(s)}" for s in missing]
    if args.witness:
        target = parse_subset(args.witness, automaton.n)
        if not table.is_reachable(target):
            raise Refusal(f"subset {format_states(target)} is not reachable")
        word = shortest_witness(table, target)
        assert word_transformation(automaton, word).apply_set(range(automaton.n)) == target
        payload["witness"] = {"subset": [q + 1 for q in sorted(target)], "word": list(word)}
        lines.append(f"witness for {format_states(target)}: {format_word(word) or 'ε'} (length {len(word)})")
    if args.stats:
        stats = witness_length_stats(table)
        payload["witness_stats"] = {
            "max_length_by_size": {str(k): v for k, v in stats.maxima.items()},
            "bound_violations": list(stats.violations),
        }
        for k, v in stats.maxima.items():
            flag = "  VIOLATES 2n(n-k)" if k in stats.violations else ""
            lines.append(f"size {k}: longest shortest witness {v} (bound {stats.bound(k)}){flag}")
        if stats.violations:
            print(f"warning: witness bound 2n(n-k) exceeded for sizes {list(stats.violations)}",
                  file=sys.stderr)
    _emit(cfg, payload, "\n".join(lines))


def _standardized(automaton):
    shape = classify_shape(automaton)
    try:
        std, u = standardize(automaton, shape)
    except StandardizeError as exc:
        raise Refusal(str(exc)) from None
    return std, classify_shape(std), u


def cmd_rystsov(cfg: RunConfig, args) -> None:
    automaton = _load(cfg)
    std, shape, u = _standardized(automaton)
    hierarchy = build_hierarchy(std, shape)
    levels = hierarchy.levels
    if args.level is not None and not 1 <= args.level <= len(levels):
        raise InputError(f"level {args.level} not built; have 1..{len(levels)}")
    chosen = levels if args.level is None else [levels[args.level - 1]]
    lines = []
    if u:
        lines.append(f"standardized with word {format_word(u)}")
    for level in chosen:
        s = level.summary()
        lines.append(f"level {level.k}: {len(level.vertices)} vertices, {len(level.edges)} edges")
        lines.append(f"  vertices: {' '.join(s['vertices'])}")
        lines.append(f"  components: {' '.join(s['components'])}")
        lines.append(f"  component of e: {s['ce_foliage']}")
    lines.append(f"stopped at level {hierarchy.final.k}: {hierarchy.stop_reason.value}")
    if cfg.dot:
        target = levels[(args.level or len(levels)) - 1]
        Path(cfg.dot).write_text(dot_export(target, labels=args.labels), encoding="utf-8")
        lines.append(f"wrote level {target.k} to {cfg.dot}")
    payload = {
        "standardization_witness": format_word(u),
        "levels": [lv.summary() for lv in chosen],
        "stop_reason": hierarchy.stop_reason.value,
        "final_level": hierarchy.final.k,
    }
    _emit(cfg, payload, "\n".join(lines))


def cmd_blocks(cfg: RunConfig, args) -> None:
    automaton = _load(cfg)
    shape = classify_shape(automaton)
    gens = GeneratorSet.from_automaton(automaton, shape)
    if args.system:
        block = parse_subset(args.system, automaton.n)
        system = system_from_block(gens, block)
        payload = {"system": [[q + 1 for q in sorted(b)] for b in system.blocks]}
        _emit(cfg, payload, "\n".join(format_states(b) for b in system.blocks))
        return
    blocks = blocks_containing(gens, shape.e, include_trivial=args.all, cap=cfg.block_cap)
    payload = {"e": shape.e + 1, "blocks": [[q + 1 for q in sorted(b)] for b in blocks]}
    _emit(cfg, payload, "\n".join(format_states(b) for b in blocks))


def _generate(args, seed):
    if args.block_size:
        return random_imprimitive_almost_group(
            args.states, args.perms, args.block_size, seed, args.post_permute, args.inner
        )
    return random_almost_group(args.states, args.perms, seed, args.post_permute)


def cmd_random(cfg: RunConfig, args) -> None:
    if args.count is None:
        automaton = _generate(args, cfg.seed)
        text = f"# random almost-group automaton, seed {cfg.seed}, {PRNG_NAME}\n"
        text += serialize_automaton(automaton)
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return
    rows = []
    for seed in range(cfg.seed, cfg.seed + args.count):
        automaton = _generate(args, seed)
        row = {"seed": seed}
        if args.decide:
            verdict, _ = decide(automaton, _options(cfg))
            row.update(verdict.to_dict())
        else:
            row["automaton"] = serialize_automaton(automaton)
        rows.append(row)
    if cfg.json:
        print(json.dumps(rows, indent=2, sort_keys=True))
        return
    for row in rows:
        if args.decide:
            print(f"seed {row['seed']}: {row['description']}")
        else:
            print(f"# seed {row['seed']}\n{row['automaton']}", end="")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--oracle-max-states", type=int, default=None)
    common.add_argument("--group-cap", type=int, default=None)
    common.add_argument("--block-cap", type=int, default=None)

    parser = argparse.ArgumentParser(
        prog="almostgroup",
        description="Complete reachability of almost-group automata.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="parse a file and classify its alphabet")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("decide", parents=[common], help="decide complete reachability")
    p.add_argument("file")
    p.add_argument("--no-oracle-fallback", action="store_true")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("analyze", parents=[common], help="print the full pipeline report")
    p.add_argument("file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("oracle", parents=[common], help="exhaustive subset reachability")
    p.add_argument("file")
    p.add_argument("--list-unreachable", type=int, metavar="N", default=0)
    p.add_argument("--witness", metavar="SUBSET")
    p.add_argument("--stats", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("rystsov", parents=[common], help="build the Rystsov graph hierarchy")
    p.add_argument("file")
    p.add_argument("--level", type=int)
    p.add_argument("--dot", metavar="OUT")
    p.add_argument("--labels", action="store_true", help="label DOT edges with witness words")
    p.set_defaults(func=cmd_rystsov)

    p = sub.add_parser("blocks", parents=[common], help="blocks of the permutation group through e")
    p.add_argument("file")
    p.add_argument("--all", action="store_true", help="include the trivial blocks")
    p.add_argument("--system", metavar="BLOCK", help="print the block system generated by BLOCK")
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("random", parents=[common], help="generate random almost-group automata")
    p.add_argument("--states", "-n", type=int, required=True)
    p.add_argument("--perms", "-m", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--post-permute", action="store_true")
    p.add_argument("--block-size", type=int)
    p.add_argument("--inner", choices=("symmetric", "dihedral"), default="symmetric")
    p.add_argument("--count", type=int)
    p.add_argument("--decide", action="store_true")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_random)
    return parser


def _config(args) -> RunConfig:
    def cap(value, env, default):
        return value if value is not None else _env_int(env, default)

    return RunConfig(
        subcommand=args.command,
        path=getattr(args, "file", None),
        oracle_max_states=cap(args.oracle_max_states, "ORACLE_MAX_STATES", DEFAULT_MAX_STATES),
        group_cap=cap(args.group_cap, "GROUP_MAX_ELEMENTS", DEFAULT_GROUP_CAP),
        block_cap=cap(args.block_cap, "BLOCK_LATTICE_MAX", DEFAULT_BLOCK_CAP),
        seed=getattr(args, "seed", 0),
        json=args.json,
        dot=getattr(args, "dot", None),
    )


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = _config(args)
        args.func(cfg, args)
    except (Refusal, OracleCapError, BlockLatticeTooLarge, IncompleteGroupError,
            NotTransitiveError, StandardizeError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    except TheoremViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    except (InputError, AutomatonError, GroupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())
