"""Complete-reachability verdicts for almost-group automata.

The pipeline tries, in order: transitivity of the permutation group, an
a-invariant block through ``e``, strong connectivity of the Rystsov graph,
and a-invariance of the final e-component under core transitivity. What the
theory leaves open goes to the power-set oracle, or is reported as
inconclusive when the fallback is off.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Any

from .automaton import (
    AlmostGroupShape,
    Automaton,
    StateSet,
    classify_shape,
    format_states,
    format_word,
    standardize,
)
from .groups import (
    DEFAULT_BLOCK_CAP,
    DEFAULT_GROUP_CAP,
    BlockLatticeTooLarge,
    GeneratorSet,
    blocks_containing,
    core_of_system,
    enumerate_group,
    is_core_transitive_on,
    orbit,
    system_from_block,
)
from .oracle import reachable_subsets, unreachable_subsets
from .rystsov import RystsovHierarchy, StopReason, build_hierarchy

log = logging.getLogger(__name__)


class Answer(enum.Enum):
    COMPLETELY_REACHABLE = "completely-reachable"
    NOT_COMPLETELY_REACHABLE = "not-completely-reachable"
    INCONCLUSIVE = "inconclusive"


class DecidedBy(enum.Enum):
    TRANSITIVITY = "transitivity"
    INVARIANT_BLOCK = "invariant-block"
    STRONGLY_CONNECTED_LEVEL = "strongly-connected-level"
    CORE_TRANSITIVE_INVARIANCE = "core-transitive-invariance"
    ORACLE = "oracle"


class TheoremViolation(RuntimeError):
    """Core transitivity held at every level but the e-component is not a-invariant."""


def _states(states) -> list[int]:
    return [q + 1 for q in sorted(states)]


@dataclass(frozen=True)
class Verdict:
    answer: Answer
    decided_by: DecidedBy | None
    level: int | None = None
    evidence: dict[str, Any] = field(default_factory=dict)

    @property
    def completely_reachable(self) -> bool | None:
        if self.answer is Answer.INCONCLUSIVE:
            return None
        return self.answer is Answer.COMPLETELY_REACHABLE

    def describe(self) -> str:
        ev = self.evidence
        if self.answer is Answer.INCONCLUSIVE:
            return "inconclusive under the block theory (oracle fallback disabled)"
        head = "completely reachable" if self.completely_reachable else "not completely reachable"
        by = self.decided_by
        if by is DecidedBy.STRONGLY_CONNECTED_LEVEL:
            why = f"strongly connected at level {self.level}"
        elif by is DecidedBy.TRANSITIVITY:
            why = "permutation group is not transitive"
        elif by is DecidedBy.INVARIANT_BLOCK:
            why = f"block {ev['block_text']} is invariant under {ev['letter']}"
        elif by is DecidedBy.CORE_TRANSITIVE_INVARIANCE:
            why = f"core-transitive invariance at level {self.level}, block {ev['block_text']}"
        elif self.completely_reachable:
            why = "oracle"
        else:
            why = f"oracle, {ev['unreachable_count']} unreachable subsets"
        return f"{head} ({why})"

    def to_dict(self) -> dict:
        return {
            "answer": self.answer.value,
            "decided_by": self.decided_by.value if self.decided_by else None,
            "level": self.level,
            "evidence": self.evidence,
            "description": self.describe(),
        }


@dataclass
class DecideOptions:
    oracle_fallback: bool = True
    group_cap: int = DEFAULT_GROUP_CAP
    block_cap: int = DEFAULT_BLOCK_CAP
    oracle_max_states: int | None = None
    unreachable_sample: int = 10


@dataclass
class PipelineReport:
    states: int
    letters: list[str]
    shape: dict | None = None
    standardization_witness: str | None = None
    transitive: bool | None = None
    blocks: list[list[int]] | None = None
    levels: list[dict] = field(default_factory=list)
    stop_reason: str | None = None
    core_checks: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    verdict: Verdict | None = None

    def to_dict(self) -> dict:
        return {
            "states": self.states,
            "letters": self.letters,
            "shape": self.shape,
            "standardization_witness": self.standardization_witness,
            "transitive": self.transitive,
            "blocks": self.blocks,
            "levels": self.levels,
            "stop_reason": self.stop_reason,
            "core_checks": self.core_checks,
            "warnings": self.warnings,
            "verdict": self.verdict.to_dict() if self.verdict else None,
        }


def _transitivity_verdict(gens: GeneratorSet, shape: AlmostGroupShape) -> Verdict | None:
    reached, _ = orbit(gens, shape.e)
    if len(reached) == gens.n:
        return None
    q = min(set(range(gens.n)) - reached)
    missing = frozenset(range(gens.n)) - {q}
    return Verdict(
        Answer.NOT_COMPLETELY_REACHABLE,
        DecidedBy.TRANSITIVITY,
        evidence={
            "orbit_of_e": _states(reached),
            "unreachable": _states(missing),
            "unreachable_text": format_states(missing),
        },
    )


def _invariant_block_verdict(automaton, shape, block: StateSet, by, level=None) -> Verdict:
    complement = frozenset(range(automaton.n)) - block
    return Verdict(
        Answer.NOT_COMPLETELY_REACHABLE,
        by,
        level,
        evidence={
            "block": _states(block),
            "block_text": format_states(block),
            "letter": shape.defect_letter,
            "unreachable": _states(complement),
            "unreachable_text": format_states(complement),
        },
    )


def necessary_check(
    automaton: Automaton,
    shape: AlmostGroupShape,
    gens: GeneratorSet,
    block_cap: int = DEFAULT_BLOCK_CAP,
    warnings: list[str] | None = None,
) -> Verdict | None:
    """Reject when the group is intransitive or some nontrivial block through
    ``e`` is mapped into itself by the defect letter; the complement of such
    a block is unreachable. Returns ``None`` when the check passes."""
    verdict = _transitivity_verdict(gens, shape)
    if verdict is not None:
        return verdict
    a = automaton.letter(shape.defect_letter)
    try:
        blocks = blocks_containing(gens, shape.e, include_trivial=False, cap=block_cap)
    except BlockLatticeTooLarge as exc:
        msg = f"necessary check skipped: {exc}"
        log.warning(msg)
        if warnings is not None:
            warnings.append(msg)
        return None
    for block in blocks:
        if a.apply_set(block) <= block:
            return _invariant_block_verdict(automaton, shape, block, DecidedBy.INVARIANT_BLOCK)
    return None


def sufficient_check(hierarchy: RystsovHierarchy) -> Verdict | None:
    if hierarchy.stop_reason is StopReason.STRONGLY_CONNECTED:
        k = hierarchy.final.k
        return Verdict(
            Answer.COMPLETELY_REACHABLE,
            DecidedBy.STRONGLY_CONNECTED_LEVEL,
            k,
            evidence={
                "level": k,
                "max_defect": k,
                "components": [c for c in hierarchy.final.summary()["vertices"]],
            },
        )
    return None


def core_invariance_check(
    automaton: Automaton,
    shape: AlmostGroupShape,
    gens: GeneratorSet,
    hierarchy: RystsovHierarchy,
    group_cap: int = DEFAULT_GROUP_CAP,
    warnings: list[str] | None = None,
    record: list[dict] | None = None,
) -> Verdict | None:
    """When every e-component's block system has a core transitive on it,
    the final e-component is a-invariant, so its complement is unreachable.

    Raises :class:`TheoremViolation` if the hypotheses hold and the
    invariance does not.
    """
    if hierarchy.stop_reason is StopReason.STRONGLY_CONNECTED:
        raise ValueError("core check needs a hierarchy that is not strongly connected")
    elems = enumerate_group(gens, group_cap)
    if not elems.complete:
        msg = f"core check skipped: group has more than {group_cap} elements"
        log.warning(msg)
        if warnings is not None:
            warnings.append(msg)
        return None
    all_transitive = True
    for level in hierarchy.levels:
        block = level.ce_foliage
        system = system_from_block(gens, block)
        core = core_of_system(elems, system)
        ok = is_core_transitive_on(core, block)
        if record is not None:
            record.append(
                {
                    "level": level.k,
                    "block": _states(block),
                    "system_size": len(system.blocks),
                    "core_order": len(core),
                    "core_transitive": ok,
                }
            )
        if not ok:
            all_transitive = False
            break
    if not all_transitive:
        return None
    final = hierarchy.final
    block = final.ce_foliage
    a = automaton.letter(shape.defect_letter)
    if not a.apply_set(block) <= block:
        raise TheoremViolation(
            f"cores are transitive through level {final.k} but "
            f"{format_states(block)} is not invariant under {shape.defect_letter}"
        )
    return _invariant_block_verdict(
        automaton, shape, block, DecidedBy.CORE_TRANSITIVE_INVARIANCE, final.k
    )


def _oracle_verdict(automaton: Automaton, options: DecideOptions) -> Verdict:
    table = reachable_subsets(automaton, options.oracle_max_states)
    missing = (1 << automaton.n) - 1 - table.count
    if not missing:
        return Verdict(Answer.COMPLETELY_REACHABLE, DecidedBy.ORACLE, evidence={"unreachable_count": 0})
    sample = unreachable_subsets(table, options.unreachable_sample)
    return Verdict(
        Answer.NOT_COMPLETELY_REACHABLE,
        DecidedBy.ORACLE,
        evidence={
            "unreachable_count": missing,
            "unreachable_sample": [_states(s) for s in sample],
        },
    )


def decide(
    automaton: Automaton, options: DecideOptions | None = None
) -> tuple[Verdict, PipelineReport]:
    options = options or DecideOptions()
    report = PipelineReport(automaton.n, list(automaton.letters))

    def done(verdict: Verdict):
        report.verdict = verdict
        return verdict, report

    shape = classify_shape(automaton)
    report.shape = _shape_dict(shape)
    gens = GeneratorSet.from_automaton(automaton, shape)
    verdict = _transitivity_verdict(gens, shape)
    report.transitive = verdict is None
    if verdict is not None:
        return done(verdict)

    std, u = standardize(automaton, shape)
    report.standardization_witness = format_word(u)
    std_shape = classify_shape(std)

    try:
        blocks = blocks_containing(gens, std_shape.e, cap=options.block_cap)
        report.blocks = [_states(b) for b in blocks]
    except BlockLatticeTooLarge:
        pass
    verdict = necessary_check(std, std_shape, gens, options.block_cap, report.warnings)
    if verdict is not None:
        return done(verdict)

    hierarchy = build_hierarchy(std, std_shape)
    report.levels = [level.summary() for level in hierarchy.levels]
    report.stop_reason = hierarchy.stop_reason.value
    verdict = sufficient_check(hierarchy)
    if verdict is not None:
        return done(verdict)

    verdict = core_invariance_check(
        std, std_shape, gens, hierarchy, options.group_cap, report.warnings, report.core_checks
    )
    if verdict is not None:
        return done(verdict)

    if not options.oracle_fallback:
        return done(Verdict(Answer.INCONCLUSIVE, None))
    return done(_oracle_verdict(automaton, options))


def _shape_dict(shape: AlmostGroupShape) -> dict:
    return {
        "perm_letters": list(shape.perm_letters),
        "defect_letter": shape.defect_letter,
        "e": shape.e + 1,
        "d": shape.d + 1,
        "coll": _states(shape.coll),
        "standardized": shape.standardized,
    }
