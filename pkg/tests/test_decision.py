import json

import pytest

from almostgroup.automaton import Automaton, Transformation, classify_shape, standardize
from almostgroup.decision import (
    Answer,
    DecideOptions,
    DecidedBy,
    TheoremViolation,
    Verdict,
    core_invariance_check,
    decide,
    necessary_check,
    sufficient_check,
)
from almostgroup.groups import GeneratorSet, blocks_containing, is_primitive
from almostgroup.oracle import is_completely_reachable_bruteforce
from almostgroup.rystsov import build_hierarchy

from helpers import (
    c4_instance,
    e18,
    hoffman_corpus,
    mixed_corpus,
    nonstandard_corpus,
    standardized_transitive,
)


def parts(A):
    shape = classify_shape(A)
    return A, shape, GeneratorSet.from_automaton(A, shape)


def test_e18_decided_by_level_two():
    verdict, report = decide(e18())
    assert verdict.answer is Answer.COMPLETELY_REACHABLE
    assert verdict.decided_by is DecidedBy.STRONGLY_CONNECTED_LEVEL
    assert verdict.level == 2
    assert verdict.describe() == "completely reachable (strongly connected at level 2)"
    assert report.blocks == [[1, 5], [1, 2, 3, 4, 5, 6]]
    assert report.stop_reason == "strongly-connected"
    assert report.core_checks == []
    json.dumps(report.to_dict())


def test_c4_invariant_block():
    verdict, _ = decide(c4_instance())
    assert verdict.answer is Answer.NOT_COMPLETELY_REACHABLE
    assert verdict.decided_by is DecidedBy.INVARIANT_BLOCK
    assert verdict.evidence["block"] == [1, 3]
    assert verdict.evidence["unreachable"] == [2, 4]
    assert frozenset({1, 3}) in is_completely_reachable_bruteforce(c4_instance())[1]


def test_necessary_check_passes_e18():
    A, shape, gens = parts(e18())
    a = A.letter("a")
    for block in blocks_containing(gens, shape.e):
        assert not a.apply_set(block) <= block
    assert necessary_check(A, shape, gens) is None


def test_intransitive_group():
    a = Transformation([1, 1, 2, 3])
    b = Transformation([1, 0, 2, 3])
    A = Automaton(4, (("a", a), ("b", b)))
    verdict, report = decide(A)
    assert verdict.decided_by is DecidedBy.TRANSITIVITY
    assert not verdict.completely_reachable
    assert report.transitive is False
    missing = frozenset(q - 1 for q in verdict.evidence["unreachable"])
    assert missing in is_completely_reachable_bruteforce(A)[1]
    _, shape, gens = parts(A)
    assert necessary_check(A, shape, gens).decided_by is DecidedBy.TRANSITIVITY


def test_primitive_instance_level_one():
    swap = Transformation([1, 0, 2, 3, 4])
    cycle = Transformation([1, 2, 3, 4, 0])
    A = Automaton(5, (("a", Transformation([1, 1, 2, 3, 4])), ("s", swap), ("r", cycle)))
    verdict, _ = decide(A)
    assert verdict.decided_by is DecidedBy.STRONGLY_CONNECTED_LEVEL and verdict.level == 1
    assert is_completely_reachable_bruteforce(A)[0]


def test_sufficient_check():
    A, shape, _ = parts(e18())
    assert sufficient_check(build_hierarchy(A, shape)).level == 2
    C, cshape, _ = parts(c4_instance())
    assert sufficient_check(build_hierarchy(C, cshape)) is None


def test_core_check_on_c4():
    A, shape, gens = parts(c4_instance())
    record = []
    verdict = core_invariance_check(A, shape, gens, build_hierarchy(A, shape), record=record)
    assert verdict.decided_by is DecidedBy.CORE_TRANSITIVE_INVARIANCE
    assert verdict.evidence["block"] == [1, 3]
    assert record[0] == {
        "level": 1,
        "block": [1, 3],
        "system_size": 2,
        "core_order": 2,
        "core_transitive": True,
    }


def test_core_check_refuses_strongly_connected():
    A, shape, gens = parts(e18())
    with pytest.raises(ValueError):
        core_invariance_check(A, shape, gens, build_hierarchy(A, shape))


def test_theorem_violation_is_raised(monkeypatch):
    A, shape, gens = parts(c4_instance())
    h = build_hierarchy(A, shape)
    fake = Transformation([1, 1, 2, 3])  # moves the e-component off itself
    monkeypatch.setattr(Automaton, "letter", lambda self, name: fake)
    with pytest.raises(TheoremViolation):
        core_invariance_check(A, shape, gens, h)


def test_caps_route_to_core_check_then_oracle_then_inconclusive():
    A = c4_instance()
    v, r = decide(A, DecideOptions(block_cap=0))
    assert v.decided_by is DecidedBy.CORE_TRANSITIVE_INVARIANCE and v.level == 2
    assert r.warnings and "necessary check skipped" in r.warnings[0]

    v, r = decide(A, DecideOptions(block_cap=0, group_cap=1))
    assert v.decided_by is DecidedBy.ORACLE
    assert v.evidence["unreachable_count"] == 6
    assert v.describe() == "not completely reachable (oracle, 6 unreachable subsets)"

    v, _ = decide(A, DecideOptions(block_cap=0, group_cap=1, oracle_fallback=False))
    assert v.answer is Answer.INCONCLUSIVE and v.completely_reachable is None
    assert v.to_dict()["decided_by"] is None


def test_oracle_wording_for_cr():
    v = Verdict(Answer.COMPLETELY_REACHABLE, DecidedBy.ORACLE, evidence={"unreachable_count": 0})
    assert v.describe() == "completely reachable (oracle)"


def test_soundness_against_oracle():
    for A in mixed_corpus():
        verdict, _ = decide(A)
        assert verdict.decided_by is not DecidedBy.ORACLE
        assert verdict.completely_reachable == is_completely_reachable_bruteforce(A)[0]


def test_ordering_insensitivity():
    # whenever an invariant block is found, the later stages never claim CR
    for A in mixed_corpus():
        verdict, _ = decide(A)
        if verdict.decided_by is not DecidedBy.INVARIANT_BLOCK:
            continue
        std, shape = standardized_transitive(A)
        gens = GeneratorSet.from_automaton(std, shape)
        h = build_hierarchy(std, shape)
        assert sufficient_check(h) is None
        later = core_invariance_check(std, shape, gens, h)
        assert later is None or later.answer is Answer.NOT_COMPLETELY_REACHABLE


def test_hoffman_property():
    for A in hoffman_corpus():
        shape = classify_shape(A)
        assert is_primitive(GeneratorSet.from_automaton(A, shape))
        verdict, report = decide(A)
        assert verdict.decided_by is DecidedBy.STRONGLY_CONNECTED_LEVEL and verdict.level == 1
        assert report.levels[0]["strongly_connected"]


def test_standardization_neutrality():
    for A in nonstandard_corpus():
        std, _ = standardize(A, classify_shape(A))
        v1, _ = decide(A)
        v2, _ = decide(std)
        assert v1.completely_reachable == v2.completely_reachable
        assert is_completely_reachable_bruteforce(A)[0] == is_completely_reachable_bruteforce(std)[0]


def test_oracle_branch_search_documents_findings():
    # Open region: no invariant block through e, hierarchy stalls, some core
    # is not transitive. The fixed corpus contains no such instance; the count
    # is frozen so a change in behaviour shows up here.
    inconclusive = 0
    for A in mixed_corpus():
        verdict, _ = decide(A, DecideOptions(oracle_fallback=False))
        if verdict.answer is Answer.INCONCLUSIVE:
            inconclusive += 1
    assert inconclusive == 0
