"""Acceptance gate: ten criteria, each reported as one PASS/FAIL line."""

import resource
import time

import pytest

from almostgroup.automaton import (
    Transformation,
    classify_shape,
    coll,
    dupl,
    standardize,
)
from almostgroup.decision import Answer, DecidedBy, decide
from almostgroup.groups import GeneratorSet, blocks_containing
from almostgroup.oracle import (
    is_completely_reachable_bruteforce,
    reachable_subsets,
    witness_length_stats,
)
from almostgroup.rystsov import (
    DefectProfile,
    StopReason,
    build_hierarchy,
    foliage_system_check,
    profile_of,
    profile_step,
    reachable_profiles,
    translated_edges_check,
)
from almostgroup.generate import random_almost_group

from helpers import (
    c4_instance,
    e18,
    group_closure,
    hoffman_corpus,
    is_block_bruteforce,
    mixed_corpus,
    nonstandard_corpus,
    standardized_transitive,
    states,
)


def detail(record, text):
    record("detail", text)


@pytest.fixture(scope="module")
def corpus_runs():
    """Criterion 5's corpus: each instance with its verdict and, when the
    pipeline built one, the standardized automaton and hierarchy."""
    runs = []
    for A in mixed_corpus(200, (4, 5, 6, 7, 8)):
        verdict, _ = decide(A)
        std = standardized_transitive(A)
        hierarchy = None
        if std is not None:
            hierarchy = build_hierarchy(*std)
        runs.append((A, verdict, std, hierarchy))
    return runs


@pytest.mark.criterion(1, "E18 regression")
def test_criterion_01_e18_regression(record_property):
    t0 = time.perf_counter()
    A = e18()
    shape = classify_shape(A)
    a = A.letter("a")
    assert (shape.e, shape.d, shape.coll) == (0, 5, states(1, 5))
    assert dupl(a) == states(6) and coll(a) == states(1, 5)

    gens = GeneratorSet.from_automaton(A, shape)
    assert blocks_containing(gens, shape.e) == [states(1, 5), states(1, 2, 3, 4, 5, 6)]

    h = build_hierarchy(A, shape)
    one = h.level(1)
    assert {x.target for x in one.edges if x.source == 0} == states(6, 5, 3)
    assert [one.scc_foliage(i) for i in range(len(one.sccs))] == [
        states(1, 2, 3, 4, 5, 6),
        states(7, 8, 9, 10, 11, 12),
        states(13, 14, 15, 16, 17, 18),
    ]
    two = h.level(2)
    assert h.stop_reason is StopReason.STRONGLY_CONNECTED and h.final is two
    assert two.is_strongly_connected

    # the three-cycle C_e -> B2 -> B3 -> C_e and its witness profiles
    profiles = reachable_profiles(A, shape, 2)
    foliage = [v.foliage for v in two.vertices]
    cycle = [
        (0, 1, DefectProfile(states(1, 3), states(8, 6))),
        (1, 2, DefectProfile(states(11, 12), states(9, 16))),
        (2, 0, DefectProfile(states(13, 15), states(18, 2))),
    ]
    for src, dst, prof in cycle:
        assert prof in profiles
        assert prof.defect == 2 and prof.excl <= foliage[src] and prof.dupl & foliage[dst]
        assert (src, dst) in two.edge_pairs()

    verdict, _ = decide(A)
    assert verdict.answer is Answer.COMPLETELY_REACHABLE
    assert verdict.decided_by is DecidedBy.STRONGLY_CONNECTED_LEVEL and verdict.level == 2
    elapsed = time.perf_counter() - t0
    assert elapsed < 10
    detail(record_property, f"all values exact, {elapsed:.2f} s")


@pytest.mark.criterion(2, "E18 oracle confirmation")
def test_criterion_02_e18_oracle(record_property):
    t0 = time.perf_counter()
    table = reachable_subsets(e18())
    elapsed = time.perf_counter() - t0
    peak_mb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024
    assert table.count == 262143 == 2**18 - 1
    assert elapsed < 300
    assert peak_mb < 2048
    detail(record_property, f"262143 subsets, {elapsed:.2f} s, process peak {peak_mb:.0f} MB")


@pytest.mark.criterion(3, "invariant-block instance")
def test_criterion_03_invariant_block(record_property):
    A = c4_instance()
    assert A.letter("a") == Transformation([2, 1, 2, 3])
    verdict, _ = decide(A)
    assert verdict.answer is Answer.NOT_COMPLETELY_REACHABLE
    assert verdict.decided_by is DecidedBy.INVARIANT_BLOCK
    assert verdict.evidence["block"] == [1, 3]  # {0,2} zero-indexed
    ok, missing = is_completely_reachable_bruteforce(A)
    assert not ok and frozenset({1, 3}) in missing
    detail(record_property, f"block {{0,2}}, {len(missing)} unreachable subsets including {{1,3}}")


def _fold_all_words(A, max_len):
    """Depth-first over all words up to ``max_len``, carrying both the
    composed transformation and the folded profile; returns mismatch count."""
    letters = list(A.alphabet)
    n = A.n
    mismatches = 0
    checked = 0
    stack = [(0, tuple(range(n)), DefectProfile(frozenset(), frozenset()))]
    while stack:
        length, images, prof = stack.pop()
        checked += 1
        if profile_of(Transformation(images)) != prof:
            mismatches += 1
        if length == max_len:
            continue
        for _, t in letters:
            stack.append((length + 1, tuple(t[x] for x in images), profile_step(prof, t)))
    return mismatches, checked


@pytest.mark.criterion(4, "profile soundness")
def test_criterion_04_profile_soundness(record_property):
    total = bad = 0
    for i in range(50):
        n = 3 + i % 4
        A = random_almost_group(n, 1 + i % 2, 4000 + i, post_permute=bool(i % 3))
        m, c = _fold_all_words(A, 8)
        bad += m
        total += c
    assert bad == 0
    detail(record_property, f"50 instances, {total} words, 0 mismatches")


@pytest.mark.criterion(5, "theory-oracle agreement")
def test_criterion_05_agreement(corpus_runs, record_property):
    assert len(corpus_runs) == 200
    assert {A.n for A, *_ in corpus_runs} == {4, 5, 6, 7, 8}
    disagreements = 0
    by_branch: dict[str, int] = {}
    for A, verdict, _, _ in corpus_runs:
        name = verdict.decided_by.value
        by_branch[name] = by_branch.get(name, 0) + 1
        if verdict.decided_by is DecidedBy.ORACLE:
            continue
        if verdict.completely_reachable != is_completely_reachable_bruteforce(A)[0]:
            disagreements += 1
    assert disagreements == 0
    shown = ", ".join(f"{k} {v}" for k, v in sorted(by_branch.items()))
    detail(record_property, f"200 instances, 0 disagreements ({shown})")


@pytest.mark.criterion(6, "foliage block systems")
def test_criterion_06_foliage_systems(corpus_runs, record_property):
    levels = failures = 0
    for _, _, std, h in corpus_runs:
        if h is None:
            continue
        A, shape = std
        gens = GeneratorSet.from_automaton(A, shape)
        elems = group_closure(A.n, [p.images for p in gens.perms])
        for level in h.levels:
            levels += 1
            foliages = [v.foliage for v in level.vertices]
            partition = sum(len(f) for f in foliages) == A.n and frozenset().union(*foliages) == set(range(A.n))
            blocks = all(is_block_bruteforce(elems, f) for f in foliages)
            if not (partition and blocks and foliage_system_check(level, gens)):
                failures += 1
    assert levels > 0 and failures == 0
    detail(record_property, f"{levels} levels, 0 failures")


@pytest.mark.criterion(7, "level-1 edge translation")
def test_criterion_07_translated_edges(corpus_runs, record_property):
    count = failures = 0
    for _, _, std, h in corpus_runs:
        if h is None:
            continue
        A, shape = std
        count += 1
        if not translated_edges_check(h.level(1), GeneratorSet.from_automaton(A, shape)):
            failures += 1
    assert count > 0 and failures == 0
    detail(record_property, f"{count} standardized transitive instances, 0 failures")


@pytest.mark.criterion(8, "Hoffman property")
def test_criterion_08_hoffman(record_property):
    corpus = hoffman_corpus(50)
    assert {A.n for A in corpus} == {4, 5, 6, 7, 8}
    failures = 0
    for A in corpus:
        verdict, report = decide(A)
        ok = (
            verdict.answer is Answer.COMPLETELY_REACHABLE
            and report.levels
            and report.levels[0]["strongly_connected"]
        )
        failures += not ok
    assert failures == 0
    detail(record_property, "50 instances, all CR with level 1 strongly connected")


@pytest.mark.criterion(9, "word-length bound 2n(n-k)")
def test_criterion_09_witness_bound(corpus_runs, record_property):
    count = 0
    violations = []
    for A, *_ in corpus_runs:
        if A.n > 7:
            continue
        table = reachable_subsets(A)
        if table.count != (1 << A.n) - 1:
            continue
        count += 1
        stats = witness_length_stats(table)
        violations += [(A, k) for k in stats.violations]
    assert count > 0
    assert not violations, f"bound 2n(n-k) exceeded: {violations[:3]}"
    detail(record_property, f"{count} completely reachable instances, 0 violations")


@pytest.mark.criterion(10, "standardization neutrality")
def test_criterion_10_standardization(record_property):
    corpus = nonstandard_corpus(50)
    assert max(A.n for A in corpus) <= 6
    disagreements = 0
    for A in corpus:
        shape = classify_shape(A)
        assert not shape.standardized
        std, _ = standardize(A, shape)
        if is_completely_reachable_bruteforce(A)[0] != is_completely_reachable_bruteforce(std)[0]:
            disagreements += 1
    assert disagreements == 0
    detail(record_property, "50 instances, 0 disagreements")
