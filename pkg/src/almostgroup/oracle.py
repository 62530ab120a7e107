"""Exhaustive subset reachability: breadth-first search over the power set.

Starting from the full state set, every letter maps a subset to its image.
The first time a subset is seen fixes its parent, which gives shortest
witness words (ties go to the letter that comes first in the alphabet).
"""

from __future__ import annotations

import os
from array import array
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .automaton import Automaton, AutomatonError, StateSet, Word, format_states
from .bitsets import MaskImage, from_mask, full_mask, to_mask

DEFAULT_MAX_STATES = 24
_UNSEEN = 0xFFFF


class OracleCapError(AutomatonError):
    pass


class UnreachableSubsetError(AutomatonError):
    pass


def default_max_states() -> int:
    return int(os.environ.get("ORACLE_MAX_STATES", DEFAULT_MAX_STATES))


@dataclass(frozen=True)
class ReachabilityTable:
    """Visited subsets with BFS parents.

    ``depth[m]`` is the shortest witness length of subset ``m`` (``0xFFFF``
    when unreachable), ``parent[m]`` its predecessor and ``via[m]`` the index
    of the letter applied to it.
    """

    n: int
    letters: tuple[str, ...]
    depth: array
    parent: array
    via: bytearray
    count: int

    def is_reachable(self, states: Iterable[int] | int) -> bool:
        m = states if isinstance(states, int) else to_mask(states)
        return 0 < m < len(self.depth) and self.depth[m] != _UNSEEN

    def reachable_masks(self) -> Iterable[int]:
        depth = self.depth
        return (m for m in range(1, len(depth)) if depth[m] != _UNSEEN)


def reachable_subsets(automaton: Automaton, max_states: int | None = None) -> ReachabilityTable:
    cap = default_max_states() if max_states is None else max_states
    n = automaton.n
    if n > cap:
        raise OracleCapError(f"{n} states exceeds the oracle cap of {cap}")
    if len(automaton.alphabet) > 255:
        raise OracleCapError("at most 255 letters are supported")
    size = 1 << n
    depth = array("H", [_UNSEEN]) * size
    parent = array("l", [-1]) * size
    via = bytearray(size)
    images = [MaskImage(t.images) for _, t in automaton.alphabet]
    start = full_mask(n)
    depth[start] = 0
    count = 1
    queue = deque([start])
    while queue:
        m = queue.popleft()
        dm = depth[m] + 1
        for i, image in enumerate(images):
            x = image(m)
            if depth[x] == _UNSEEN:
                depth[x] = min(dm, _UNSEEN - 1)
                parent[x] = m
                via[x] = i
                count += 1
                queue.append(x)
    return ReachabilityTable(n, automaton.letters, depth, parent, via, count)


def unreachable_subsets(table: ReachabilityTable, limit: int | None = None) -> list[StateSet]:
    """Unreachable non-empty subsets, by size then lexicographically."""
    depth = table.depth
    missing = [m for m in range(1, len(depth)) if depth[m] == _UNSEEN]
    missing.sort(key=lambda m: (m.bit_count(), sorted(from_mask(m))))
    if limit is not None:
        missing = missing[:limit]
    return [from_mask(m) for m in missing]


def is_completely_reachable_bruteforce(
    automaton: Automaton, limit: int | None = None, max_states: int | None = None
) -> tuple[bool, list[StateSet]]:
    table = reachable_subsets(automaton, max_states)
    complete = table.count == (1 << automaton.n) - 1
    return complete, ([] if complete else unreachable_subsets(table, limit))


def shortest_witness(table: ReachabilityTable, states: Iterable[int] | int) -> Word:
    m = states if isinstance(states, int) else to_mask(states)
    if not table.is_reachable(m):
        shown = format_states(from_mask(m)) if m > 0 else "{}"
        raise UnreachableSubsetError(f"subset {shown} is not reachable")
    word = []
    start = full_mask(table.n)
    while m != start:
        word.append(table.letters[table.via[m]])
        m = table.parent[m]
    word.reverse()
    return tuple(word)


@dataclass(frozen=True)
class WitnessStats:
    """Longest shortest witness per subset size, checked against ``2n(n - k)``."""

    n: int
    maxima: dict[int, int]
    violations: tuple[int, ...]

    def bound(self, k: int) -> int:
        return 2 * self.n * (self.n - k)


def witness_length_stats(table: ReachabilityTable, n: int | None = None) -> WitnessStats:
    n = table.n if n is None else n
    maxima: dict[int, int] = {}
    depth = table.depth
    for m in range(1, len(depth)):
        d = depth[m]
        if d == _UNSEEN:
            continue
        k = m.bit_count()
        if d > maxima.get(k, -1):
            maxima[k] = d
    violations = tuple(k for k, d in sorted(maxima.items()) if d > 2 * n * (n - k))
    return WitnessStats(n, dict(sorted(maxima.items())), violations)
