"""Rystsov graph hierarchy of a standardized almost-group automaton.

Words are never enumerated. A word's (excluded set, duplicated set) pair
determines the pair of every extension of that word, so breadth-first search
over these *defect profiles* visits everything the graph construction
quantifies over. Defect never decreases along a word, which makes pruning at
a maximum defect lossless.
"""

from __future__ import annotations

import enum
from collections import deque
from functools import lru_cache
from dataclasses import dataclass
from typing import Iterator

import networkx as nx

from .automaton import (
    AlmostGroupShape,
    Automaton,
    AutomatonError,
    StateSet,
    Transformation,
    Word,
    format_states,
    format_word,
    word_transformation,
    compose,
)
from .bitsets import MaskImage, from_mask, full_mask, to_mask
from .groups import GeneratorSet, NotABlockError, NotTransitiveError, orbit, system_from_block


@dataclass(frozen=True, order=True)
class DefectProfile:
    excl: StateSet
    dupl: StateSet

    def __post_init__(self):
        object.__setattr__(self, "excl", frozenset(self.excl))
        object.__setattr__(self, "dupl", frozenset(self.dupl))

    @property
    def defect(self) -> int:
        return len(self.excl)

    def __str__(self) -> str:
        return f"({format_states(self.excl)}, {format_states(self.dupl)})"


def profile_of(t: Transformation) -> DefectProfile:
    return DefectProfile(t.excl(), t.dupl())


class _Stepper:
    """Profile transition for one letter, on bitmasks."""

    __slots__ = ("image", "full", "coll", "d", "is_perm")

    def __init__(self, t: Transformation):
        self.image = MaskImage(t.images)
        self.full = full_mask(t.n)
        self.is_perm = t.is_permutation
        if self.is_perm:
            self.coll = 0
            self.d = 0
        elif t.defect == 1:
            self.coll = to_mask(t.coll())
            (d,) = t.dupl()
            self.d = 1 << d
        else:
            raise AutomatonError(f"profiles only support letters of defect 0 or 1, got {t.defect}")

    def __call__(self, ex: int, du: int) -> tuple[int, int]:
        image = self.image
        if self.is_perm:
            return image(ex), image(du)
        im = self.full & ~ex
        new_ex = self.full & ~image(im)
        # outside the collapsed pair the letter is injective, so counts carry over
        new_du = image(du & ~self.coll)
        live = im & self.coll
        if live == self.coll or du & self.coll:
            new_du |= self.d
        return new_ex, new_du


@lru_cache(maxsize=256)
def _cached_stepper(letter: Transformation) -> _Stepper:
    return _Stepper(letter)


def profile_step(profile: DefectProfile, letter: Transformation) -> DefectProfile:
    """Profile of ``w x`` from the profile of ``w`` and the letter ``x``."""
    ex, du = _cached_stepper(letter)(to_mask(profile.excl), to_mask(profile.dupl))
    return DefectProfile(from_mask(ex), from_mask(du))


def _search(automaton: Automaton, max_defect: int) -> dict[tuple[int, int], Word]:
    """BFS over profile masks from the empty word; insertion order is BFS order."""
    steppers = [(name, _Stepper(t)) for name, t in automaton.alphabet]
    start = (0, 0)
    witness = {start: ()}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        word = witness[state]
        for name, step in steppers:
            nxt = step(*state)
            if nxt in witness or nxt[0].bit_count() > max_defect:
                continue
            witness[nxt] = word + (name,)
            queue.append(nxt)
    return witness


def reachable_profiles(
    automaton: Automaton, shape: AlmostGroupShape | None, max_defect: int
) -> dict[DefectProfile, Word]:
    """Every profile of a word of defect at most ``max_defect``.

    Each profile maps to its shortest witness word; among equally short
    words the first in alphabet order wins.
    """
    found = _search(automaton, max_defect)
    return {DefectProfile(from_mask(ex), from_mask(du)): w for (ex, du), w in found.items()}


class StopReason(enum.Enum):
    STRONGLY_CONNECTED = "strongly-connected"
    NO_BIG_ENOUGH_COMPONENT = "no-big-enough-component"


@dataclass(frozen=True)
class RystsovVertex:
    id: int
    members: tuple[int, ...]
    foliage: StateSet


@dataclass(frozen=True)
class RystsovEdge:
    source: int
    target: int
    profile: DefectProfile
    word: Word
    level_added: int


@dataclass(frozen=True)
class RystsovLevel:
    k: int
    e: int
    vertices: tuple[RystsovVertex, ...]
    edges: tuple[RystsovEdge, ...]
    sccs: tuple[tuple[int, ...], ...]
    ce_index: int

    @property
    def is_strongly_connected(self) -> bool:
        return len(self.sccs) == 1

    def scc_foliage(self, i: int) -> StateSet:
        return frozenset().union(*(self.vertices[v].foliage for v in self.sccs[i]))

    @property
    def ce_foliage(self) -> StateSet:
        """Foliage of the strongly connected component containing ``e``."""
        return self.scc_foliage(self.ce_index)

    def vertex_of_state(self, q: int) -> RystsovVertex:
        for v in self.vertices:
            if q in v.foliage:
                return v
        raise KeyError(q)

    def edge_pairs(self) -> set[tuple[int, int]]:
        return {(x.source, x.target) for x in self.edges}

    def summary(self) -> dict:
        return {
            "level": self.k,
            "vertices": [format_states(v.foliage) for v in self.vertices],
            "edge_count": len(self.edges),
            "new_edge_count": sum(1 for x in self.edges if x.level_added == self.k),
            "components": [format_states(self.scc_foliage(i)) for i in range(len(self.sccs))],
            "ce_foliage": format_states(self.ce_foliage),
            "strongly_connected": self.is_strongly_connected,
        }


@dataclass(frozen=True)
class RystsovHierarchy:
    shape: AlmostGroupShape
    levels: tuple[RystsovLevel, ...]
    stop_reason: StopReason

    @property
    def final(self) -> RystsovLevel:
        return self.levels[-1]

    def level(self, k: int) -> RystsovLevel:
        if not 1 <= k <= len(self.levels):
            raise IndexError(f"level {k} not built (have 1..{len(self.levels)})")
        return self.levels[k - 1]


def _components(vertices, edges) -> tuple[tuple[tuple[int, ...], ...], list[int]]:
    g = nx.DiGraph()
    g.add_nodes_from(v.id for v in vertices)
    g.add_edges_from((x.source, x.target) for x in edges)
    comps = [tuple(sorted(c)) for c in nx.strongly_connected_components(g)]
    comps.sort(key=lambda c: min(min(vertices[v].foliage) for v in c))
    owner = [0] * len(vertices)
    for i, c in enumerate(comps):
        for v in c:
            owner[v] = i
    return tuple(comps), owner


def _finish_level(k, e, vertices, edges) -> RystsovLevel:
    vertices = tuple(vertices)
    sccs, owner = _components(vertices, edges)
    ce = owner[next(v.id for v in vertices if e in v.foliage)]
    return RystsovLevel(k, e, vertices, tuple(edges), sccs, ce)


def _profiles_by_defect(profiles: dict[tuple[int, int], Word], k: int) -> Iterator:
    for (ex, du), w in profiles.items():
        if ex.bit_count() == k:
            yield ex, du, w


def gamma1(
    automaton: Automaton,
    shape: AlmostGroupShape,
    _profiles: dict[tuple[int, int], Word] | None = None,
) -> RystsovLevel:
    """First level: an edge ``p -> q`` for every defect-1 word with profile ({p}, {q})."""
    profiles = _search(automaton, 1) if _profiles is None else _profiles
    vertices = [RystsovVertex(q, (), frozenset([q])) for q in range(automaton.n)]
    edges = []
    for ex, du, w in _profiles_by_defect(profiles, 1):
        p = ex.bit_length() - 1
        q = du.bit_length() - 1
        edges.append(RystsovEdge(p, q, DefectProfile({p}, {q}), w, 1))
    return _finish_level(1, shape.e, vertices, edges)


def _next_level(
    cur: RystsovLevel, profiles: dict[tuple[int, int], Word]
) -> RystsovLevel:
    k = cur.k + 1
    owner = {}
    vertices = []
    for i, comp in enumerate(cur.sccs):
        for v in comp:
            owner[v] = i
        vertices.append(RystsovVertex(i, comp, cur.scc_foliage(i)))
    masks = [to_mask(v.foliage) for v in vertices]
    state_owner = {}
    for v in vertices:
        for q in v.foliage:
            state_owner[q] = v.id

    edges: dict[tuple[int, int], RystsovEdge] = {}
    for x in cur.edges:
        s, t = owner[x.source], owner[x.target]
        if s != t and (s, t) not in edges:
            edges[(s, t)] = RystsovEdge(s, t, x.profile, x.word, x.level_added)
    for ex, du, w in _profiles_by_defect(profiles, k):
        c = state_owner[(ex & -ex).bit_length() - 1]
        if ex & ~masks[c]:
            continue
        for dv in range(len(vertices)):
            if dv != c and du & masks[dv] and (c, dv) not in edges:
                edges[(c, dv)] = RystsovEdge(
                    c, dv, DefectProfile(from_mask(ex), from_mask(du)), w, k
                )
    return _finish_level(k, cur.e, vertices, list(edges.values()))


def build_hierarchy(automaton: Automaton, shape: AlmostGroupShape) -> RystsovHierarchy:
    """Build levels until one is strongly connected or no component is big enough.

    A component of level ``k`` is big enough when its foliage has at least
    ``k + 1`` states.
    """
    level = gamma1(automaton, shape)
    levels = [level]
    while True:
        if level.is_strongly_connected:
            reason = StopReason.STRONGLY_CONNECTED
            break
        k = level.k
        if not any(len(level.scc_foliage(i)) >= k + 1 for i in range(len(level.sccs))):
            reason = StopReason.NO_BIG_ENOUGH_COMPONENT
            break
        level = _next_level(level, _search(automaton, k + 1))
        levels.append(level)
    return RystsovHierarchy(shape, tuple(levels), reason)


def d1_set(automaton: Automaton, shape: AlmostGroupShape) -> StateSet:
    """States duplicated by a defect-1 word whose excluded state is ``e``."""
    e = 1 << shape.e
    return frozenset(
        du.bit_length() - 1 for (ex, du) in _search(automaton, 1) if ex == e
    )


def dk_set(automaton: Automaton, hierarchy: RystsovHierarchy, k: int) -> StateSet:
    """States duplicated by words of defect at most ``k`` with
    ``e`` in excl and excl inside the foliage of the previous level's e-component.

    For ``k = 1`` that foliage is ``{e}``.
    """
    if k < 1 or k - 1 > len(hierarchy.levels):
        raise IndexError(f"D_{k} needs level {k - 1}; built 1..{len(hierarchy.levels)}")
    e = hierarchy.shape.e
    leaf = {e} if k == 1 else hierarchy.level(k - 1).ce_foliage
    leaf_mask = to_mask(leaf)
    e_bit = 1 << e
    out = 0
    for ex, du in _search(automaton, k):
        if ex & e_bit and not ex & ~leaf_mask:
            out |= du
    return from_mask(out)


def translated_edges_check(level: RystsovLevel, gens: GeneratorSet) -> bool:
    """Level-1 edges are exactly the group translates of the edges leaving ``e``."""
    if level.k != 1:
        raise ValueError("translated edge check applies to the first level")
    e = level.e
    targets = {x.target for x in level.edges if x.source == e}
    _, witness = orbit(gens, e)
    if len(witness) != gens.n:
        raise NotTransitiveError("translated edge check needs a transitive group")
    lookup = dict(gens.pairs())
    expected = set()
    for q, word in witness.items():
        sigma = Transformation.identity(gens.n)
        for name in word:
            sigma = compose(sigma, lookup[name])
        assert sigma[e] == q
        expected.update((q, sigma[d]) for d in targets)
    return expected == level.edge_pairs()


def foliage_system_check(level: RystsovLevel, gens: GeneratorSet) -> bool:
    """Foliages partition the states and form one system of imprimitivity."""
    foliages = [v.foliage for v in level.vertices]
    covered = set()
    for f in foliages:
        if covered & f:
            return False
        covered |= f
    if covered != set(range(gens.n)):
        return False
    try:
        system = system_from_block(gens, foliages[0])
    except (NotABlockError, NotTransitiveError):
        return False
    return set(system.blocks) == set(foliages)


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def dot_export(level: RystsovLevel, labels: bool = False) -> str:
    lines = [f"digraph gamma{level.k} {{", "  rankdir=LR;"]
    for v in level.vertices:
        lines.append(f"  v{v.id} [label={_dot_quote(format_states(v.foliage))}];")
    for x in sorted(level.edges, key=lambda x: (x.source, x.target)):
        attr = f" [label={_dot_quote(format_word(x.word) or 'ε')}]" if labels else ""
        lines.append(f"  v{x.source} -> v{x.target}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def witness_profile(automaton: Automaton, word: Word) -> DefectProfile:
    return profile_of(word_transformation(automaton, word))
