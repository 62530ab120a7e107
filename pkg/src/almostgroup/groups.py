"""Permutation group routines for the group generated by the permutation letters.

Only what the decision pipeline needs: orbits, blocks and block systems,
explicit enumeration, setwise stabilizers and cores. Every block operation
refuses intransitive input.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .automaton import Automaton, AlmostGroupShape, StateSet, Transformation, Word, permutation_orbit

Perm = tuple[int, ...]

DEFAULT_GROUP_CAP = 1_000_000
DEFAULT_BLOCK_CAP = 4096


class GroupError(ValueError):
    pass


class NotTransitiveError(GroupError):
    pass


class NotABlockError(GroupError):
    pass


class BlockLatticeTooLarge(GroupError):
    pass


class IncompleteGroupError(GroupError):
    pass


@dataclass(frozen=True)
class GeneratorSet:
    n: int
    names: tuple[str, ...]
    perms: tuple[Transformation, ...]

    def __post_init__(self):
        for name, p in zip(self.names, self.perms):
            if len(p) != self.n or not p.is_permutation:
                raise GroupError(f"generator {name!r} is not a permutation of {self.n} points")

    @classmethod
    def of(cls, n: int, perms: Iterable[Transformation | Sequence[int]], names=None) -> "GeneratorSet":
        perms = tuple(p if isinstance(p, Transformation) else Transformation(p) for p in perms)
        if names is None:
            names = tuple(f"g{i}" for i in range(len(perms)))
        return cls(n, tuple(names), perms)

    @classmethod
    def from_automaton(cls, automaton: Automaton, shape: AlmostGroupShape) -> "GeneratorSet":
        pairs = shape.permutations(automaton)
        return cls(automaton.n, tuple(x for x, _ in pairs), tuple(t for _, t in pairs))

    def pairs(self) -> list[tuple[str, Transformation]]:
        return list(zip(self.names, self.perms))


@dataclass(frozen=True)
class BlockSystem:
    blocks: tuple[StateSet, ...]

    def block_of(self, q: int) -> StateSet:
        for b in self.blocks:
            if q in b:
                return b
        raise KeyError(q)

    def index_of(self, q: int) -> int:
        return self.blocks.index(self.block_of(q))


@dataclass(frozen=True)
class GroupElements:
    """An explicit list of permutations (image tuples).

    ``complete`` is False when enumeration stopped at its cap; such a list is
    only a partial carrier and downstream filters reject it.
    """

    n: int
    elements: tuple[Perm, ...]
    complete: bool

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, p) -> bool:
        return tuple(p) in self._set

    @property
    def _set(self) -> frozenset:
        cached = self.__dict__.get("_cached_set")
        if cached is None:
            cached = frozenset(self.elements)
            object.__setattr__(self, "_cached_set", cached)
        return cached


def orbit(gens: GeneratorSet, q: int) -> tuple[StateSet, dict[int, Word]]:
    witness = permutation_orbit(gens.pairs(), q)
    return frozenset(witness), witness


def is_transitive(gens: GeneratorSet, n: int | None = None) -> bool:
    n = gens.n if n is None else n
    return len(orbit(gens, 0)[0]) == n


def _require_transitive(gens: GeneratorSet) -> None:
    if not is_transitive(gens):
        raise NotTransitiveError("block computations need a transitive group")


def _minimal_block_class(gens: GeneratorSet, seed: Sequence[int]) -> list[int]:
    """Finest invariant partition merging ``seed``; returns the parent array."""
    parent = list(range(gens.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    images = [p.images for p in gens.perms]
    pending = deque()
    s0 = seed[0]
    for s in seed[1:]:
        a, b = find(s0), find(s)
        if a != b:
            parent[b] = a
            pending.append((s0, s))
    while pending:
        p, q = pending.popleft()
        for img in images:
            a, b = find(img[p]), find(img[q])
            if a != b:
                parent[b] = a
                pending.append((img[p], img[q]))
    return [find(x) for x in range(gens.n)]


def minimal_block(gens: GeneratorSet, seed: Iterable[int]) -> StateSet:
    """Smallest block of the generated group containing ``seed``."""
    seed = sorted(set(seed))
    if not seed:
        raise GroupError("seed must be non-empty")
    _require_transitive(gens)
    roots = _minimal_block_class(gens, seed)
    r = roots[seed[0]]
    return frozenset(q for q in range(gens.n) if roots[q] == r)


def _block_key(block: StateSet):
    return (len(block), sorted(block))


def blocks_containing(
    gens: GeneratorSet, e: int, include_trivial: bool = False, cap: int = DEFAULT_BLOCK_CAP
) -> list[StateSet]:
    """All blocks containing ``e``, sorted by size then lexicographically.

    Every such block is a join of minimal blocks ``minimal_block({e, q})``,
    so closing those atoms under the join operation finds them all.
    """
    _require_transitive(gens)
    n = gens.n
    full = frozenset(range(n))
    atoms = []
    for q in range(n):
        if q != e:
            b = minimal_block(gens, (e, q))
            if b not in atoms:
                atoms.append(b)
    found = set(atoms)
    if len(found) > cap:
        raise BlockLatticeTooLarge(f"more than {cap} blocks contain state {e + 1}")
    frontier = list(atoms)
    while frontier:
        nxt = []
        for x in frontier:
            for m in atoms:
                if m <= x:
                    continue
                j = minimal_block(gens, x | m)
                if j not in found:
                    found.add(j)
                    nxt.append(j)
                    if len(found) > cap:
                        raise BlockLatticeTooLarge(f"more than {cap} blocks contain state {e + 1}")
        frontier = nxt
    if include_trivial:
        found.add(frozenset([e]))
        found.add(full)
    else:
        found.discard(full)
    return sorted(found, key=_block_key)


def system_from_block(gens: GeneratorSet, block: Iterable[int]) -> BlockSystem:
    """The images of ``block`` under the group, as a partition of the states.

    Raises :class:`NotABlockError` when two images overlap without being
    equal, which makes this double as the block test.
    """
    block = frozenset(block)
    if not block:
        raise NotABlockError("empty set")
    owner: dict[int, StateSet] = {}
    images = [block]
    for q in block:
        owner[q] = block
    i = 0
    while i < len(images):
        b = images[i]
        i += 1
        for p in gens.perms:
            c = p.apply_set(b)
            first = owner.get(next(iter(c)))
            if first is not None:
                if first != c:
                    raise NotABlockError(
                        f"images of the set overlap partially: {sorted(first)} vs {sorted(c)}"
                    )
                continue
            for q in c:
                if q in owner:
                    raise NotABlockError(
                        f"images of the set overlap partially at state {q + 1}"
                    )
                owner[q] = c
            images.append(c)
    if len(owner) != gens.n:
        raise NotTransitiveError("the images of the block do not cover every state")
    return BlockSystem(tuple(sorted(images, key=min)))


def is_block(gens: GeneratorSet, block: Iterable[int]) -> bool:
    try:
        system_from_block(gens, block)
    except NotABlockError:
        return False
    return True


def enumerate_group(gens: GeneratorSet, cap: int = DEFAULT_GROUP_CAP) -> GroupElements:
    """Breadth-first closure of the identity under right multiplication by generators."""
    if cap < 1:
        raise GroupError("cap must be at least 1")
    identity = tuple(range(gens.n))
    seen = {identity}
    order = [identity]
    gen_images = [p.images for p in gens.perms]
    i = 0
    while i < len(order):
        g = order[i]
        i += 1
        for s in gen_images:
            h = tuple(s[x] for x in g)
            if h not in seen:
                if len(order) >= cap:
                    return GroupElements(gens.n, tuple(order), False)
                seen.add(h)
                order.append(h)
    return GroupElements(gens.n, tuple(order), True)


def _require_complete(elems: GroupElements) -> None:
    if not elems.complete:
        raise IncompleteGroupError("group enumeration stopped at its cap")


def _fixes_setwise(g: Perm, states: StateSet) -> bool:
    return all(g[q] in states for q in states)


def setwise_stabilizer(elems: GroupElements, states: Iterable[int]) -> GroupElements:
    _require_complete(elems)
    states = frozenset(states)
    return GroupElements(elems.n, tuple(g for g in elems.elements if _fixes_setwise(g, states)), True)


def core_of_system(elems: GroupElements, system: BlockSystem) -> GroupElements:
    """Kernel of the action on blocks: elements fixing every block setwise."""
    _require_complete(elems)
    kept = tuple(
        g for g in elems.elements if all(_fixes_setwise(g, b) for b in system.blocks)
    )
    return GroupElements(elems.n, kept, True)


def is_core_transitive_on(core: GroupElements, block: Iterable[int]) -> bool:
    block = frozenset(block)
    b = min(block)
    return {g[b] for g in core.elements} >= block


def is_primitive(gens: GeneratorSet, n: int | None = None) -> bool:
    if not is_transitive(gens, n):
        return False
    full = frozenset(range(gens.n))
    return all(minimal_block(gens, (0, q)) == full for q in range(1, gens.n))


def multiply(g: Perm, h: Perm) -> Perm:
    """``g`` then ``h``."""
    return tuple(h[x] for x in g)


def invert(g: Perm) -> Perm:
    inv = [0] * len(g)
    for q, x in enumerate(g):
        inv[x] = q
    return tuple(inv)
