"""Shared fixtures data and brute-force oracles for the test suite.

Nothing here calls into the code paths it is used to check: block tests go
through explicit group elements, profile tests through explicit word
enumeration.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from pathlib import Path

from almostgroup.automaton import Automaton, Transformation, classify_shape, standardize
from almostgroup.fileformat import load_automaton
from almostgroup.generate import (
    hoffman_instance,
    random_almost_group,
    random_imprimitive_almost_group,
)
from almostgroup.groups import GeneratorSet, is_transitive

DATA = Path(__file__).parent / "data"


def e18() -> Automaton:
    return load_automaton(DATA / "e18.aut")


def c4_instance() -> Automaton:
    """Rotation of 4 states plus a letter sending 0 to 2 and fixing the rest."""
    a = Transformation([2, 1, 2, 3])
    b = Transformation.from_cycles(4, [(0, 1, 2, 3)])
    return Automaton(4, (("a", a), ("b", b)))


def states(*one_indexed: int) -> frozenset[int]:
    return frozenset(q - 1 for q in one_indexed)


# ---- brute-force oracles -------------------------------------------------

def group_closure(n, perms):
    """All products of the generators, by naive fixpoint over image tuples."""
    identity = tuple(range(n))
    elems = {identity}
    changed = True
    while changed:
        changed = False
        for g in list(elems):
            for p in perms:
                h = tuple(p[g[q]] for q in range(n))
                if h not in elems:
                    elems.add(h)
                    changed = True
    return elems


def is_block_bruteforce(elements, block) -> bool:
    block = frozenset(block)
    for g in elements:
        image = frozenset(g[q] for q in block)
        if image != block and image & block:
            return False
    return True


def blocks_bruteforce(n, elements, e):
    found = []
    others = [q for q in range(n) if q != e]
    for r in range(0, n):
        for extra in combinations(others, r):
            b = frozenset((e,) + extra)
            if is_block_bruteforce(elements, b):
                found.append(b)
    return found


def words_upto(letters, length):
    for k in range(length + 1):
        yield from product(letters, repeat=k)


def profiles_by_word_search(automaton: Automaton, length: int):
    """(excl, dupl) of every word up to ``length``, by direct composition."""
    out = {}
    n = automaton.n
    frontier = [((), tuple(range(n)))]
    out[(frozenset(), frozenset())] = ()
    for _ in range(length):
        nxt = []
        for word, images in frontier:
            for name, t in automaton.alphabet:
                img = tuple(t[x] for x in images)
                w = word + (name,)
                counts = [0] * n
                for x in img:
                    counts[x] += 1
                key = (
                    frozenset(q for q in range(n) if counts[q] == 0),
                    frozenset(q for q in range(n) if counts[q] >= 2),
                )
                out.setdefault(key, w)
                nxt.append((w, img))
        frontier = nxt
    return out


def reachable_by_naive_bfs(automaton: Automaton):
    """Image sets of the full set, with frozensets and no bit tricks."""
    start = frozenset(range(automaton.n))
    seen = {start}
    stack = [start]
    while stack:
        s = stack.pop()
        for _, t in automaton.alphabet:
            img = frozenset(t[q] for q in s)
            if img not in seen:
                seen.add(img)
                stack.append(img)
    return seen


# ---- corpora -------------------------------------------------------------

def _transitive(automaton: Automaton) -> bool:
    shape = classify_shape(automaton)
    return is_transitive(GeneratorSet.from_automaton(automaton, shape))


def _imprimitive(n, i, inner):
    divisors = [d for d in range(2, n) if n % d == 0]
    for attempt in range(50):
        seed = 1000 * i + attempt
        block = divisors[seed % len(divisors)]
        a = random_imprimitive_almost_group(n, 1 + seed % 2, block, seed, bool(seed % 2), inner)
        if _transitive(a):
            return a
    return a


@lru_cache(maxsize=None)
def mixed_corpus(count: int = 200, sizes: tuple[int, ...] = (4, 5, 6, 7, 8)) -> tuple[Automaton, ...]:
    """Deterministic corpus mixing uniform random generators with imprimitive
    (wreath-product) ones. Prime sizes fall back to uniform generators."""
    out = []
    for i in range(count):
        n = sizes[i % len(sizes)]
        kind = (i // len(sizes)) % 4
        composite = any(n % d == 0 for d in range(2, n))
        if kind == 2 and composite:
            out.append(_imprimitive(n, i, "symmetric"))
        elif kind == 3 and composite:
            out.append(_imprimitive(n, i, "dihedral"))
        else:
            out.append(random_almost_group(n, 1 + (i + kind) % 2, i, post_permute=bool(kind % 2)))
    return tuple(out)


def standardized_transitive(automaton: Automaton):
    """Standardized copy and its shape, or None for intransitive input."""
    if not _transitive(automaton):
        return None
    std, _ = standardize(automaton, classify_shape(automaton))
    return std, classify_shape(std)


@lru_cache(maxsize=None)
def hoffman_corpus(count: int = 50) -> tuple[Automaton, ...]:
    return tuple(hoffman_instance(4 + i % 5, seed=i) for i in range(count))


@lru_cache(maxsize=None)
def nonstandard_corpus(count: int = 50, sizes=(3, 4, 5, 6)) -> tuple[Automaton, ...]:
    out = []
    seed = 0
    while len(out) < count:
        n = sizes[seed % len(sizes)]
        if seed % 3 == 2 and n in (4, 6):
            a = random_imprimitive_almost_group(n, 1 + seed % 2, 2, seed, True, "dihedral")
        else:
            a = random_almost_group(n, 1 + seed % 2, seed, post_permute=True)
        seed += 1
        if not classify_shape(a).standardized and _transitive(a):
            out.append(a)
    return tuple(out)
