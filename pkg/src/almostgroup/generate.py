"""Reproducible random almost-group automata.

Randomness comes from MT19937 (``random.Random(seed)``), consumed only
through ``getrandbits``. Integers below a bound are drawn by rejection
sampling on ``bound.bit_length()`` bits and permutations by a Fisher-Yates
shuffle from the last position down. Both steps are spelled out here rather
than delegated to ``random.shuffle`` so the corpus never depends on the
Python version.
"""

from __future__ import annotations

import random

from .automaton import Automaton, AutomatonError, Transformation, compose

PRNG_NAME = "MT19937 via random.Random.getrandbits; rejection sampling; Fisher-Yates v1"


class Rng:
    def __init__(self, seed: int):
        self._mt = random.Random(seed)

    def below(self, bound: int) -> int:
        if bound < 1:
            raise ValueError("bound must be positive")
        bits = bound.bit_length()
        while True:
            x = self._mt.getrandbits(bits)
            if x < bound:
                return x

    def permutation(self, n: int) -> list[int]:
        items = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items


def _letter_names(m: int) -> list[str]:
    # "a" is reserved for the defect letter
    pool = "bcdefghijklmnopqrstuvwxyz"
    if m <= len(pool):
        return list(pool[:m])
    return [f"p{i}" for i in range(m)]


def _defect_letter(n: int, rng: Rng, post_permute: bool) -> Transformation:
    p = rng.below(n)
    q = rng.below(n - 1)
    if q >= p:
        q += 1
    images = list(range(n))
    images[p] = images[q]
    t = Transformation(images)
    if post_permute:
        t = compose(t, Transformation(rng.permutation(n)))
    return t


def random_almost_group(n: int, m: int, seed: int = 0, post_permute: bool = False) -> Automaton:
    """``m`` uniform random permutations plus one defect-1 letter ``a``.

    The defect letter starts as the identity with one state redirected onto
    another; ``post_permute`` composes it with a further random permutation,
    which usually leaves the automaton non-standardized.
    """
    if n < 2 or m < 1:
        raise AutomatonError("need n >= 2 and m >= 1")
    rng = Rng(seed)
    perms = [Transformation(rng.permutation(n)) for _ in range(m)]
    a = _defect_letter(n, rng, post_permute)
    alphabet = [("a", a)] + list(zip(_letter_names(m), perms))
    return Automaton(n, tuple(alphabet), "a")


def random_imprimitive_almost_group(
    n: int,
    m: int,
    block_size: int,
    seed: int = 0,
    post_permute: bool = False,
    inner: str = "symmetric",
) -> Automaton:
    """Like :func:`random_almost_group`, but every permutation preserves one
    random partition of the states into blocks of ``block_size``.

    Each permutation permutes the blocks uniformly. Inside a block it acts by
    a uniform permutation (``inner="symmetric"``) or by a random rotation or
    reflection of the block's listed order (``inner="dihedral"``); the second
    gives much smaller groups and deeper Rystsov hierarchies.
    """
    if n < 2 or m < 1 or block_size < 1 or n % block_size:
        raise AutomatonError("need n >= 2, m >= 1 and block_size dividing n")
    if inner not in ("symmetric", "dihedral"):
        raise AutomatonError(f"unknown inner action {inner!r}")
    rng = Rng(seed)
    order = rng.permutation(n)
    count = n // block_size
    blocks = [order[i * block_size:(i + 1) * block_size] for i in range(count)]
    perms = []
    for _ in range(m):
        outer = rng.permutation(count)
        images = [0] * n
        for i, block in enumerate(blocks):
            if inner == "symmetric":
                local = rng.permutation(block_size)
            else:
                shift, flip = rng.below(block_size), rng.below(2)
                local = [(shift - j if flip else shift + j) % block_size for j in range(block_size)]
            target = blocks[outer[i]]
            for j, q in enumerate(block):
                images[q] = target[local[j]]
        perms.append(Transformation(images))
    a = _defect_letter(n, rng, post_permute)
    alphabet = [("a", a)] + list(zip(_letter_names(m), perms))
    return Automaton(n, tuple(alphabet), "a")


def hoffman_instance(n: int, seed: int = 0) -> Automaton:
    """Transposition (1 2) and the n-cycle, which generate the full symmetric
    group, with a random defect-1 letter (post-permuted)."""
    rng = Rng(seed)
    swap = Transformation([1, 0] + list(range(2, n)))
    cycle = Transformation([(q + 1) % n for q in range(n)])
    a = _defect_letter(n, rng, post_permute=True)
    return Automaton(n, (("a", a), ("s", swap), ("r", cycle)), "a")
