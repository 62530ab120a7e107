"""Automata as lists of named transformations, acting on the right.

States are ``0 .. n-1`` internally. A transformation ``t`` is stored as its
image tuple, ``t[q] = q . t``, and words act left to right, so the
transformation of ``uv`` is ``compose(u, v)``: first ``u``, then ``v``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Word = tuple[str, ...]
StateSet = frozenset[int]


class AutomatonError(ValueError):
    """Structural problem with an automaton or a word over it."""


class ShapeError(AutomatonError):
    """The alphabet is not permutations plus exactly one defect-1 letter."""


class StandardizeError(AutomatonError):
    """No permutation word sends the excluded state into the collapsed pair."""


class Transformation:
    """A total map on ``range(n)``. Immutable and hashable."""

    __slots__ = ("images", "_preimage_counts")

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        n = len(images)
        for x in images:
            if not (isinstance(x, int) and 0 <= x < n):
                raise AutomatonError(f"image {x!r} out of range for {n} states")
        object.__setattr__(self, "images", images)
        counts = [0] * n
        for x in images:
            counts[x] += 1
        object.__setattr__(self, "_preimage_counts", tuple(counts))

    def __setattr__(self, name, value):
        raise AttributeError("Transformation is immutable")

    @classmethod
    def identity(cls, n: int) -> "Transformation":
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Transformation":
        """Build a permutation from 0-indexed cycles; omitted points are fixed."""
        images = list(range(n))
        seen = set()
        for cycle in cycles:
            for i, q in enumerate(cycle):
                if not 0 <= q < n:
                    raise AutomatonError(f"cycle point {q} out of range for {n} states")
                if q in seen:
                    raise AutomatonError(f"state {q + 1} appears twice in cycle notation")
                seen.add(q)
                images[q] = cycle[(i + 1) % len(cycle)]
        return cls(images)

    def __len__(self) -> int:
        return len(self.images)

    def __getitem__(self, q: int) -> int:
        return self.images[q]

    def __iter__(self):
        return iter(self.images)

    def __eq__(self, other) -> bool:
        return isinstance(other, Transformation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Transformation({list(self.images)})"

    @property
    def n(self) -> int:
        return len(self.images)

    @property
    def is_permutation(self) -> bool:
        return all(c == 1 for c in self._preimage_counts)

    @property
    def defect(self) -> int:
        return sum(1 for c in self._preimage_counts if c == 0)

    def excl(self) -> StateSet:
        return frozenset(q for q, c in enumerate(self._preimage_counts) if c == 0)

    def dupl(self) -> StateSet:
        return frozenset(q for q, c in enumerate(self._preimage_counts) if c >= 2)

    def coll(self) -> StateSet:
        """The two states sharing an image; only defined for defect 1."""
        if self.defect != 1:
            raise AutomatonError(f"collapsed pair needs defect 1, got {self.defect}")
        (d,) = self.dupl()
        return frozenset(q for q, x in enumerate(self.images) if x == d)

    def inverse(self) -> "Transformation":
        if not self.is_permutation:
            raise AutomatonError("only permutations are invertible")
        inv = [0] * self.n
        for q, x in enumerate(self.images):
            inv[x] = q
        return Transformation(inv)

    def apply_set(self, states: Iterable[int]) -> StateSet:
        return frozenset(self.images[q] for q in states)

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles of a permutation, each starting at its least point."""
        if not self.is_permutation:
            raise AutomatonError("cycle notation needs a permutation")
        seen = set()
        out = []
        for q in range(self.n):
            if q in seen or self.images[q] == q:
                continue
            cycle = [q]
            seen.add(q)
            x = self.images[q]
            while x != q:
                cycle.append(x)
                seen.add(x)
                x = self.images[x]
            out.append(tuple(cycle))
        return out


def compose(t: Transformation, u: Transformation) -> Transformation:
    """``t`` then ``u``: ``result[q] = u[t[q]]``."""
    if len(t) != len(u):
        raise AutomatonError(f"cannot compose maps on {len(t)} and {len(u)} states")
    ui = u.images
    return Transformation(ui[x] for x in t.images)


def defect(t: Transformation) -> int:
    return t.defect


def excl(t: Transformation) -> StateSet:
    return t.excl()


def dupl(t: Transformation) -> StateSet:
    return t.dupl()


def coll(t: Transformation) -> StateSet:
    return t.coll()


@dataclass(frozen=True)
class Automaton:
    """State count plus an ordered alphabet of named transformations.

    ``defect_letter`` records an explicit declaration from the input file;
    when ``None`` the defect letter is detected by :func:`classify_shape`.
    """

    n: int
    alphabet: tuple[tuple[str, Transformation], ...]
    defect_letter: str | None = None
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        alphabet = tuple((str(name), t) for name, t in self.alphabet)
        object.__setattr__(self, "alphabet", alphabet)
        if self.n < 1:
            raise AutomatonError("an automaton needs at least one state")
        index = {}
        for name, t in alphabet:
            if not name or any(ch.isspace() for ch in name):
                raise AutomatonError(f"invalid letter name {name!r}")
            if name in index:
                raise AutomatonError(f"duplicate letter name {name!r}")
            if len(t) != self.n:
                raise AutomatonError(
                    f"letter {name!r} has {len(t)} images, expected {self.n}"
                )
            index[name] = t
        if self.defect_letter is not None and self.defect_letter not in index:
            raise AutomatonError(f"declared defect letter {self.defect_letter!r} is not a letter")
        object.__setattr__(self, "_index", index)

    @property
    def letters(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.alphabet)

    def letter(self, name: str) -> Transformation:
        try:
            return self._index[name]
        except KeyError:
            raise AutomatonError(f"unknown letter {name!r}") from None

    def replace_letter(self, name: str, t: Transformation) -> "Automaton":
        self.letter(name)
        alphabet = tuple((x, t if x == name else u) for x, u in self.alphabet)
        return Automaton(self.n, alphabet, self.defect_letter)


def word_transformation(automaton: Automaton, word: Iterable[str]) -> Transformation:
    images = tuple(range(automaton.n))
    for name in word:
        li = automaton.letter(name).images
        images = tuple(li[x] for x in images)
    return Transformation(images)


def parse_word(automaton: Automaton, text: str) -> Word:
    """Read a word written as juxtaposed one-character letters or as tokens.

    ``"abbbaca"`` works when every letter name is a single character;
    ``"a b b"`` (whitespace separated) always works.
    """
    text = text.strip()
    if not text or text in ("ε", "''", '""'):
        return ()
    if any(ch.isspace() for ch in text):
        word = tuple(text.split())
    else:
        word = tuple(text) if all(len(x) == 1 for x in automaton.letters) else (text,)
    for name in word:
        automaton.letter(name)
    return word


def format_word(word: Sequence[str]) -> str:
    if not word:
        return ""
    if all(len(x) == 1 for x in word):
        return "".join(word)
    return " ".join(word)


def format_states(states: Iterable[int]) -> str:
    """Brace notation, 1-indexed: ``{1,3}``."""
    return "{" + ",".join(str(q + 1) for q in sorted(states)) + "}"


@dataclass(frozen=True)
class AlmostGroupShape:
    perm_letters: tuple[str, ...]
    defect_letter: str
    e: int
    d: int
    coll: StateSet
    standardized: bool

    def permutations(self, automaton: Automaton) -> list[tuple[str, Transformation]]:
        return [(x, automaton.letter(x)) for x in self.perm_letters]


def classify_shape(automaton: Automaton) -> AlmostGroupShape:
    """Split the alphabet into permutation letters and the single defect-1 letter.

    Transitivity of the permutation group is not checked here.
    """
    if automaton.n == 1:
        raise ShapeError("no defect-1 letter possible on a single state")
    perms = []
    defective = []
    for name, t in automaton.alphabet:
        if t.is_permutation:
            perms.append(name)
        elif t.defect == 1:
            defective.append(name)
        else:
            raise ShapeError(f"letter {name!r} has defect {t.defect}; only defect 1 is allowed")
    if not defective:
        raise ShapeError("no defect-1 letter")
    if len(defective) > 1:
        raise ShapeError(f"more than one defect-1 letter: {', '.join(defective)}")
    (name,) = defective
    if automaton.defect_letter is not None and automaton.defect_letter != name:
        raise ShapeError(
            f"declared defect letter {automaton.defect_letter!r} is a permutation; "
            f"the defect-1 letter is {name!r}"
        )
    a = automaton.letter(name)
    (e,) = a.excl()
    (d,) = a.dupl()
    c = a.coll()
    return AlmostGroupShape(tuple(perms), name, e, d, c, e in c)


def permutation_orbit(
    perms: Sequence[tuple[str, Transformation]], q: int
) -> dict[int, Word]:
    """Breadth-first orbit of ``q`` with shortest witness words.

    Ties between equally short words go to the earlier generator.
    """
    witness: dict[int, Word] = {q: ()}
    queue = deque([q])
    while queue:
        p = queue.popleft()
        for name, t in perms:
            x = t[p]
            if x not in witness:
                witness[x] = witness[p] + (name,)
                queue.append(x)
    return witness


def standardize(
    automaton: Automaton, shape: AlmostGroupShape
) -> tuple[Automaton, Word]:
    """Replace the defect letter ``a`` by ``u a`` with ``e . u`` in ``coll(a)``.

    Returns the new automaton and ``u``; ``u`` is a shortest permutation word
    for this, ties broken by alphabet order. Already-standardized input comes
    back unchanged with the empty word.
    """
    if shape.standardized:
        return automaton, ()
    witness = permutation_orbit(shape.permutations(automaton), shape.e)
    hits = [r for r in witness if r in shape.coll]
    if not hits:
        raise StandardizeError(
            f"no permutation word sends state {shape.e + 1} into "
            f"{format_states(shape.coll)}; the permutation group is not transitive"
        )
    # BFS order of witness insertion = (length, generator order)
    r = min(hits, key=lambda x: (len(witness[x]), list(witness).index(x)))
    u = witness[r]
    a = automaton.letter(shape.defect_letter)
    standardized = compose(word_transformation(automaton, u), a)
    return automaton.replace_letter(shape.defect_letter, standardized), u
