"""Line-oriented automaton files.

::

    # comment
    states 4
    letter b cycles (1,2,3,4)
    letter a images 3 2 3 4
    defect-letter a

States are 1-indexed in files. ``cycles`` is only valid for permutations;
points that do not appear are fixed. Serialization always writes ``images``.
"""

from __future__ import annotations

import re
from pathlib import Path

from .automaton import Automaton, AutomatonError, Transformation


class ParseError(AutomatonError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


_CYCLE = re.compile(r"\(([^()]*)\)")


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", lineno) from None


def _parse_cycles(text: str, n: int, lineno: int) -> Transformation:
    stripped = text.strip()
    if not stripped:
        return Transformation.identity(n)
    if _CYCLE.sub("", stripped).strip():
        raise ParseError(f"malformed cycle notation {stripped!r}", lineno)
    cycles = []
    for body in _CYCLE.findall(stripped):
        tokens = [t for t in re.split(r"[,\s]+", body.strip()) if t]
        points = [_parse_int(t, lineno) for t in tokens]
        for p in points:
            if not 1 <= p <= n:
                raise ParseError(f"state {p} out of range 1..{n}", lineno)
        cycles.append([p - 1 for p in points])
    try:
        return Transformation.from_cycles(n, cycles)
    except AutomatonError as exc:
        raise ParseError(str(exc), lineno) from None


def parse_automaton(text: str) -> Automaton:
    n = None
    letters: list[tuple[str, Transformation]] = []
    names: set[str] = set()
    declared = None
    declared_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "states":
            if n is not None:
                raise ParseError("duplicate 'states' line", lineno)
            n = _parse_int(rest, lineno)
            if n < 1:
                raise ParseError("state count must be at least 1", lineno)
        elif keyword == "letter":
            if n is None:
                raise ParseError("'letter' before 'states'", lineno)
            parts = rest.split(None, 2)
            if len(parts) < 2:
                raise ParseError("expected 'letter <name> images|cycles ...'", lineno)
            name, form = parts[0], parts[1]
            body = parts[2] if len(parts) > 2 else ""
            if name in names:
                raise ParseError(f"duplicate letter name {name!r}", lineno)
            if form == "images":
                values = [_parse_int(t, lineno) for t in body.split()]
                if len(values) != n:
                    raise ParseError(f"letter {name!r} has {len(values)} images, expected {n}", lineno)
                for v in values:
                    if not 1 <= v <= n:
                        raise ParseError(f"image {v} out of range 1..{n}", lineno)
                t = Transformation(v - 1 for v in values)
            elif form == "cycles":
                t = _parse_cycles(body, n, lineno)
            else:
                raise ParseError(f"unknown letter form {form!r}", lineno)
            names.add(name)
            letters.append((name, t))
        elif keyword == "defect-letter":
            if declared is not None:
                raise ParseError("duplicate 'defect-letter' line", lineno)
            if not rest or len(rest.split()) != 1:
                raise ParseError("expected 'defect-letter <name>'", lineno)
            declared, declared_line = rest, lineno
        else:
            raise ParseError(f"unknown keyword {keyword!r}", lineno)
    if n is None:
        raise ParseError("missing 'states' line")
    if declared is not None and declared not in names:
        raise ParseError(f"defect-letter {declared!r} is not a declared letter", declared_line)
    return Automaton(n, tuple(letters), declared)


def serialize_automaton(automaton: Automaton) -> str:
    lines = [f"states {automaton.n}"]
    for name, t in automaton.alphabet:
        lines.append(f"letter {name} images " + " ".join(str(x + 1) for x in t))
    if automaton.defect_letter is not None:
        lines.append(f"defect-letter {automaton.defect_letter}")
    return "\n".join(lines) + "\n"


def load_automaton(path) -> Automaton:
    return parse_automaton(Path(path).read_text(encoding="utf-8"))
