"""Complete reachability of almost-group automata.

An almost-group automaton has permutation letters plus exactly one letter of
defect 1. This package builds the block structure of the permutation group
and the Rystsov graph hierarchy, decides complete reachability from them, and
checks every verdict against an exhaustive power-set search.
"""

import logging

from .automaton import (
    AlmostGroupShape,
    Automaton,
    AutomatonError,
    ShapeError,
    StandardizeError,
    Transformation,
    classify_shape,
    compose,
    standardize,
    word_transformation,
)
from .decision import Answer, DecidedBy, DecideOptions, Verdict, decide
from .fileformat import ParseError, load_automaton, parse_automaton, serialize_automaton
from .oracle import is_completely_reachable_bruteforce, reachable_subsets
from .rystsov import build_hierarchy

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "AlmostGroupShape",
    "Answer",
    "Automaton",
    "AutomatonError",
    "DecideOptions",
    "DecidedBy",
    "ParseError",
    "ShapeError",
    "StandardizeError",
    "Transformation",
    "Verdict",
    "build_hierarchy",
    "classify_shape",
    "compose",
    "decide",
    "is_completely_reachable_bruteforce",
    "load_automaton",
    "parse_automaton",
    "reachable_subsets",
    "serialize_automaton",
    "standardize",
    "word_transformation",
]
