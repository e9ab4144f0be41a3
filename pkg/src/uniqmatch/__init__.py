"""Unique regular expression pattern matching with exact type inference."""

from .automata import Nfa, StateLimitExceeded, state_limit
from .hyper import Hyperautomaton, StateTriple, compile, count_accepting_runs
from .infer import break_of, kleene_triple, type_of
from .oracle import oracle_match, oracle_match_firstmatch
from .pattern import PatternSyntaxError, parse_pattern, to_text
from .runtime import match

__all__ = [
    "Hyperautomaton",
    "Nfa",
    "PatternSyntaxError",
    "StateLimitExceeded",
    "StateTriple",
    "break_of",
    "compile",
    "count_accepting_runs",
    "kleene_triple",
    "match",
    "oracle_match",
    "oracle_match_firstmatch",
    "parse_pattern",
    "state_limit",
    "to_text",
    "type_of",
]
