"""Single-scan matching with a compiled hyperautomaton.

State sets are Python ints used as bitmasks (bit ``q`` set means state
``q`` is present).  ``match`` runs a forward pass computing the states
reachable after each prefix, a backward pass keeping only the states that
still lead to acceptance, and then reads every node's bound off the
surviving sets: the first and last position at which the node's states
appear.

Because the automaton is unambiguous, the surviving set at each position
is exactly the set of states the unique accepting run visits there.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from typing import Iterator, Optional

from .hyper import Hyperautomaton, StateTriple
from .pattern import Associations

UNDEFINED = (-1, -1)


@dataclass
class LookupStats:
    """Counts accesses to the per-state transition table."""

    lookups: int = 0


class Tables:
    """Per-automaton lookup tables, built once and shared by every match."""

    def __init__(self, h: Hyperautomaton):
        a = h.automaton
        closure = [_mask(a.closure([q])) for q in a.states]
        self.letters = frozenset(a.alphabet)
        self.start = _mask(a.closure(a.initials))
        self.finals = _mask(a.finals)
        # states whose silent closure contains a final state
        self.accepting = _mask(q for q in a.states if closure[q] & self.finals)
        # hat[q][c]: every state reachable from q by silent moves, c, silent moves
        self.hat: list[dict[str, int]] = []
        for q in a.states:
            row = {}
            for c in a.alphabet:
                m = 0
                for p in _members(closure[q]):
                    for t in a.delta[p].get(c, ()):
                        m |= closure[t]
                if m:
                    row[c] = m
            self.hat.append(row)
        self.nodes = {n: _mask(t.Q) for n, t in h.triples.items()}


_TABLES: "weakref.WeakKeyDictionary[Hyperautomaton, Tables]" = weakref.WeakKeyDictionary()


def tables(h: Hyperautomaton) -> Tables:
    t = _TABLES.get(h)
    if t is None:
        t = _TABLES[h] = Tables(h)
    return t


def _mask(states) -> int:
    m = 0
    for q in states:
        m |= 1 << q
    return m


def _members(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def members(mask: int) -> frozenset[int]:
    """The states of a bitmask state set."""
    return frozenset(_members(mask))


def forward_pass(h: Hyperautomaton, w: str, stats: Optional[LookupStats] = None) -> list[int]:
    """``S_0 .. S_l``; ``S_0`` is the silent closure of the initial states."""
    tab = tables(h)
    hat = tab.hat
    current = tab.start
    sets = [current]
    count = 0
    for c in w:
        nxt = 0
        for q in _members(current):
            nxt |= hat[q].get(c, 0)
            count += 1
        current = nxt
        sets.append(current)
    if stats is not None:
        stats.lookups += count
    return sets


def backward_pass(h: Hyperautomaton, w: str, fwd: list[int],
                  stats: Optional[LookupStats] = None) -> Optional[list[int]]:
    """``S'_0 .. S'_l``, or None when ``w`` is not accepted.

    ``S'_l`` keeps the states of ``S_l`` that reach a final state by silent
    moves, and ``S'_{i-1}`` the states of ``S_{i-1}`` with a ``w[i-1]``
    step into ``S'_i``.
    """
    tab = tables(h)
    hat = tab.hat
    last = fwd[-1] & tab.accepting
    if not last:
        return None
    out = [0] * len(fwd)
    out[-1] = last
    count = 0
    for i in range(len(w), 0, -1):
        c = w[i - 1]
        after = out[i]
        keep = 0
        for q in _members(fwd[i - 1]):
            count += 1
            if hat[q].get(c, 0) & after:
                keep |= 1 << q
        out[i - 1] = keep
    if stats is not None:
        stats.lookups += count
    return out


def extract_bound(bwd: list[int], triple: StateTriple | int) -> tuple[int, int]:
    """First and last positions whose surviving set meets the triple's states."""
    q = triple if isinstance(triple, int) else _mask(triple.Q)
    first = next((i for i, s in enumerate(bwd) if s & q), None)
    if first is None:
        return UNDEFINED
    last = next(i for i in range(len(bwd) - 1, -1, -1) if bwd[i] & q)
    return first, last


def subword(w: str, bound: tuple[int, int]) -> Optional[str]:
    i, j = bound
    if 0 <= i <= j <= len(w):
        return w[i:j]
    return None


def match_bounds(h: Hyperautomaton, w: str,
                 stats: Optional[LookupStats] = None) -> Optional[dict[str, tuple[int, int]]]:
    tab = tables(h)
    fwd = forward_pass(h, w, stats)
    bwd = backward_pass(h, w, fwd, stats)
    if bwd is None:
        return None
    return {n: extract_bound(bwd, m) for n, m in tab.nodes.items()}


def match(h: Hyperautomaton, w: str, stats: Optional[LookupStats] = None) -> Optional[Associations]:
    """Association map of ``w``, or None if ``w`` is outside ``L(P) & C``."""
    if not set(w) <= tables(h).letters:
        return None
    bounds = match_bounds(h, w, stats)
    if bounds is None:
        return None
    return {n: subword(w, b) for n, b in bounds.items()}


__all__ = [
    "LookupStats",
    "UNDEFINED",
    "backward_pass",
    "extract_bound",
    "forward_pass",
    "match",
    "match_bounds",
    "members",
    "subword",
    "tables",
]
