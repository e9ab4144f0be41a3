"""Compilation of a pattern and a context into a hyperautomaton.

A hyperautomaton is one automaton ``A`` with ``L(A) = L(P) & C`` together
with, for every bindable node, a triple of state sets ``(Q, I, F)``.  Read
with the transitions of ``A``, the triple recognizes the type of the node,
and on the unique accepting run of a word the first and last positions at
which the run visits ``Q`` delimit the subword bound to the node.

The construction follows the same case split as type inference and reuses
its contexts (see ``infer``).
"""

from __future__ import annotations

import json
import weakref
from dataclasses import dataclass
from typing import Iterable, Mapping

from . import automata as fa
from .automata import EPS, Nfa
from .infer import kleene_triple, language, memoized, shrink
from .pattern import (
    Alt,
    Cat,
    Epsilon,
    InvalidAddress,
    Pattern,
    Star,
    Sym,
    bindable_nodes,
    format_address,
    parse_address,
    parse_pattern,
    reassociated,
    to_text,
)

FORMAT_NAME = "uniqmatch-hyperautomaton"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class StateTriple:
    Q: frozenset[int]
    I: frozenset[int]  # noqa: E741
    F: frozenset[int]

    @classmethod
    def of(cls, q: Iterable[int], i: Iterable[int], f: Iterable[int]) -> "StateTriple":
        return cls(frozenset(q), frozenset(i), frozenset(f))

    def shift(self, k: int) -> "StateTriple":
        return StateTriple.of((q + k for q in self.Q), (q + k for q in self.I), (q + k for q in self.F))

    def __or__(self, other: "StateTriple") -> "StateTriple":
        return StateTriple(self.Q | other.Q, self.I | other.I, self.F | other.F)


@dataclass(frozen=True, eq=False)
class Hyperautomaton:
    automaton: Nfa
    triples: Mapping[str, StateTriple]
    pattern: Pattern
    context: Nfa

    def triple(self, address: str) -> StateTriple:
        try:
            return self.triples[address]
        except KeyError:
            raise InvalidAddress(f"{format_address(address)} is not a bindable node") from None


def _whole(a: Nfa) -> StateTriple:
    return StateTriple.of(a.states, a.initials, a.finals)


# ------------------------------------------------------------ compile


def compile(p: Pattern, context: Nfa) -> Hyperautomaton:  # noqa: A001
    """Build the hyperautomaton of ``p`` under ``context``."""
    if context.marked:
        raise ValueError("the context must be a language over plain letters")
    c = shrink(context)
    a, f = _build(p, c)
    return Hyperautomaton(a, dict(f), p, c)


@memoized
def _build(p: Pattern, c: Nfa) -> tuple[Nfa, dict[str, StateTriple]]:
    sigma = c.alphabet
    if isinstance(p, (Epsilon, Sym, Star)):
        a = shrink(fa.intersect(language(p, sigma), c))
        return a, {"": _whole(a)}

    if isinstance(p, Alt):
        a1, f1 = _build(p.left, c)
        a2, f2 = _build(p.right, shrink(fa.difference(c, language(p.left, sigma))))
        a = fa.union(a1, a2)
        f = {"": _whole(a)}
        f.update({"1" + n: t for n, t in f1.items()})
        f.update({"2" + n: t.shift(a1.size) for n, t in f2.items()})
        return a, f

    head, rest = p.left, p.right

    if isinstance(head, (Epsilon, Sym)):
        a1, f1 = _build(head, shrink(fa.right_quotient(c, language(rest, sigma))))
        rest_ctx = c if isinstance(head, Epsilon) else shrink(fa.left_quotient(language(head, sigma), c))
        a2, f2 = _build(rest, rest_ctx)
        a = fa.concat(a1, a2)
        f = {"": _whole(a)}
        f.update({"1" + n: t for n, t in f1.items()})
        f.update({"2" + n: t.shift(a1.size) for n, t in f2.items()})
        return a, f

    if isinstance(head, Star):
        return _build_star(head.child, rest, c)

    if isinstance(head, Cat):
        return _build_reassociated(head.left, head.right, rest, c)

    return _build_distributed(head.left, head.right, rest, c)


def _build_star(p1: Pattern, p2: Pattern, c: Nfa):
    triple = kleene_triple(p1, p2, c)
    a_i = triple.cuts  # minimal complete DFA over letters and box
    a_t1 = triple.star_type
    a2, f2 = _build(p2, triple.rest_context)
    chain = fa.concat_all(a_t1, fa.box_dfa(c.alphabet), a2)
    offset = a_t1.size + 3  # where the states of a2 start inside ``chain``
    product = fa.intersect(chain, a_i)
    pairs = product.origin
    projected = fa.project(product)
    if projected.size != product.size:
        raise AssertionError("box erasure must keep the states of the product")
    # Sink components of the complete DFAs only add dead states; drop them.
    a = fa.trim(projected)
    renumber = {old: new for new, old in enumerate(a.origin)}

    def lift(t: StateTriple, base: int) -> StateTriple:
        def pick(states):
            return (new for old, new in renumber.items() if pairs[old][0] - base in states)

        return StateTriple.of(pick(t.Q), pick(t.I), pick(t.F))

    f = {"": _whole(a), "1": lift(_whole(a_t1), 0)}
    f.update({"2" + n: lift(t, offset) for n, t in f2.items()})
    return a, f


def _build_reassociated(p1: Pattern, p2: Pattern, p3: Pattern, c: Nfa):
    a, g = _build(Cat(p1, Cat(p2, p3)), c)
    f = {reassociated(n): t for n, t in g.items() if n != "2"}
    g1, g21, g22 = g["1"], g["21"], g["22"]
    # States on silent paths from the exits of node 1 into node 21; without
    # them the two halves of the node-1 triple would not be connected.
    bridge = _silent_reach(a, g1.F, forward=True) & _silent_reach(a, g21.I, forward=False)
    q1 = g1.Q | g21.Q | bridge
    live = fa.coreachable(a, a.finals)
    f1 = {
        q for q in g21.F
        if any(r in g22.I and r in live for r in _silent_reach(a, [q], forward=True))
    }
    f["1"] = StateTriple.of(q1, (g1.Q | g21.Q) & a.initials, f1)
    return a, f


def _build_distributed(p1: Pattern, p2: Pattern, p3: Pattern, c: Nfa):
    first = Cat(p1, p3)
    a1, g1 = _build(first, c)
    a2, g2 = _build(Cat(p2, p3), shrink(fa.difference(c, language(first, c.alphabet))))
    a = fa.union(a1, a2)
    # names below are those of the distributed pattern P1.P3 + P2.P3
    g = {"": _whole(a)}
    g.update({"1" + n: t for n, t in g1.items()})
    g.update({"2" + n: t.shift(a1.size) for n, t in g2.items()})
    f = {"": g[""], "1": g["11"] | g["21"]}
    for n, t in g.items():
        if n.startswith("11"):
            f["11" + n[2:]] = t
        elif n.startswith("21"):
            f["12" + n[2:]] = t
    for n in (n for n in g if n.startswith("12")):
        f["2" + n[2:]] = g[n] | g["22" + n[2:]]
    return a, f


def _silent_reach(a: Nfa, starts: Iterable[int], forward: bool) -> set[int]:
    if forward:
        succ = [list(row.get(EPS, ())) for row in a.delta]
    else:
        succ = [[] for _ in a.states]
        for p, lab, q in a.transitions():
            if lab == EPS:
                succ[q].append(p)
    seen = set(starts)
    stack = list(seen)
    while stack:
        p = stack.pop()
        for q in succ[p]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return seen


# ------------------------------------------------------------ queries


def sub_automaton(h: Hyperautomaton, address: str) -> Nfa:
    """The automaton ``(Q, I, F)`` of a node, read with the transitions of ``A``."""
    t = h.triple(address)
    a = fa.relabel(h.automaton, initials=t.I, finals=t.F)
    return fa.restrict(a, t.Q)


def silent_order(a: Nfa) -> list[int]:
    """Topological order of the states along silent transitions."""
    indeg = [0] * a.size
    for p in a.states:
        for q in a.delta[p].get(EPS, ()):
            if q != p:
                indeg[q] += 1
    order = [q for q in a.states if indeg[q] == 0]
    for p in order:
        for q in a.delta[p].get(EPS, ()):
            if q != p:
                indeg[q] -= 1
                if indeg[q] == 0:
                    order.append(q)
    if len(order) != a.size:
        raise ValueError("the automaton has a cycle of silent transitions")
    return order


_ORDERS: "weakref.WeakKeyDictionary[Hyperautomaton, list[int]]" = weakref.WeakKeyDictionary()


def count_accepting_runs(h: Hyperautomaton, w: str) -> int:
    """Number of accepting runs of ``A`` on ``w``.

    A run is a sequence of (state, position) pairs; a silent step must move
    to a different state, so runs are paths in a finite acyclic graph.
    """
    a = h.automaton
    order = _ORDERS.get(h)
    if order is None:
        order = _ORDERS[h] = silent_order(a)

    def spread(counts: dict[int, int]) -> dict[int, int]:
        for p in order:
            n = counts.get(p)
            if n:
                for q in a.delta[p].get(EPS, ()):
                    if q != p:
                        counts[q] = counts.get(q, 0) + n
        return counts

    counts = spread({q: 1 for q in a.initials})
    for c in w:
        nxt: dict[int, int] = {}
        for p, n in counts.items():
            for q in a.delta[p].get(c, ()):
                nxt[q] = nxt.get(q, 0) + n
        counts = spread(nxt)
        if not counts:
            return 0
    return sum(n for q, n in counts.items() if q in a.finals)


# ------------------------------------------------------ serialization


def to_dict(h: Hyperautomaton) -> dict:
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "pattern": to_text(h.pattern),
        "context": fa.to_dict(h.context),
        "automaton": fa.to_dict(h.automaton),
        "triples": {
            format_address(n): {"Q": sorted(t.Q), "I": sorted(t.I), "F": sorted(t.F)}
            for n, t in sorted(h.triples.items())
        },
    }


def serialize(h: Hyperautomaton) -> bytes:
    return json.dumps(to_dict(h), sort_keys=True).encode("utf-8")


def from_dict(d: dict) -> Hyperautomaton:
    try:
        if d.get("format") != FORMAT_NAME:
            raise ValueError("not a serialized hyperautomaton")
        if d.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported version {d.get('version')!r}")
        pattern = parse_pattern(d["pattern"])
        a = fa.from_dict(d["automaton"])
        context = fa.from_dict(d["context"])
        triples = {}
        for name, t in d["triples"].items():
            triple = StateTriple.of(t["Q"], t["I"], t["F"])
            if not (triple.I <= triple.Q and triple.F <= triple.Q and triple.Q <= set(a.states)):
                raise ValueError(f"inconsistent triple for node {name}")
            triples[parse_address(name)] = triple
    except (KeyError, TypeError, AttributeError, InvalidAddress) as exc:
        raise ValueError(f"malformed hyperautomaton: {exc}") from exc
    if set(triples) != bindable_nodes(pattern):
        raise ValueError("triples do not cover exactly the bindable nodes of the pattern")
    return Hyperautomaton(a, triples, pattern, context)


def deserialize(data: bytes | str) -> Hyperautomaton:
    try:
        d = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ValueError(f"malformed hyperautomaton: {exc}") from exc
    if not isinstance(d, dict):
        raise ValueError("malformed hyperautomaton: expected a JSON object")
    return from_dict(d)


def to_dot(h: Hyperautomaton, name: str = "H") -> str:
    """DOT rendering; each state lists the nodes whose triple contains it."""
    notes: dict[int, list[str]] = {}
    for n, t in sorted(h.triples.items()):
        for q in t.Q:
            notes.setdefault(q, []).append(format_address(n))
    return fa.to_dot(h.automaton, name, {q: " ".join(v) for q, v in notes.items()})

