"""Exact type inference for every bindable node under a regular context.

``infer(p, context)`` returns two maps keyed by node address:

* types: an automaton over the letters for the set of subwords the node
  binds when words of the context are matched against ``p``;
* breaks: for concatenation nodes, an automaton over letters plus ``#``
  for the words ``u#v`` where ``u`` and ``v`` are the bindings of the two
  children.

The recursion dispatches on the shape of the pattern.  ``(P1.P2).P3`` is
handled through ``P1.(P2.P3)`` and ``(P1+P2).P3`` through ``P1.P3`` and
``P2.P3``, so every recursive call is on a pattern that is smaller in the
(size, size of left factor) order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, wraps

from . import automata as fa
from .automata import Nfa
from .pattern import (
    BOX,
    Alt,
    Cat,
    Epsilon,
    InvalidAddress,
    Pattern,
    Star,
    Sym,
    bindable_nodes,
    format_address,
    reassociated,
    subpattern_at,
)


MEMO_LIMIT = 200_000


def memoized(fn):
    """Cache on the pattern arguments plus the structure of the final automaton.

    Contexts are always minimal DFAs here, so equal structure means equal
    language.  The state limit is part of the key so that a cached result
    never hides a limit violation.  Results must be treated as read-only.
    """
    cache: dict = {}

    @wraps(fn)
    def wrapper(*args):
        key = (args[:-1], fa.current_state_limit(), fa.signature(args[-1]))
        hit = cache.get(key)
        if hit is None:
            if len(cache) >= MEMO_LIMIT:
                cache.clear()
            hit = cache[key] = fn(*args)
        return hit

    wrapper.cache_clear = cache.clear
    wrapper.cache_values = lambda: list(cache.values())
    return wrapper


@lru_cache(maxsize=4096)
def language(p: Pattern, alphabet: frozenset[str]) -> Nfa:
    """Minimal DFA of the pattern's language."""
    return fa.minimize(fa.from_pattern(p, alphabet))


def shrink(a: Nfa) -> Nfa:
    """Language-preserving normal form used for contexts (minimal DFA)."""
    return fa.minimize(a)


@dataclass(frozen=True)
class KleeneTriple:
    """Languages that govern ``P1* . P2`` under a context.

    ``cuts`` holds the words ``p#s`` where ``p`` is the longest prefix the
    star may take; ``star_type`` and ``rest_context`` are its two sides.
    """

    cuts: Nfa
    star_type: Nfa
    rest_context: Nfa


@memoized
def kleene_triple(p1: Pattern, p2: Pattern, context: Nfa) -> KleeneTriple:
    alphabet = context.alphabet
    l1 = language(Star(p1), alphabet)
    l2 = language(p2, alphabet)
    box = fa.literal(BOX, alphabet)
    l1_box = fa.concat(l1, box)
    # words of L1 with a box inserted anywhere but at the very end
    overshoot = fa.difference(fa.inverse_project(l1), l1_box)
    candidates = fa.concat(l1_box, l2)
    cuts = fa.intersect(
        fa.inverse_project(context),
        fa.difference(candidates, fa.concat(overshoot, l2)),
    )
    cuts = shrink(cuts)
    star_type = shrink(fa.drop_box(fa.right_quotient(cuts, fa.concat(box, l2))))
    rest_context = shrink(fa.drop_box(fa.left_quotient(l1_box, cuts)))
    return KleeneTriple(cuts, star_type, rest_context)


def _prefixed(digit: str, table: dict) -> dict:
    return {digit + n: a for n, a in table.items()}


def infer(p: Pattern, context: Nfa) -> tuple[dict[str, Nfa], dict[str, Nfa]]:
    """Types of all bindable nodes and breaks of all bindable concatenations."""
    if context.marked:
        raise ValueError("the context must be a language over plain letters")
    return _infer(p, shrink(context))


@memoized
def _infer(p: Pattern, c: Nfa):
    sigma = c.alphabet
    if isinstance(p, (Epsilon, Sym, Star)):
        return {"": shrink(fa.intersect(language(p, sigma), c))}, {}

    if isinstance(p, Alt):
        t1, b1 = _infer(p.left, c)
        t2, b2 = _infer(p.right, shrink(fa.difference(c, language(p.left, sigma))))
        types = {"": shrink(fa.union(t1[""], t2[""]))}
        types.update(_prefixed("1", t1))
        types.update(_prefixed("2", t2))
        return types, {**_prefixed("1", b1), **_prefixed("2", b2)}

    head, rest = p.left, p.right
    box = fa.literal(BOX, sigma)

    if isinstance(head, (Epsilon, Sym)):
        left_ctx = shrink(fa.right_quotient(c, language(rest, sigma)))
        t1 = shrink(fa.intersect(language(head, sigma), left_ctx))
        rest_ctx = c if isinstance(head, Epsilon) else shrink(fa.left_quotient(language(head, sigma), c))
        t2, b2 = _infer(rest, rest_ctx)
        brk = shrink(fa.concat_all(t1, box, t2[""]))
        types = {"1": t1, **_prefixed("2", t2)}
        types[""] = shrink(fa.project(brk))
        return types, {"": brk, **_prefixed("2", b2)}

    if isinstance(head, Star):
        triple = kleene_triple(head.child, rest, c)
        t2, b2 = _infer(rest, triple.rest_context)
        types = {"1": triple.star_type, **_prefixed("2", t2)}
        types[""] = shrink(fa.project(triple.cuts))
        return types, {"": triple.cuts, **_prefixed("2", b2)}

    if isinstance(head, Cat):
        p1, p2 = head.left, head.right
        t, b = _infer(Cat(p1, Cat(p2, rest)), c)
        types = {reassociated(n): a for n, a in t.items() if n != "2"}
        breaks = {reassociated(n): a for n, a in b.items() if n != "2"}
        joined = fa.j_construct(b[""], b["2"])
        breaks[""] = shrink(fa.erase_first_box(joined))
        # cut every word of J at its second box
        breaks["1"] = shrink(fa.right_quotient(joined, fa.concat(box, fa.universal(sigma))))
        types["1"] = shrink(fa.project(breaks["1"]))
        return types, breaks

    # (P1 + P2) . P3 via P1.P3 and P2.P3
    p1, p2 = head.left, head.right
    first = Cat(p1, rest)
    t1, b1 = _infer(first, c)
    t2, b2 = _infer(Cat(p2, rest), shrink(fa.difference(c, language(first, sigma))))
    types = {
        "": shrink(fa.union(t1[""], t2[""])),
        "1": shrink(fa.union(t1["1"], t2["1"])),
    }
    types.update({"11" + n[1:]: a for n, a in t1.items() if n.startswith("1")})
    types.update({"12" + n[1:]: a for n, a in t2.items() if n.startswith("1")})
    for n in (n for n in t1 if n.startswith("2")):
        types[n] = shrink(fa.union(t1[n], t2[n]))
    breaks = {"": shrink(fa.union(b1[""], b2[""]))}
    breaks.update({"11" + n[1:]: a for n, a in b1.items() if n.startswith("1")})
    breaks.update({"12" + n[1:]: a for n, a in b2.items() if n.startswith("1")})
    for n in (n for n in b1 if n.startswith("2")):
        breaks[n] = shrink(fa.union(b1[n], b2[n]))
    return types, breaks


def type_of(p: Pattern, context: Nfa, address: str) -> Nfa:
    if address not in bindable_nodes(p):
        raise InvalidAddress(f"{format_address(address)} is not a bindable node")
    return infer(p, context)[0][address]


def break_of(p: Pattern, context: Nfa, address: str) -> Nfa:
    if address not in bindable_nodes(p):
        raise InvalidAddress(f"{format_address(address)} is not a bindable node")
    if not isinstance(subpattern_at(p, address), Cat):
        raise InvalidAddress(f"{format_address(address)} is not a concatenation")
    return infer(p, context)[1][address]
