"""Reference evaluator of the unique-matching rules.

The evaluator enumerates every derivation the inference rules admit for a
given word, so it doubles as a uniqueness checker: ``oracle_match`` fails
loudly if a word ever has two different association maps.

Two rule sets are available.  The default one disambiguates a star that
heads a concatenation by the longest-match rule.  The ``first_match_star``
variant instead rewrites ``P1* . P2`` into ``((P1 . P1*) + _) . P2`` and
relies on first match alone, which is how several earlier languages
approximated longest match; it disagrees with the real rule on inputs such
as ``(a+ab)*(b+_)`` against ``ab``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .pattern import (
    Alt,
    Associations,
    Cat,
    Epsilon,
    Pattern,
    Star,
    Sym,
    bindable_nodes,
    iter_nodes,
    nullable,
    to_text,
)


class AmbiguousDerivation(AssertionError):
    pass


class UnsupportedPattern(ValueError):
    pass


@dataclass(frozen=True)
class Split:
    cut: int
    left: Associations
    right: Associations


def _freeze(v: Associations):
    return tuple(sorted(v.items()))


def _dedupe(items):
    seen = {}
    for item in items:
        key = (item.cut, _freeze(item.left), _freeze(item.right)) if isinstance(item, Split) else _freeze(item)
        seen.setdefault(key, item)
    return list(seen.values())


def _or_left(v: Associations, right: Pattern) -> Associations:
    out = {"": v[""]}
    out.update({"1" + n: x for n, x in v.items()})
    out.update({"2" + n: None for n in bindable_nodes(right)})
    return out


def _or_right(left: Pattern, v: Associations) -> Associations:
    out = {"": v[""]}
    out.update({"1" + n: None for n in bindable_nodes(left)})
    out.update({"2" + n: x for n, x in v.items()})
    return out


def _cat(v1: Associations, v2: Associations) -> Associations:
    a, b = v1[""], v2[""]
    out = {"": a + b if a is not None and b is not None else None}
    out.update({"1" + n: x for n, x in v1.items()})
    out.update({"2" + n: x for n, x in v2.items()})
    return out


class Evaluator:
    """Memoizing evaluator for one rule set.  Not shared between threads."""

    def __init__(self, first_match_star: bool = False):
        self.first_match_star = first_match_star
        self._match: dict = {}
        self._split: dict = {}

    # ``w in P`` in the side conditions means: some derivation exists.
    def member(self, p: Pattern, w: str) -> bool:
        return bool(self.matches(p, w))

    def matches(self, p: Pattern, w: str) -> list[Associations]:
        key = (p, w)
        got = self._match.get(key)
        if got is None:
            got = self._match[key] = _dedupe(self._derive(p, w))
        return got

    def splits(self, head: Pattern, rest: Pattern, w: str) -> list[Split]:
        key = (head, rest, w)
        got = self._split.get(key)
        if got is None:
            got = self._split[key] = _dedupe(self._derive_split(head, rest, w))
        return got

    def _derive(self, p, w):
        if isinstance(p, Epsilon):  # Empty
            if w == "":
                yield {"": ""}
        elif isinstance(p, Sym):  # Lab
            if w == p.symbol:
                yield {"": w}
        elif isinstance(p, Star):
            if w == "":  # Kleene Empty
                yield {"": ""}
                return
            for i in range(1, len(w) + 1):  # Kleene Closure
                if self.member(p.child, w[:i]) and self.member(p, w[i:]):
                    yield {"": w}
                    return
        elif isinstance(p, Alt):
            for v in self.matches(p.left, w):  # Or1
                yield _or_left(v, p.right)
            if not self.member(p.left, w):  # Or2
                for v in self.matches(p.right, w):
                    yield _or_right(p.left, v)
        else:  # CElem
            for s in self.splits(p.left, p.right, w):
                yield _cat(s.left, s.right)

    def _derive_split(self, head, rest, w):
        if isinstance(head, Epsilon):  # CEmpty
            for v in self.matches(rest, w):
                yield Split(0, {"": ""}, v)
        elif isinstance(head, Sym):  # CLab
            if w[:1] == head.symbol:
                for v in self.matches(rest, w[1:]):
                    yield Split(1, {"": head.symbol}, v)
        elif isinstance(head, Alt):
            for s in self.splits(head.left, rest, w):  # COr1
                yield Split(s.cut, _or_left(s.left, head.right), s.right)
            if not self.member(Cat(head.left, rest), w):  # COr2
                for s in self.splits(head.right, rest, w):
                    yield Split(s.cut, _or_right(head.left, s.left), s.right)
        elif isinstance(head, Cat):  # CCon
            p1, p2 = head.left, head.right
            for outer in self.splits(p1, Cat(p2, rest), w):
                for inner in self.splits(p2, rest, w[outer.cut:]):
                    yield Split(outer.cut + inner.cut, _cat(outer.left, inner.left), inner.right)
        elif self.first_match_star:
            yield from self._kleene_prime(head, rest, w)
        else:
            yield from self._kleene(head, rest, w)

    def _kleene(self, head, rest, w):
        # CKleene: positive premises, then the negative premise checked literally
        for cut in range(len(w) + 1):
            w1, w2 = w[:cut], w[cut:]
            if not self.member(head, w1):
                continue
            blocked = any(
                self.member(head, w1 + w2[:k]) and self.member(rest, w2[k:])
                for k in range(1, len(w2) + 1)
            )
            if blocked:
                continue
            for v2 in self.matches(rest, w2):
                for v1 in self.matches(head, w1):
                    yield Split(cut, v1, v2)

    def _kleene_prime(self, head, rest, w):
        inner = head.child
        if nullable(inner):
            raise UnsupportedPattern(
                f"{to_text(head)} heads a concatenation but its body matches the empty word"
            )
        unfolded = Alt(Cat(inner, head), Epsilon())
        for s in self.splits(unfolded, rest, w):
            # stars are atomic: report only the matched subword of the star node
            yield Split(s.cut, {"": s.left[""]}, s.right)


def _star_heads(p: Pattern) -> Iterable[Pattern]:
    """Stars that can end up on the left of a concatenation during evaluation."""

    def walk(node, head):
        if head and isinstance(node, Star):
            yield node
        if isinstance(node, Cat):
            yield from walk(node.left, True)
            yield from walk(node.right, head)
        elif isinstance(node, Alt):
            yield from walk(node.left, head)
            yield from walk(node.right, head)
        elif isinstance(node, Star):
            yield from walk(node.child, False)

    yield from walk(p, False)


def check_first_match_precondition(p: Pattern) -> None:
    for star in _star_heads(p):
        if nullable(star.child):
            raise UnsupportedPattern(
                f"{to_text(star)} heads a concatenation but its body matches the empty word"
            )


def _unique(results: list[Associations], p: Pattern, w: str) -> Optional[Associations]:
    if len(results) > 1:
        raise AmbiguousDerivation(f"{to_text(p)} derives {len(results)} association maps for {w!r}")
    return results[0] if results else None


def oracle_match(p: Pattern, w: str, evaluator: Optional[Evaluator] = None) -> Optional[Associations]:
    """Association map for ``w`` under longest/first match, or None if no match."""
    ev = evaluator or Evaluator()
    return _unique(ev.matches(p, w), p, w)


def oracle_match_firstmatch(
    p: Pattern, w: str, evaluator: Optional[Evaluator] = None
) -> Optional[Associations]:
    """Same, with the first-match-plus-unfolding treatment of stars."""
    check_first_match_precondition(p)
    ev = evaluator or Evaluator(first_match_star=True)
    return _unique(ev.matches(p, w), p, w)


def all_matches(p: Pattern, w: str, first_match_star: bool = False) -> list[Associations]:
    """Every association map derivable for ``w`` (at most one, by construction)."""
    return Evaluator(first_match_star).matches(p, w)


def oracle_split(head: Pattern, rest: Pattern, w: str, evaluator: Optional[Evaluator] = None):
    ev = evaluator or Evaluator()
    got = ev.splits(head, rest, w)
    if len(got) > 1:
        raise AmbiguousDerivation(f"{to_text(Cat(head, rest))} splits {w!r} in {len(got)} ways")
    return got[0] if got else None


def brute_force_type(address: str, p: Pattern, context_words: Iterable[str],
                     first_match_star: bool = False,
                     evaluator: Optional[Evaluator] = None) -> set[str]:
    ev = evaluator or Evaluator(first_match_star)
    out = set()
    for w in context_words:
        v = _unique(ev.matches(p, w), p, w)
        if v is not None and v[address] is not None:
            out.add(v[address])
    return out


def brute_force_break(address: str, p: Pattern, context_words: Iterable[str],
                      first_match_star: bool = False,
                      evaluator: Optional[Evaluator] = None) -> set[str]:
    node = dict(iter_nodes(p)).get(address)
    if not isinstance(node, Cat):
        raise ValueError(f"node {address or 'root'} is not a concatenation")
    ev = evaluator or Evaluator(first_match_star)
    out = set()
    for w in context_words:
        v = _unique(ev.matches(p, w), p, w)
        if v is None:
            continue
        a, b = v[address + "1"], v[address + "2"]
        if a is not None and b is not None:
            out.add(a + "#" + b)
    return out
