"""Differential testing of the matching engines and of type inference.

Patterns are enumerated by size, then by constructor order
(``_``, letters, ``+``, ``.``, ``*``).  For each pattern and context the
harness compares

* the compiled automaton engine with the reference evaluator (must agree);
* the reference evaluator with the first-match unfolding of stars
  (divergences are expected and only reported);
* inferred types and breaks with brute-force enumeration;
* the number of accepting runs of the compiled automaton (at most one).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence

from . import automata as fa
from .hyper import compile, count_accepting_runs
from .infer import KleeneTriple, infer, language
from .oracle import Evaluator, UnsupportedPattern, brute_force_break, brute_force_type
from .pattern import (
    BOX,
    Alt,
    Associations,
    Cat,
    Epsilon,
    Pattern,
    Star,
    Sym,
    bindable_nodes,
    iter_nodes,
    letters,
    parse_pattern,
    to_text,
)
from .runtime import match_bounds, subword

UNIVERSAL = ".*"
STANDARD_CONTEXTS = (UNIVERSAL, "a*b*", "(ab)*", "ab")
EXHAUSTIVE_LIMIT = 20_000
SAMPLE_SIZE = 10_000
# checked on every run in addition to the enumerated corpus
REGRESSION_PATTERNS = ("(a+ab)*(b+_)", "(a+a*)a*(a+_)")


# -------------------------------------------------------------- corpus


def enumerate_patterns(size: int, alphabet: Sequence[str] = ("a", "b")) -> Iterator[Pattern]:
    """All patterns with exactly ``size`` nodes, in constructor order."""
    if size == 1:
        yield Epsilon()
        for c in sorted(alphabet):
            yield Sym(c)
        return
    for ctor in (Alt, Cat):
        for k in range(1, size - 1):
            for left in enumerate_patterns(k, alphabet):
                for right in enumerate_patterns(size - 1 - k, alphabet):
                    yield ctor(left, right)
    for child in enumerate_patterns(size - 1, alphabet):
        yield Star(child)


def patterns_upto(max_size: int, alphabet: Sequence[str] = ("a", "b")) -> Iterator[Pattern]:
    for n in range(1, max_size + 1):
        yield from enumerate_patterns(n, alphabet)


def count_patterns(size: int, letters: int = 2) -> int:
    if size <= 0:
        return 0
    if size == 1:
        return letters + 1
    binary = sum(count_patterns(k, letters) * count_patterns(size - 1 - k, letters)
                 for k in range(1, size - 1))
    return 2 * binary + count_patterns(size - 1, letters)


def select_patterns(max_size: int, seed: int = 0, alphabet: Sequence[str] = ("a", "b"),
                    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
                    sample_size: int = SAMPLE_SIZE) -> list[Pattern]:
    """Every pattern up to ``max_size``, or a seeded sample when there are too many."""
    total = sum(count_patterns(n, len(alphabet)) for n in range(1, max_size + 1))
    if total <= exhaustive_limit:
        return list(patterns_upto(max_size, alphabet))
    rng = random.Random(seed)
    chosen = sorted(rng.sample(range(total), sample_size))
    picked, wanted = [], iter(chosen)
    target = next(wanted, None)
    for i, p in enumerate(patterns_upto(max_size, alphabet)):
        if i == target:
            picked.append(p)
            target = next(wanted, None)
            if target is None:
                break
    return picked


def context_automaton(text: str, alphabet: Iterable[str]) -> fa.Nfa:
    alphabet = frozenset(alphabet)
    if text == UNIVERSAL:
        return fa.universal(alphabet)
    return fa.from_pattern(parse_pattern(text, set(alphabet)), alphabet)


def all_words(alphabet: Iterable[str], max_len: int) -> list[str]:
    sigma = sorted(alphabet)
    return ["".join(t) for n in range(max_len + 1) for t in itertools.product(sigma, repeat=n)]


def truncate(context: fa.Nfa, words: Iterable[str]) -> fa.Nfa:
    """The context restricted to the given finite word list."""
    return fa.minimize(fa.finite([w for w in words if context.accepts(w)], context.alphabet))


# -------------------------------------------------------------- report


@dataclass
class Mismatch:
    pattern: str
    context: str
    word: str
    first: Optional[Associations]
    second: Optional[Associations]


@dataclass
class TypeFailure:
    pattern: str
    context: str
    node: str
    kind: str  # "type", "break", "root" or "inclusion"
    missing: list[str]
    extra: list[str]


@dataclass
class DiffReport:
    cases_run: int = 0
    words_run: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)
    divergences: list[Mismatch] = field(default_factory=list)
    type_failures: list[TypeFailure] = field(default_factory=list)
    ambiguous: list[tuple[str, str, str, int]] = field(default_factory=list)
    adjacency_failures: list[tuple[str, str, str, str]] = field(default_factory=list)
    first_match_skipped: int = 0

    @property
    def ok(self) -> bool:
        return not (self.mismatches or self.type_failures or self.ambiguous
                    or self.adjacency_failures)

    def merge(self, other: "DiffReport") -> None:
        self.cases_run += other.cases_run
        self.words_run += other.words_run
        self.mismatches += other.mismatches
        self.divergences += other.divergences
        self.type_failures += other.type_failures
        self.ambiguous += other.ambiguous
        self.adjacency_failures += other.adjacency_failures
        self.first_match_skipped += other.first_match_skipped

    def summary(self) -> str:
        return "\n".join([
            f"cases\t{self.cases_run}",
            f"words\t{self.words_run}",
            f"automaton/oracle mismatches\t{len(self.mismatches)}",
            f"oracle/ckleene-prime divergences\t{len(self.divergences)}",
            f"ckleene-prime skipped (nullable star body)\t{self.first_match_skipped}",
            f"type or break failures\t{len(self.type_failures)}",
            f"ambiguous words\t{len(self.ambiguous)}",
            f"boundary adjacency failures\t{len(self.adjacency_failures)}",
        ]) + "\n"


# --------------------------------------------------------------- checks


def _concat_nodes(p: Pattern) -> list[str]:
    bindable = bindable_nodes(p)
    return sorted(n for n, q in iter_nodes(p) if n in bindable and isinstance(q, Cat))


def check_case(p: Pattern, context_text: str, context: fa.Nfa, words: Sequence[str],
               check_types: bool = True, first_match: bool = True,
               evaluators: Optional[tuple[Evaluator, Evaluator]] = None) -> DiffReport:
    """Run every comparison for one pattern under one context.

    ``evaluators`` (reference, first-match) may be shared between calls on
    the same pattern.
    """
    report = DiffReport(cases_run=1)
    ptext = to_text(p)
    h = compile(p, context)
    ev, fm = evaluators or (Evaluator(), Evaluator(first_match_star=True))
    if not first_match:
        fm = None
    cats = _concat_nodes(p)
    for w in words:
        report.words_run += 1
        found = ev.matches(p, w)
        if len(found) > 1:
            report.mismatches.append(Mismatch(ptext, context_text, w, found[0], found[1]))
            continue
        in_context = context.accepts(w)
        expected = found[0] if found and in_context else None
        bounds = match_bounds(h, w)
        got = None if bounds is None else {n: subword(w, b) for n, b in bounds.items()}
        if got != expected:
            report.mismatches.append(Mismatch(ptext, context_text, w, got, expected))
        if bounds is not None:
            for n in cats:
                (_, j1), (i2, _) = bounds[n + "1"], bounds[n + "2"]
                if j1 >= 0 and i2 >= 0 and j1 != i2:
                    report.adjacency_failures.append((ptext, context_text, w, n))
        runs = count_accepting_runs(h, w)
        if runs > 1:
            report.ambiguous.append((ptext, context_text, w, runs))
        if fm is not None and in_context:
            try:
                other = fm.matches(p, w)
            except UnsupportedPattern:
                report.first_match_skipped += 1
                fm = None
                continue
            alt = other[0] if other else None
            if alt != (found[0] if found else None):
                report.divergences.append(Mismatch(ptext, context_text, w, found[0] if found else None, alt))
    if check_types:
        report.type_failures += check_types_case(p, context_text, context, words, ev)
    return report


def check_types_case(p: Pattern, context_text: str, context: fa.Nfa,
                     words: Sequence[str], evaluator: Optional[Evaluator] = None,
                     full_context: bool = True) -> list[TypeFailure]:
    """Inferred types and breaks against brute force.

    On the context truncated to ``words`` the two must agree exactly.  With
    ``full_context`` the untruncated inference is also checked: its root
    type must equal ``L(p) & context`` and every brute-force type must be
    included in it (longer context words may add short subwords).
    """
    max_len = max((len(w) for w in words), default=0)
    members = [w for w in words if context.accepts(w)]
    types, breaks = infer(p, fa.minimize(fa.finite(members, context.alphabet)))
    full = infer(p, context)[0] if full_context else None
    ev = evaluator or Evaluator()
    out = []
    ptext = to_text(p)
    if full is not None:
        root = fa.intersect(language(p, context.alphabet), context)
        w = fa.counterexample(full[""], root)
        if w is not None:
            out.append(TypeFailure(ptext, context_text, "", "root", [w], []))
    for n in sorted(bindable_nodes(p)):
        got = set(fa.words_upto(types[n], max_len))
        want = brute_force_type(n, p, members, evaluator=ev)
        if got != want:
            out.append(TypeFailure(ptext, context_text, n, "type", sorted(want - got), sorted(got - want)))
        if full is not None:
            lost = want - set(fa.words_upto(full[n], max_len))
            if lost:
                out.append(TypeFailure(ptext, context_text, n, "inclusion", sorted(lost), []))
        if n in breaks:
            got = set(fa.words_upto(breaks[n], max_len + 1))
            want = brute_force_break(n, p, members, evaluator=ev)
            if got != want:
                out.append(TypeFailure(ptext, context_text, n, "break", sorted(want - got), sorted(got - want)))
    return out


def kleene_triple_ok(t: KleeneTriple) -> bool:
    """The two sides of a triple are the quotients of its cut language."""
    sigma = t.cuts.alphabet
    box = fa.literal(BOX, sigma)
    tail = fa.concat(box, fa.universal(sigma))
    head = fa.concat(fa.universal(sigma), box)
    return (fa.equivalent(fa.drop_box(fa.right_quotient(t.cuts, tail)), t.star_type)
            and fa.equivalent(fa.drop_box(fa.left_quotient(head, t.cuts)), t.rest_context))


def run_difftest(max_pattern_size: int = 7, max_word_len: int = 5, seed: int = 0,
                 alphabet: Sequence[str] = ("a", "b"),
                 contexts: Sequence[str] = STANDARD_CONTEXTS,
                 check_types: bool = True,
                 progress: Optional[Callable[[int, int], None]] = None,
                 extra_patterns: Sequence[str] = REGRESSION_PATTERNS) -> DiffReport:
    patterns = select_patterns(max_pattern_size, seed, alphabet)
    seen = set(patterns)
    for text in extra_patterns:
        p = parse_pattern(text)
        if p not in seen and letters(p) <= set(alphabet):
            patterns.append(p)
            seen.add(p)
    ctx = [(t, context_automaton(t, alphabet)) for t in contexts]
    words = all_words(alphabet, max_word_len)
    report = DiffReport()
    for i, p in enumerate(patterns):
        shared = (Evaluator(), Evaluator(first_match_star=True))
        for text, c in ctx:
            report.merge(check_case(p, text, c, words, check_types, evaluators=shared))
        if progress is not None:
            progress(i + 1, len(patterns))
    return report
