import itertools

import pytest
from hypothesis import given, settings

from uniqmatch import automata as fa
from uniqmatch.oracle import (
    AmbiguousDerivation,
    Evaluator,
    UnsupportedPattern,
    all_matches,
    brute_force_break,
    brute_force_type,
    oracle_match,
    oracle_match_firstmatch,
    oracle_split,
)
from uniqmatch.pattern import Alt, Cat, Star, bindable_nodes, nullable, parse_pattern

from .strategies import patterns

P = parse_pattern
WORDS = ["".join(t) for n in range(6) for t in itertools.product("ab", repeat=n)]
SHORT = [w for w in WORDS if len(w) <= 4]


def test_counterexample_longest_match():
    assert oracle_match(P("(a+ab)*(b+_)"), "ab") == {
        "": "ab", "1": "ab", "2": "", "21": None, "22": ""
    }


def test_counterexample_first_match_unfolding():
    v = oracle_match_firstmatch(P("(a+ab)*(b+_)"), "ab")
    assert v == {"": "ab", "1": "a", "2": "b", "21": "b", "22": None}


def test_empty_pattern():
    assert oracle_match(P("_"), "") == {"": ""}
    assert oracle_match(P("_"), "a") is None


def test_overlapping_stars():
    v = oracle_match(P("(a+a*)a*(a+_)"), "aaaa")
    assert v == {
        "": "aaaa", "1": "a", "11": "a", "12": None,
        "2": "aaa", "21": "aaa", "22": "", "221": None, "222": "",
    }


def test_no_match():
    assert oracle_match(P("a"), "b") is None


def test_first_match_agrees_when_unambiguous():
    assert oracle_match_firstmatch(P("a*(b+_)"), "aab")["1"] == "aa"
    assert oracle_match(P("a*(b+_)"), "aab")["1"] == "aa"


def test_first_match_precondition():
    with pytest.raises(UnsupportedPattern):
        oracle_match_firstmatch(P("(_)*a"), "a")
    with pytest.raises(UnsupportedPattern):
        oracle_match_firstmatch(P("(a*)*b"), "b")
    # a nullable star body is fine when the star does not head a concatenation
    assert oracle_match_firstmatch(P("(_)*"), "") == {"": ""}


def test_split_relation():
    s = oracle_split(P("a*"), P("ab"), "aab")
    assert s.cut == 1
    assert s.left[""] == "a" and s.right[""] == "ab"
    assert oracle_split(P("a"), P("b"), "ba") is None


def test_uniqueness_guard():
    p = P("a")
    ev = Evaluator()
    ev._match[(p, "a")] = [{"": "a"}, {"": "b"}]
    with pytest.raises(AmbiguousDerivation):
        oracle_match(p, "a", ev)


def test_brute_force_types():
    p = P("(a+ab)*(b+_)")
    assert brute_force_type("1", p, ["ab"]) == {"ab"}
    assert brute_force_type("2", p, ["ab"]) == {""}
    assert brute_force_type("", P("a*"), ["b"]) == set()
    assert brute_force_type("1", p, ["ab"], first_match_star=True) == {"a"}
    assert brute_force_type("2", p, ["ab"], first_match_star=True) == {"b"}


def test_brute_force_breaks():
    assert brute_force_break("", P("(a+ab)*(b+_)"), ["ab"]) == {"ab#"}
    assert brute_force_break("", P("ab"), ["ab"]) == {"a#b"}
    assert brute_force_break("", P("a*b"), ["b"]) == {"#b"}
    with pytest.raises(ValueError):
        brute_force_break("", P("a+b"), ["a"])


# -------------------------------------------------------------- properties


@settings(max_examples=80, deadline=None)
@given(patterns())
def test_semantic_correctness(p):
    a = fa.from_pattern(p, "ab")
    ev = Evaluator()
    for w in WORDS:
        v = oracle_match(p, w, ev)
        assert (v is not None) == a.accepts(w)
        if v is not None:
            assert v[""] == w
            assert set(v) == bindable_nodes(p)


@settings(max_examples=80, deadline=None)
@given(patterns())
def test_every_derivation_is_the_same(p):
    for w in SHORT:
        assert len(all_matches(p, w)) <= 1


@settings(max_examples=60, deadline=None)
@given(patterns(4), patterns(4))
def test_consecutive_match(head, rest):
    ev = Evaluator()
    for w in SHORT:
        for s in ev.splits(head, rest, w):
            assert s.left[""] + s.right[""] == w
            assert oracle_match(rest, w[s.cut:], ev) == s.right


@settings(max_examples=60, deadline=None)
@given(patterns(4), patterns(4))
def test_first_match_law(p1, p2):
    ev = Evaluator()
    alt = Alt(p1, p2)
    for w in SHORT:
        if ev.member(p1, w):
            v = oracle_match(alt, w, ev)
            assert all(v["2" + n] is None for n in bindable_nodes(p2))


@settings(max_examples=60, deadline=None)
@given(patterns(3), patterns(4))
def test_longest_match_law(body, rest):
    star = Star(body)
    p = Cat(star, rest)
    ev = Evaluator()
    for w in SHORT:
        v = oracle_match(p, w, ev)
        if v is None:
            continue
        cuts = [i for i in range(len(w) + 1) if ev.member(star, w[:i]) and ev.member(rest, w[i:])]
        assert v["1"] == w[: max(cuts)]


@settings(max_examples=60, deadline=None)
@given(patterns())
def test_first_match_engine_is_a_function(p):
    try:
        for w in SHORT:
            v = oracle_match_firstmatch(p, w)
            assert (v is not None) == (oracle_match(p, w) is not None)
    except UnsupportedPattern:
        # the rewrite only applies to stars that can reach the head of a concatenation
        terms = list(_subterms(p))
        assert any(isinstance(q, Cat) for q in terms)
        assert any(isinstance(q, Star) and nullable(q.child) for q in terms)


def _subterms(p):
    yield p
    for child in (getattr(p, "left", None), getattr(p, "right", None), getattr(p, "child", None)):
        if child is not None:
            yield from _subterms(child)
