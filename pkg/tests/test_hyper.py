import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uniqmatch import automata as fa
from uniqmatch import hyper
from uniqmatch.hyper import compile, count_accepting_runs, sub_automaton
from uniqmatch.infer import infer
from uniqmatch.pattern import InvalidAddress, bindable_nodes, parse_pattern

from .strategies import patterns

AB = frozenset("ab")
SIGMA_STAR = fa.universal(AB)
P = parse_pattern
WORDS = ["".join(t) for n in range(5) for t in itertools.product("ab", repeat=n)]
CONTEXTS = ["a*b*", "(ab)*", "ab", "(a+b)*a"]


def ctx(text):
    return fa.from_pattern(P(text), AB)


def test_single_letter():
    h = compile(P("a"), SIGMA_STAR)
    a = h.automaton
    assert fa.equivalent(a, fa.literal("a", AB))
    assert h.triple("") == hyper.StateTriple.of(a.states, a.initials, a.finals)


def test_counterexample_under_its_own_context():
    h = compile(P("(a+ab)*(b+_)"), fa.literal("ab", AB))
    assert set(fa.words_upto(h.automaton, 4)) == {"ab"}
    assert set(fa.words_upto(sub_automaton(h, "1"), 4)) == {"ab"}
    assert set(fa.words_upto(sub_automaton(h, "2"), 4)) == {""}


def test_counterexample_node_types_under_full_context():
    p = P("(a+ab)*(b+_)")
    h = compile(p, SIGMA_STAR)
    types, _ = infer(p, SIGMA_STAR)
    for n in bindable_nodes(p):
        assert fa.equivalent(sub_automaton(h, n), types[n])
    assert {"", "a", "ab", "aab", "abab"} <= set(fa.words_upto(sub_automaton(h, "1"), 4))


def test_unknown_node():
    with pytest.raises(InvalidAddress):
        compile(P("a*"), SIGMA_STAR).triple("1")


@pytest.mark.parametrize(
    "pattern, word, runs",
    [("a+a", "a", 1), ("a+a", "b", 0), ("(a+ab)*(b+_)", "ab", 1), ("(a+ab)*(b+_)", "ba", 0)],
)
def test_count_accepting_runs(pattern, word, runs):
    assert count_accepting_runs(compile(P(pattern), SIGMA_STAR), word) == runs


def test_run_counter_counts_real_ambiguity():
    # a plain position automaton for a+a has two accepting runs on a
    a = fa.from_pattern(P("a+a"), AB)
    h = hyper.Hyperautomaton(a, {"": hyper.StateTriple.of(a.states, a.initials, a.finals)},
                             P("a+a"), SIGMA_STAR)
    assert count_accepting_runs(h, "a") == 2


def test_silent_cycle_rejected():
    a = fa.Nfa(AB, 2, frozenset({0}), frozenset({1}), ({"": {1}}, {"": {0}}))
    with pytest.raises(ValueError):
        hyper.silent_order(a)


# -------------------------------------------------------- serialization


def test_roundtrip_single_letter():
    h = compile(P("a"), SIGMA_STAR)
    g = hyper.deserialize(hyper.serialize(h))
    assert hyper.to_dict(g) == hyper.to_dict(h)


@pytest.mark.parametrize(
    "data",
    [b"", b"garbage", b"[]", b'{"format": "other"}',
     json.dumps({"format": hyper.FORMAT_NAME, "version": 99}).encode()],
)
def test_deserialize_garbage(data):
    with pytest.raises(ValueError):
        hyper.deserialize(data)


def test_deserialize_rejects_missing_triples():
    d = hyper.to_dict(compile(P("ab"), SIGMA_STAR))
    del d["triples"]["1"]
    with pytest.raises(ValueError):
        hyper.from_dict(d)


def test_deserialize_rejects_foreign_states():
    d = hyper.to_dict(compile(P("ab"), SIGMA_STAR))
    d["triples"]["root"]["Q"].append(10_000)
    with pytest.raises(ValueError):
        hyper.from_dict(d)


def test_dot_lists_node_membership():
    dot = hyper.to_dot(compile(P("ab"), SIGMA_STAR))
    assert dot.startswith("digraph H {")
    assert "root 1" in dot and "root 2" in dot


# ----------------------------------------------------------- properties


@settings(max_examples=50, deadline=None)
@given(patterns(), st.sampled_from(CONTEXTS))
def test_node_automata_recognize_the_inferred_types(p, context_text):
    c = ctx(context_text)
    h = compile(p, c)
    types, _ = infer(p, c)
    assert fa.equivalent(h.automaton, fa.intersect(fa.from_pattern(p, AB), c))
    for n in bindable_nodes(p):
        assert fa.equivalent(sub_automaton(h, n), types[n])


@settings(max_examples=50, deadline=None)
@given(patterns(), st.sampled_from(CONTEXTS))
def test_unambiguous(p, context_text):
    h = compile(p, ctx(context_text))
    assert all(count_accepting_runs(h, w) <= 1 for w in WORDS)


@settings(max_examples=30, deadline=None)
@given(patterns())
def test_roundtrip_preserves_runs(p):
    h = compile(p, SIGMA_STAR)
    g = hyper.deserialize(hyper.serialize(h))
    assert g.pattern == p
    assert [count_accepting_runs(g, w) for w in WORDS] == [count_accepting_runs(h, w) for w in WORDS]
