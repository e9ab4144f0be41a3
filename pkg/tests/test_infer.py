import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uniqmatch import automata as fa
from uniqmatch.infer import break_of, infer, kleene_triple, type_of
from uniqmatch.oracle import brute_force_break, brute_force_type
from uniqmatch.pattern import (
    BOX,
    Cat,
    InvalidAddress,
    bindable_nodes,
    iter_nodes,
    parse_pattern,
    reassociated,
)

from .strategies import patterns

AB = frozenset("ab")
WORDS = ["".join(t) for n in range(6) for t in itertools.product("ab", repeat=n)]
P = parse_pattern
SIGMA_STAR = fa.universal(AB)
CONTEXTS = ["a*b*", "(ab)*", "ab", "(a+b)*", "b*a", "a(a+b)*"]


def ctx(text):
    return fa.from_pattern(P(text), AB)


def words(a, n=5):
    return set(fa.words_upto(a, n))


def concat_nodes(p):
    bn = bindable_nodes(p)
    return [n for n, q in iter_nodes(p) if n in bn and isinstance(q, Cat)]


# ----------------------------------------------------------------- values


def test_counterexample_types():
    p = P("(a+ab)*(b+_)")
    c = fa.literal("ab", AB)
    assert words(type_of(p, c, "1")) == {"ab"}
    assert words(type_of(p, c, "2")) == {""}
    assert words(type_of(p, c, "")) == {"ab"}


def test_star_under_even_context():
    got = type_of(P("a*"), ctx("(aa)*"), "")
    assert fa.equivalent(got, ctx("(aa)*"))


def test_overlapping_stars_types():
    p = P("(a+a*)a*(a+_)")
    types, _ = infer(p, SIGMA_STAR)
    # frozen from the brute-force evaluator over all words up to length 5
    assert words(types["221"]) == set()
    assert words(types["222"]) == {""}
    assert words(types["11"]) == {"a"}
    assert words(types["12"]) == {""}
    assert words(types["21"]) == {"", "a", "aa", "aaa", "aaaa", "aaaaa"}


def test_single_letter_and_break():
    assert words(type_of(P("a"), SIGMA_STAR, "")) == {"a"}
    assert words(break_of(P("ab"), SIGMA_STAR, ""), 3) == {"a" + BOX + "b"}


def test_invalid_nodes():
    with pytest.raises(InvalidAddress):
        type_of(P("a"), SIGMA_STAR, "2")
    with pytest.raises(InvalidAddress):
        type_of(P("(ab)*"), SIGMA_STAR, "11")
    with pytest.raises(InvalidAddress):
        break_of(P("a+b"), SIGMA_STAR, "")


def test_marked_context_rejected():
    with pytest.raises(ValueError):
        infer(P("a"), fa.inverse_project(SIGMA_STAR))


def test_empty_context():
    types, breaks = infer(P("(a+ab)*(b+_)"), fa.empty(AB))
    assert all(fa.is_empty(a) for a in types.values())
    assert all(fa.is_empty(a) for a in breaks.values())


@pytest.mark.parametrize(
    "p1, p2, context, cuts, star, rest",
    [
        ("a", "a+_", ["aaa"], {"aaa#"}, {"aaa"}, {""}),
        ("a", "b", ["ab"], {"a#b"}, {"a"}, {"b"}),
        ("a", "b", ["b"], {"#b"}, {""}, {"b"}),
    ],
)
def test_kleene_triple_values(p1, p2, context, cuts, star, rest):
    t = kleene_triple(P(p1), P(p2), fa.finite(context, AB))
    assert words(t.cuts, 6) == cuts
    assert words(t.star_type) == star
    assert words(t.rest_context) == rest


def test_divergence_from_first_match_types():
    p = P("(a+ab)*(b+_)")
    inferred = words(type_of(p, fa.literal("ab", AB), "1"))
    first_match = brute_force_type("1", p, ["ab"], first_match_star=True)
    assert inferred == {"ab"} and first_match == {"a"}


def test_address_translation():
    assert reassociated("") == ""
    assert reassociated("1") == "11"
    assert reassociated("12") == "112"
    assert reassociated("2") is None
    assert reassociated("21") == "12"
    assert reassociated("212") == "122"
    assert reassociated("22") == "2"
    assert reassociated("221") == "21"


@given(patterns(3), patterns(3), patterns(3))
def test_address_translation_is_a_bijection(p1, p2, p3):
    right = Cat(p1, Cat(p2, p3))
    left = Cat(Cat(p1, p2), p3)
    mapped = {reassociated(n) for n in bindable_nodes(right) if n != "2"}
    assert mapped == bindable_nodes(left) - {"1"}
    for n in bindable_nodes(right) - {"", "2"}:
        assert dict(iter_nodes(right))[n] == dict(iter_nodes(left))[reassociated(n)]


# ------------------------------------------------------------- properties


@settings(max_examples=40, deadline=None)
@given(patterns(), st.sampled_from(CONTEXTS))
def test_types_match_brute_force_on_finite_contexts(p, context_text):
    c = ctx(context_text)
    members = [w for w in WORDS if c.accepts(w)]
    types, breaks = infer(p, fa.finite(members, AB))
    for n in bindable_nodes(p):
        assert words(types[n]) == brute_force_type(n, p, members)
        if n in breaks:
            assert words(breaks[n], 6) == brute_force_break(n, p, members)


@settings(max_examples=40, deadline=None)
@given(patterns(), st.sampled_from(CONTEXTS))
def test_brute_force_types_are_included_for_infinite_contexts(p, context_text):
    c = ctx(context_text)
    members = [w for w in WORDS if c.accepts(w)]
    types, _ = infer(p, c)
    for n in bindable_nodes(p):
        assert brute_force_type(n, p, members) <= words(types[n])


@settings(max_examples=40, deadline=None)
@given(patterns(), st.sampled_from(CONTEXTS))
def test_root_law(p, context_text):
    c = ctx(context_text)
    types, _ = infer(p, c)
    assert fa.equivalent(types[""], fa.intersect(fa.thompson(p, AB), c))


@settings(max_examples=40, deadline=None)
@given(patterns(), st.sampled_from(CONTEXTS))
def test_break_laws(p, context_text):
    c = ctx(context_text)
    types, breaks = infer(p, c)
    one_box = fa.count_boxes_at_most(AB, 1, exactly=True)
    box_tail = fa.concat(fa.literal(BOX, AB), fa.universal(AB))
    box_head = fa.concat(fa.universal(AB), fa.literal(BOX, AB))
    for n in concat_nodes(p):
        b = breaks[n]
        assert fa.is_empty(fa.difference(b, one_box))
        assert fa.equivalent(fa.project(b), types[n])
        assert fa.equivalent(fa.drop_box(fa.right_quotient(b, box_tail)), types[n + "1"])
        assert fa.equivalent(fa.drop_box(fa.left_quotient(box_head, b)), types[n + "2"])


@settings(max_examples=40, deadline=None)
@given(patterns(3), patterns(4), st.sampled_from(CONTEXTS))
def test_kleene_triple_identities(body, rest, context_text):
    c = ctx(context_text)
    t = kleene_triple(body, rest, c)
    box_tail = fa.concat(fa.literal(BOX, AB), fa.universal(AB))
    box_head = fa.concat(fa.universal(AB), fa.literal(BOX, AB))
    assert fa.equivalent(fa.drop_box(fa.right_quotient(t.cuts, box_tail)), t.star_type)
    assert fa.equivalent(fa.drop_box(fa.left_quotient(box_head, t.cuts)), t.rest_context)
    # what follows the box is always left to the continuation
    for w in fa.words_upto(t.cuts, 6):
        assert fa.membership(fa.thompson(rest, AB), w.split(BOX)[1])
