import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from uniqmatch.pattern import (
    Alt,
    Cat,
    Epsilon,
    InvalidAddress,
    PatternSyntaxError,
    Star,
    Sym,
    associations_json,
    associations_tsv,
    bindable_nodes,
    domain,
    format_address,
    nullable,
    parse_address,
    parse_associations_tsv,
    parse_pattern,
    pattern_size,
    subpattern_at,
    to_text,
)

from .strategies import patterns

OVERLAPPING = "(a+a*)a*(a+_)"


def test_parse_basic_shapes():
    assert parse_pattern("_") == Epsilon()
    assert parse_pattern("a") == Sym("a")
    assert parse_pattern("a*") == Star(Sym("a"))
    assert parse_pattern("a+b") == Alt(Sym("a"), Sym("b"))
    assert parse_pattern("ab") == Cat(Sym("a"), Sym("b"))
    assert parse_pattern("a.b") == Cat(Sym("a"), Sym("b"))


def test_operators_group_to_the_right():
    assert parse_pattern("abc") == Cat(Sym("a"), Cat(Sym("b"), Sym("c")))
    assert parse_pattern("a+b+c") == Alt(Sym("a"), Alt(Sym("b"), Sym("c")))


def test_precedence():
    # star binds tighter than concatenation, which binds tighter than +
    assert parse_pattern("ab*+c") == Alt(Cat(Sym("a"), Star(Sym("b"))), Sym("c"))
    assert parse_pattern("(a+ab)*(b+_)") == Cat(
        Star(Alt(Sym("a"), Cat(Sym("a"), Sym("b")))), Alt(Sym("b"), Epsilon())
    )


def test_whitespace_is_ignored():
    assert parse_pattern(" ( a + a b ) * ") == parse_pattern("(a+ab)*")


@pytest.mark.parametrize("text", ["", "(", "a+", "(a", "a)", "*", "+a", "a#", "a<", "()"])
def test_syntax_errors(text):
    with pytest.raises(PatternSyntaxError):
        parse_pattern(text)


def test_syntax_error_position():
    with pytest.raises(PatternSyntaxError) as info:
        parse_pattern("ab)")
    assert info.value.position == 2


def test_alphabet_restriction():
    with pytest.raises(PatternSyntaxError):
        parse_pattern("ac", alphabet={"a", "b"})
    assert parse_pattern("ab", alphabet={"a", "b"}) == Cat(Sym("a"), Sym("b"))


def test_overlapping_stars_structure():
    p = parse_pattern(OVERLAPPING)
    assert pattern_size(p) == 11
    assert bindable_nodes(p) == {"", "1", "11", "12", "2", "21", "22", "221", "222"}
    assert subpattern_at(p, "22") == Alt(Sym("a"), Epsilon())


def test_bindable_nodes_stop_at_stars():
    p = parse_pattern("(ab)*c")
    assert bindable_nodes(p) == {"", "1", "2"}
    assert domain(p) == {"", "1", "11", "111", "112", "2"}


def test_subpattern_at_invalid():
    with pytest.raises(InvalidAddress):
        subpattern_at(parse_pattern("a"), "1")
    with pytest.raises(InvalidAddress):
        subpattern_at(parse_pattern("a*"), "2")


def test_nullable():
    assert nullable(parse_pattern("a*"))
    assert nullable(parse_pattern("a+_"))
    assert not nullable(parse_pattern("a*b"))


def test_addresses():
    assert format_address("") == "root"
    assert parse_address("root") == ""
    assert parse_address("12") == "12"
    with pytest.raises(InvalidAddress):
        parse_address("13")


def test_association_formats():
    v = {"": "ab", "1": "ab", "2": "", "21": None, "22": ""}
    tsv = associations_tsv(v)
    assert tsv == "root\tab\n1\tab\n2\t<eps>\n21\t<none>\n22\t<eps>\n"
    assert parse_associations_tsv(tsv) == v
    rows = json.loads(associations_json(v))
    assert rows[0] == {"node": "root", "value": "ab"}
    assert rows[3] == {"node": "21", "value": "<none>"}


@given(patterns())
def test_print_parse_roundtrip(p):
    assert parse_pattern(to_text(p)) == p


@given(patterns())
def test_bindable_is_prefix_closed(p):
    nodes = bindable_nodes(p)
    assert nodes <= domain(p)
    for n in nodes:
        assert n[:-1] in nodes or n == ""


@given(st.dictionaries(st.text("12", max_size=4),
                       st.one_of(st.none(), st.text("ab", max_size=4))))
def test_tsv_roundtrip(v):
    assert parse_associations_tsv(associations_tsv(v)) == v
