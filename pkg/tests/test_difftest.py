import itertools

from uniqmatch import automata as fa
from uniqmatch import difftest
from uniqmatch.difftest import (
    REGRESSION_PATTERNS,
    check_case,
    check_types_case,
    context_automaton,
    count_patterns,
    enumerate_patterns,
    kleene_triple_ok,
    patterns_upto,
    run_difftest,
    select_patterns,
    truncate,
)
from uniqmatch.infer import kleene_triple
from uniqmatch.pattern import Epsilon, Sym, parse_pattern, pattern_size, to_text

AB = ("a", "b")


def test_counts_match_enumeration():
    for n in range(1, 6):
        assert sum(1 for _ in enumerate_patterns(n, AB)) == count_patterns(n)
    assert [count_patterns(n) for n in range(1, 8)] == [3, 3, 21, 57, 327, 1263, 6753]


def test_enumeration_order():
    assert list(enumerate_patterns(1, AB)) == [Epsilon(), Sym("a"), Sym("b")]
    assert [to_text(p) for p in itertools.islice(enumerate_patterns(3, AB), 4)] == [
        "_+_", "_+a", "_+b", "a+_"
    ]
    assert all(pattern_size(p) == 4 for p in enumerate_patterns(4, AB))


def test_corpus_is_exhaustive_up_to_seven():
    assert len(select_patterns(7)) == 8427


def test_sampling_is_seeded():
    a = select_patterns(5, seed=3, exhaustive_limit=100, sample_size=50)
    b = select_patterns(5, seed=3, exhaustive_limit=100, sample_size=50)
    assert a == b and len(a) == 50
    assert set(a) <= set(patterns_upto(5, AB))


def test_single_nodes_only():
    report = run_difftest(1, 3, extra_patterns=())
    assert report.ok
    assert report.cases_run == 3 * 4
    assert not report.divergences


def test_counterexample_divergence_is_reported():
    report = run_difftest(1, 3)
    hits = {(m.pattern, m.context, m.word) for m in report.divergences}
    assert ("(a+ab)*(b+_)", "ab", "ab") in hits
    assert report.ok


def test_regression_patterns_are_clean():
    words = [w for w in ("".join(t) for n in range(6) for t in itertools.product("ab", repeat=n))]
    for text in REGRESSION_PATTERNS:
        p = parse_pattern(text)
        for ctext in (".*", "a*b*"):
            report = check_case(p, ctext, context_automaton(ctext, AB), words)
            assert report.ok, report.summary()


def test_type_check_reports_failures(monkeypatch):
    p = parse_pattern("a*")
    c = context_automaton("a*", AB)
    words = ["", "a", "aa"]
    assert check_types_case(p, "a*", c, words) == []
    monkeypatch.setattr(difftest, "infer", lambda p, c: ({"": fa.literal("a", c.alphabet)}, {}))
    kinds = {f.kind for f in check_types_case(p, "a*", c, words)}
    assert kinds == {"type", "root", "inclusion"}


def test_truncate():
    c = truncate(context_automaton("a*", AB), ["", "a", "b", "aa"])
    assert fa.words_upto(c, 5) == ["", "a", "aa"]


def test_collected_kleene_triples_obey_the_identities():
    kleene_triple(parse_pattern("a+ab"), parse_pattern("b+_"), context_automaton(".*", AB))
    assert all(kleene_triple_ok(t) for t in kleene_triple.cache_values())
