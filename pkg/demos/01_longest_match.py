"""Why unfolding a star into "one more iteration or stop" is not enough.

The pattern (a+ab)*(b+_) can split the word ab two ways.  Under the
longest-match policy the star should swallow the whole word.  Rewriting
P1*.P2 as ((P1.P1*)+_).P2 and resolving + by first match gives a different
answer, because the first alternative succeeds as soon as a alone fits.
"""

from uniqmatch import automata as fa
from uniqmatch import compile, match, oracle_match, oracle_match_firstmatch, parse_pattern
from uniqmatch.pattern import associations_tsv

p = parse_pattern("(a+ab)*(b+_)")
w = "ab"

print("reference evaluator")
print(associations_tsv(oracle_match(p, w)))

print("first-match unfolding")
print(associations_tsv(oracle_match_firstmatch(p, w)))

# The compiled automaton agrees with the reference evaluator.
h = compile(p, fa.universal("ab"))
print("compiled automaton")
print(associations_tsv(match(h, w)))

for w in ["aab", "abab", "abb", "b"]:
    v, u = oracle_match(p, w), oracle_match_firstmatch(p, w)
    same = "same" if v == u else "differ"
    print(f"{w:6} star={v['1']!r:8} first-match star={u['1']!r:8} {same}")
