"""Which subwords can each node capture?

Type inference answers this statically for a whole context at once.  The
result is an automaton per node, so it can be enumerated, compared, or
intersected with whatever the caller expects.
"""

from uniqmatch import automata as fa
from uniqmatch import parse_pattern
from uniqmatch.infer import infer, type_of
from uniqmatch.pattern import format_address

SIGMA = frozenset("ab")


def show(pattern, context, max_len=4):
    p = parse_pattern(pattern)
    c = fa.from_pattern(parse_pattern(context), SIGMA)
    types, breaks = infer(p, c)
    print(f"{pattern} under {context}")
    for n in sorted(types):
        words = fa.words_upto(types[n], max_len) or ["(none)"]
        print(f"  {format_address(n):5} {' '.join(w or '<eps>' for w in words)}")
    for n in sorted(breaks):
        print(f"  break {format_address(n):5} {' '.join(fa.words_upto(breaks[n], max_len + 1))}")
    print()


show("(a+ab)*(b+_)", "ab")
show("(a+ab)*(b+_)", "(ab)*")
show("a*(b+_)", "a*b")

# Node 221 of (a+a*)a*(a+_) can never be used: the star before it always
# takes every remaining a.
p = parse_pattern("(a+a*)a*(a+_)")
t = type_of(p, fa.universal(SIGMA), "221")
print("node 221 of (a+a*)a*(a+_) is dead:", fa.is_empty(t))
