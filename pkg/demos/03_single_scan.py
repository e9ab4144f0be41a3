"""Compile once, then match in one forward and one backward pass.

The matcher keeps a set of automaton states per position.  Because the
compiled automaton has at most one accepting run per word, the backward
pass leaves exactly the states of that run, and each node's subword can be
read off where its states first and last appear.
"""

import time

from uniqmatch import automata as fa
from uniqmatch import compile, count_accepting_runs, parse_pattern
from uniqmatch.hyper import deserialize, serialize
from uniqmatch.runtime import LookupStats, backward_pass, forward_pass, match, members

p = parse_pattern("(a+ab)*(b+_)")
h = compile(p, fa.universal("ab"))
print(f"automaton with {h.automaton.size} states, {len(h.triples)} node triples")

w = "abab"
fwd = forward_pass(h, w)
bwd = backward_pass(h, w, fwd)
for i, (s, t) in enumerate(zip(fwd, bwd)):
    print(f"  {i}: forward {sorted(members(s))}  kept {sorted(members(t))}")
print("runs:", count_accepting_runs(h, w))
print("associations:", match(h, w))

# The artifact round-trips through JSON.
h2 = deserialize(serialize(h))
assert match(h2, w) == match(h, w)

# Work grows with the length of the word, not with anything else.
for k in (1000, 2000, 4000, 8000):
    stats = LookupStats()
    start = time.perf_counter()
    match(h, "ab" * k, stats)
    print(f"k={k:5}  lookups={stats.lookups:6}  {time.perf_counter() - start:.3f}s")
