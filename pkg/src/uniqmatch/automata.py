"""Finite automata over a letter alphabet, optionally extended with the box marker.

States are the integers ``0 .. size-1``.  Every construction that renames
states records, for each new state, where it came from in ``origin``:

* ``union`` / ``concat``: ``(side, q)`` with side 0 or 1;
* ``intersect``: ``(q1, q2)``;
* ``determinize``: the frozenset of source states;
* ``trim``: the old state number;
* ``project``, ``inverse_project``, quotients: identity (``origin`` is None).

The empty string labels silent transitions and ``#`` is the box marker.
No construction here introduces a cycle of silent transitions.
"""

from __future__ import annotations

import contextlib
import contextvars
import json
from collections import deque
from typing import Iterable, Iterator, Optional, Sequence

from .pattern import BOX, Alt, Cat, Epsilon, Pattern, Star, Sym, letters

EPS = ""
DEFAULT_STATE_LIMIT = 100_000

_state_limit = contextvars.ContextVar("state_limit", default=DEFAULT_STATE_LIMIT)


class StateLimitExceeded(RuntimeError):
    pass


@contextlib.contextmanager
def state_limit(n: int):
    """Temporarily cap the number of states any single construction may build."""
    if n < 1:
        raise ValueError("state limit must be at least 1")
    token = _state_limit.set(n)
    try:
        yield
    finally:
        _state_limit.reset(token)


def current_state_limit() -> int:
    return _state_limit.get()


def _guard(count: int) -> None:
    limit = _state_limit.get()
    if count > limit:
        raise StateLimitExceeded(f"automaton construction exceeded {limit} states")


class Nfa:
    """Immutable automaton.  ``delta[q]`` maps a label to a tuple of targets."""

    __slots__ = ("alphabet", "marked", "size", "initials", "finals", "delta", "origin")

    def __init__(
        self,
        alphabet: Iterable[str],
        size: int,
        initials: Iterable[int],
        finals: Iterable[int],
        delta: Sequence[dict[str, tuple[int, ...]]],
        marked: bool = False,
        origin: Optional[Sequence] = None,
    ):
        self.alphabet = frozenset(alphabet)
        if BOX in self.alphabet:
            raise ValueError("the box marker cannot be a letter")
        self.size = size
        self.initials = frozenset(initials)
        self.finals = frozenset(finals)
        self.delta = tuple(delta)
        self.marked = marked
        self.origin = tuple(origin) if origin is not None else None
        assert len(self.delta) == size

    # -- inspection

    @property
    def sigma(self) -> list[str]:
        """Letters the automaton reads, box included when marked."""
        return sorted(self.alphabet) + ([BOX] if self.marked else [])

    @property
    def states(self) -> range:
        return range(self.size)

    def transitions(self) -> Iterator[tuple[int, str, int]]:
        for p, row in enumerate(self.delta):
            for lab, targets in row.items():
                for q in targets:
                    yield p, lab, q

    def num_transitions(self) -> int:
        return sum(len(t) for row in self.delta for t in row.values())

    def closure(self, states: Iterable[int]) -> frozenset[int]:
        seen = set(states)
        stack = list(seen)
        while stack:
            p = stack.pop()
            for q in self.delta[p].get(EPS, ()):
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        return frozenset(seen)

    def step(self, states: Iterable[int], letter: str) -> frozenset[int]:
        out = set()
        for p in states:
            out.update(self.delta[p].get(letter, ()))
        return self.closure(out)

    def accepts(self, word: str) -> bool:
        current = self.closure(self.initials)
        for c in word:
            current = self.step(current, c)
            if not current:
                return False
        return not current.isdisjoint(self.finals)

    def is_deterministic(self) -> bool:
        if len(self.initials) != 1:
            return False
        for row in self.delta:
            if EPS in row:
                return False
            for c in self.sigma:
                if len(row.get(c, ())) != 1:
                    return False
        return True

    def has_eps_cycle(self) -> bool:
        color = [0] * self.size
        for start in self.states:
            if color[start]:
                continue
            stack = [(start, iter(self.delta[start].get(EPS, ())))]
            color[start] = 1
            while stack:
                p, it = stack[-1]
                q = next(it, None)
                if q is None:
                    color[p] = 2
                    stack.pop()
                elif color[q] == 1:
                    return True
                elif color[q] == 0:
                    color[q] = 1
                    stack.append((q, iter(self.delta[q].get(EPS, ()))))
        return False

    def __repr__(self):
        return (
            f"Nfa(size={self.size}, transitions={self.num_transitions()}, "
            f"alphabet={''.join(sorted(self.alphabet))!r}, marked={self.marked})"
        )


def _freeze(rows: list[dict[str, set[int]]]) -> list[dict[str, tuple[int, ...]]]:
    return [{lab: tuple(sorted(ts)) for lab, ts in row.items() if ts} for row in rows]


def _rows(n: int) -> list[dict[str, set[int]]]:
    return [dict() for _ in range(n)]


def _add(rows, p, lab, q):
    if lab == EPS and p == q:
        return
    rows[p].setdefault(lab, set()).add(q)


def relabel(a: Nfa, initials=None, finals=None, alphabet=None, marked=None) -> Nfa:
    """Same transition graph, different initial/final sets or alphabet metadata."""
    return Nfa(
        a.alphabet if alphabet is None else alphabet,
        a.size,
        a.initials if initials is None else initials,
        a.finals if finals is None else finals,
        a.delta,
        a.marked if marked is None else marked,
    )


def _widen(a: Nfa, b: Nfa) -> tuple[frozenset[str], bool]:
    return a.alphabet | b.alphabet, a.marked or b.marked


# ------------------------------------------------------------ constants


def empty(alphabet: Iterable[str], marked: bool = False) -> Nfa:
    return Nfa(alphabet, 1, [0], [], [{}], marked)


def universal(alphabet: Iterable[str], marked: bool = False) -> Nfa:
    alphabet = frozenset(alphabet)
    row = {c: (0,) for c in alphabet}
    if marked:
        row[BOX] = (0,)
    return Nfa(alphabet, 1, [0], [0], [row], marked)


def literal(word: str, alphabet: Iterable[str], marked: bool = False) -> Nfa:
    rows = [{c: (i + 1,)} for i, c in enumerate(word)] + [{}]
    return Nfa(alphabet, len(word) + 1, [0], [len(word)], rows, marked or BOX in word)


def finite(words: Iterable[str], alphabet: Iterable[str], marked: bool = False) -> Nfa:
    """Trie automaton for a finite set of words."""
    rows: list[dict[str, set[int]]] = [{}]
    finals = set()
    for w in words:
        p = 0
        for c in w:
            nxt = rows[p].get(c)
            if nxt:
                p = next(iter(nxt))
            else:
                rows.append({})
                rows[p][c] = {len(rows) - 1}
                p = len(rows) - 1
            marked = marked or c == BOX
        finals.add(p)
    return Nfa(alphabet, len(rows), [0], finals, _freeze(rows), marked)


def box_dfa(alphabet: Iterable[str]) -> Nfa:
    """Minimal complete DFA over letters plus box accepting exactly the box."""
    alphabet = frozenset(alphabet)
    rows = []
    for q in range(3):
        row = {c: (2,) for c in alphabet}
        row[BOX] = (1,) if q == 0 else (2,)
        rows.append(row)
    return Nfa(alphabet, 3, [0], [1], rows, marked=True)


def from_pattern(p: Pattern, alphabet: Optional[Iterable[str]] = None) -> Nfa:
    """Position (Glushkov) automaton of a pattern; it has no silent transitions."""
    alphabet = frozenset(letters(p) if alphabet is None else alphabet)
    positions: list[str] = []

    def walk(node):
        # returns (nullable, first, last, follow-pairs)
        if isinstance(node, Epsilon):
            return True, set(), set(), []
        if isinstance(node, Sym):
            positions.append(node.symbol)
            k = len(positions)
            return False, {k}, {k}, []
        if isinstance(node, Star):
            n, f, l, fol = walk(node.child)
            return True, f, l, fol + [(x, y) for x in l for y in f]
        n1, f1, l1, fol1 = walk(node.left)
        n2, f2, l2, fol2 = walk(node.right)
        if isinstance(node, Alt):
            return n1 or n2, f1 | f2, l1 | l2, fol1 + fol2
        first = f1 | f2 if n1 else f1
        last = l1 | l2 if n2 else l2
        return n1 and n2, first, last, fol1 + fol2 + [(x, y) for x in l1 for y in f2]

    null, first, last, follow = walk(p)
    rows = _rows(len(positions) + 1)
    for y in first:
        _add(rows, 0, positions[y - 1], y)
    for x, y in follow:
        _add(rows, x, positions[y - 1], y)
    finals = set(last) | ({0} if null else set())
    return Nfa(alphabet, len(positions) + 1, [0], finals, _freeze(rows))


# Kept under the conventional name; the construction is the position automaton.
thompson = from_pattern


# ------------------------------------------------------ regular operations


def _disjoint(a1: Nfa, a2: Nfa):
    n1 = a1.size
    rows = [dict(r) for r in a1.delta]
    for row in a2.delta:
        rows.append({lab: tuple(q + n1 for q in ts) for lab, ts in row.items()})
    origin = [(0, q) for q in a1.states] + [(1, q) for q in a2.states]
    return rows, origin


def union(a1: Nfa, a2: Nfa) -> Nfa:
    """Tuple-wise union; state ``q`` of ``a2`` becomes ``q + a1.size``."""
    alphabet, marked = _widen(a1, a2)
    rows, origin = _disjoint(a1, a2)
    _guard(len(rows))
    n1 = a1.size
    return Nfa(
        alphabet,
        len(rows),
        set(a1.initials) | {q + n1 for q in a2.initials},
        set(a1.finals) | {q + n1 for q in a2.finals},
        rows,
        marked,
        origin,
    )


def concat(a1: Nfa, a2: Nfa) -> Nfa:
    """Silent transitions from the finals of ``a1`` to the initials of ``a2``."""
    alphabet, marked = _widen(a1, a2)
    rows, origin = _disjoint(a1, a2)
    _guard(len(rows))
    n1 = a1.size
    for f in a1.finals:
        eps = set(rows[f].get(EPS, ()))
        eps.update(q + n1 for q in a2.initials)
        rows[f][EPS] = tuple(sorted(eps))
    return Nfa(
        alphabet,
        len(rows),
        a1.initials,
        {q + n1 for q in a2.finals},
        rows,
        marked,
        origin,
    )


def concat_all(*automata: Nfa) -> Nfa:
    out = automata[0]
    for a in automata[1:]:
        out = concat(out, a)
    return out


def _product(a1: Nfa, a2: Nfa, starts: Iterable[tuple[int, int]]):
    index: dict[tuple[int, int], int] = {}
    pairs: list[tuple[int, int]] = []
    rows: list[dict[str, set[int]]] = []
    queue = deque()

    def visit(pair):
        k = index.get(pair)
        if k is None:
            k = index[pair] = len(pairs)
            pairs.append(pair)
            rows.append({})
            _guard(len(pairs))
            queue.append(pair)
        return k

    for s in starts:
        visit(s)
    while queue:
        pair = queue.popleft()
        p, q = pair
        k = index[pair]
        r1, r2 = a1.delta[p], a2.delta[q]
        for lab, t1 in r1.items():
            if lab == EPS:
                for p2 in t1:
                    _add(rows, k, EPS, visit((p2, q)))
                continue
            t2 = r2.get(lab)
            if t2:
                for p2 in t1:
                    for q2 in t2:
                        _add(rows, k, lab, visit((p2, q2)))
        for q2 in r2.get(EPS, ()):
            _add(rows, k, EPS, visit((p, q2)))
    return pairs, index, rows


def intersect(a1: Nfa, a2: Nfa) -> Nfa:
    """Product automaton restricted to reachable pairs; ``origin[k]`` is the pair."""
    alphabet, marked = _widen(a1, a2)
    starts = [(p, q) for p in sorted(a1.initials) for q in sorted(a2.initials)]
    pairs, index, rows = _product(a1, a2, starts)
    finals = [k for k, (p, q) in enumerate(pairs) if p in a1.finals and q in a2.finals]
    return Nfa(alphabet, len(pairs), range(len(starts)) if pairs else [], finals,
               _freeze(rows), marked, pairs)


def determinize(a: Nfa, alphabet=None, marked=None) -> Nfa:
    """Complete DFA by the subset construction; the empty subset is the sink."""
    alphabet = a.alphabet if alphabet is None else frozenset(alphabet)
    marked = a.marked if marked is None else marked
    sigma = sorted(alphabet) + ([BOX] if marked else [])
    start = a.closure(a.initials)
    index = {start: 0}
    subsets = [start]
    rows: list[dict[str, tuple[int, ...]]] = []
    i = 0
    while i < len(subsets):
        s = subsets[i]
        row = {}
        for c in sigma:
            t = a.step(s, c) if s else s
            k = index.get(t)
            if k is None:
                k = index[t] = len(subsets)
                subsets.append(t)
                _guard(len(subsets))
            row[c] = (k,)
        rows.append(row)
        i += 1
    finals = [k for k, s in enumerate(subsets) if not s.isdisjoint(a.finals)]
    return Nfa(alphabet, len(subsets), [0], finals, rows, marked, subsets)


def complement(a: Nfa, alphabet=None, marked=None) -> Nfa:
    d = determinize(a, alphabet, marked)
    return relabel(d, finals=set(d.states) - d.finals)


def difference(a1: Nfa, a2: Nfa) -> Nfa:
    alphabet, marked = _widen(a1, a2)
    return intersect(a1, complement(a2, alphabet, marked))


def minimize(a: Nfa) -> Nfa:
    """Minimal complete DFA (Moore refinement after determinization)."""
    d = trim_reachable(determinize(a))
    sigma = d.sigma
    block = [1 if q in d.finals else 0 for q in d.states]
    nblocks = len(set(block))
    while True:
        sig = {}
        new_block = []
        for q in d.states:
            key = (block[q],) + tuple(block[d.delta[q][c][0]] for c in sigma)
            new_block.append(sig.setdefault(key, len(sig)))
        if len(sig) == nblocks:
            break
        block, nblocks = new_block, len(sig)
    block = new_block
    # renumber so the initial block is 0, in BFS order, for stable output
    start = block[next(iter(d.initials))]
    order = {start: 0}
    queue = deque([start])
    rep = {}
    for q in d.states:
        rep.setdefault(block[q], q)
    rows = {}
    while queue:
        b = queue.popleft()
        q = rep[b]
        row = {}
        for c in sigma:
            tb = block[d.delta[q][c][0]]
            if tb not in order:
                order[tb] = len(order)
                queue.append(tb)
            row[c] = (order[tb],)
        rows[order[b]] = row
    finals = {order[block[q]] for q in d.finals}
    return Nfa(d.alphabet, len(order), [0], finals, [rows[i] for i in range(len(order))], d.marked)


def signature(a: Nfa) -> tuple:
    """Hashable structural key.  Two minimal DFAs share it iff their languages agree."""
    rows = tuple(tuple(sorted(row.items())) for row in a.delta)
    return (tuple(sorted(a.alphabet)), a.marked, a.size, tuple(sorted(a.initials)),
            tuple(sorted(a.finals)), rows)


def _reachable(a: Nfa, starts: Iterable[int], reverse: bool = False) -> set[int]:
    if reverse:
        back: list[list[int]] = [[] for _ in a.states]
        for p, _, q in a.transitions():
            back[q].append(p)
        succ = lambda p: back[p]  # noqa: E731
    else:
        succ = lambda p: [q for ts in a.delta[p].values() for q in ts]  # noqa: E731
    seen = set(starts)
    stack = list(seen)
    while stack:
        p = stack.pop()
        for q in succ(p):
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return seen


def restrict(a: Nfa, keep: Iterable[int]) -> Nfa:
    """Induced sub-automaton on ``keep``, renumbered; ``origin[k]`` is the old state."""
    old = sorted(set(keep))
    new = {q: k for k, q in enumerate(old)}
    rows = []
    for q in old:
        row = {}
        for lab, ts in a.delta[q].items():
            kept = tuple(new[t] for t in ts if t in new)
            if kept:
                row[lab] = kept
        rows.append(row)
    return Nfa(
        a.alphabet,
        len(old),
        [new[q] for q in a.initials if q in new],
        [new[q] for q in a.finals if q in new],
        rows,
        a.marked,
        old,
    )


def coreachable(a: Nfa, targets: Iterable[int]) -> set[int]:
    """States from which some state of ``targets`` can be reached."""
    return _reachable(a, targets, reverse=True)


def trim_reachable(a: Nfa) -> Nfa:
    return restrict(a, _reachable(a, a.initials))


def useful_states(a: Nfa) -> set[int]:
    return _reachable(a, a.initials) & _reachable(a, a.finals, reverse=True)


def trim(a: Nfa) -> Nfa:
    """Drop states that lie on no accepting path."""
    return restrict(a, useful_states(a))


# ------------------------------------------------------------- quotients


def left_quotient(k: Nfa, l: Nfa) -> Nfa:
    """``{s | exists p in K with ps in L}``: re-seat the initials of ``l``."""
    starts = [(p, q) for p in sorted(k.initials) for q in sorted(l.initials)]
    pairs, _, _ = _product(k, l, starts)
    seats = {q for p, q in pairs if p in k.finals}
    alphabet, marked = _widen(k, l)
    return relabel(l, initials=seats, alphabet=alphabet, marked=marked)


def right_quotient(l: Nfa, k: Nfa) -> Nfa:
    """``{p | exists s in K with ps in L}``: re-mark the finals of ``l``."""
    starts = [(p, q) for p in l.states for q in sorted(k.initials)]
    pairs, index, rows = _product(l, k, starts)
    back: list[list[int]] = [[] for _ in pairs]
    for src, row in enumerate(rows):
        for ts in row.values():
            for t in ts:
                back[t].append(src)
    live = {i for i, (p, q) in enumerate(pairs) if p in l.finals and q in k.finals}
    stack = list(live)
    while stack:
        t = stack.pop()
        for s in back[t]:
            if s not in live:
                live.add(s)
                stack.append(s)
    finals = {p for i, (p, q) in enumerate(pairs) if i in live and q in k.initials}
    alphabet, marked = _widen(k, l)
    return relabel(l, finals=finals, alphabet=alphabet, marked=marked)


# --------------------------------------------------------- box handling


def remove_epsilons(a: Nfa) -> Nfa:
    """Same states, no silent transitions, same language."""
    rows = _rows(a.size)
    finals = set()
    for q in a.states:
        cl = a.closure([q])
        if not cl.isdisjoint(a.finals):
            finals.add(q)
        for p in cl:
            for lab, ts in a.delta[p].items():
                if lab != EPS:
                    for t in ts:
                        _add(rows, q, lab, t)
    return Nfa(a.alphabet, a.size, a.initials, finals, _freeze(rows), a.marked)


def project(a: Nfa) -> Nfa:
    """Erase the box: box transitions become silent ones, states kept as they are."""
    rows = _rows(a.size)
    for p, lab, q in a.transitions():
        _add(rows, p, EPS if lab == BOX else lab, q)
    out = Nfa(a.alphabet, a.size, a.initials, a.finals, _freeze(rows), False)
    if out.has_eps_cycle():
        out = remove_epsilons(out)
    return out


def inverse_project(a: Nfa) -> Nfa:
    """All ways of inserting boxes into accepted words: a box loop on every state."""
    if a.marked:
        raise ValueError("inverse projection expects an automaton over plain letters")
    rows = [dict(r) for r in a.delta]
    for q, row in enumerate(rows):
        row[BOX] = (q,)
    return Nfa(a.alphabet, a.size, a.initials, a.finals, rows, True)


def drop_box(a: Nfa) -> Nfa:
    """Forget box transitions; used on quotient results whose words carry no box."""
    rows = [{lab: ts for lab, ts in row.items() if lab != BOX} for row in a.delta]
    return Nfa(a.alphabet, a.size, a.initials, a.finals, rows, False)


def erase_first_box(a: Nfa) -> Nfa:
    """Map every accepted word to the same word without its first box.

    Built on two layers (before / after the first box); the first box
    transition becomes silent and crosses from layer 0 to layer 1.
    """
    n = a.size
    rows = _rows(2 * n)
    for p, lab, q in a.transitions():
        if lab == BOX:
            _add(rows, p, EPS, q + n)
            _add(rows, p + n, BOX, q + n)
        else:
            _add(rows, p, lab, q)
            _add(rows, p + n, lab, q + n)
    finals = set(a.finals) | {f + n for f in a.finals}
    origin = [(0, q) for q in a.states] + [(1, q) for q in a.states]
    return Nfa(a.alphabet, 2 * n, a.initials, finals, _freeze(rows), a.marked, origin)


def count_boxes_at_most(alphabet: Iterable[str], k: int, exactly: bool = False) -> Nfa:
    """Words over letters and box with at most (or exactly) ``k`` boxes."""
    alphabet = frozenset(alphabet)
    rows = []
    for i in range(k + 1):
        row = {c: (i,) for c in alphabet}
        if i < k:
            row[BOX] = (i + 1,)
        rows.append(row)
    finals = [k] if exactly else range(k + 1)
    return Nfa(alphabet, k + 1, [0], finals, rows, True)


class NotSingleBox(ValueError):
    pass


def j_construct(abreak: Nfa, a2break: Nfa) -> Nfa:
    """Parallel run recognizing ``{u#v#x | u#vx in L(abreak), v#x in L(a2break)}``.

    ``abreak`` runs alone up to its box; from there ``a2break`` starts and
    both advance in lockstep.  The second box is read by ``a2break`` only.
    """
    alphabet, _ = _widen(abreak, a2break)
    one_box = count_boxes_at_most(alphabet, 1, exactly=True)
    for a in (abreak, a2break):
        if not is_empty(difference(a, one_box)):
            raise NotSingleBox("break automata must accept words with exactly one box")

    # state kinds: ("pre", p) | ("mid", p, q) | ("post", p, q)
    index: dict[tuple, int] = {}
    keys: list[tuple] = []
    rows: list[dict[str, set[int]]] = []
    queue = deque()

    def visit(key):
        k = index.get(key)
        if k is None:
            k = index[key] = len(keys)
            keys.append(key)
            rows.append({})
            _guard(len(keys))
            queue.append(key)
        return k

    for p in sorted(abreak.initials):
        visit(("pre", p))
    while queue:
        key = queue.popleft()
        k = index[key]
        if key[0] == "pre":
            p = key[1]
            for lab, ts in abreak.delta[p].items():
                for t in ts:
                    if lab == BOX:
                        for q in sorted(a2break.initials):
                            _add(rows, k, BOX, visit(("mid", t, q)))
                    else:
                        _add(rows, k, lab, visit(("pre", t)))
            continue
        phase, p, q = key
        r1, r2 = abreak.delta[p], a2break.delta[q]
        for t in r1.get(EPS, ()):
            _add(rows, k, EPS, visit((phase, t, q)))
        for t in r2.get(EPS, ()):
            _add(rows, k, EPS, visit((phase, p, t)))
        for lab, t1 in r1.items():
            if lab in (EPS, BOX):
                continue
            for t in t1:
                for u in r2.get(lab, ()):
                    _add(rows, k, lab, visit((phase, t, u)))
        if phase == "mid":
            for u in r2.get(BOX, ()):
                _add(rows, k, BOX, visit(("post", p, u)))
    finals = [
        k for k, key in enumerate(keys)
        if key[0] == "post" and key[1] in abreak.finals and key[2] in a2break.finals
    ]
    return Nfa(alphabet, len(keys), range(len(abreak.initials)) if keys else [],
               finals, _freeze(rows), True, keys)


# ------------------------------------------------------- decision procedures


def membership(a: Nfa, word: str) -> bool:
    return a.accepts(word)


def is_empty(a: Nfa) -> bool:
    return _reachable(a, a.initials).isdisjoint(a.finals)


def shortest_word(a: Nfa) -> Optional[str]:
    """A shortest accepted word, or None when the language is empty."""
    start = a.closure(a.initials)
    seen = {start}
    queue = deque([(start, "")])
    while queue:
        s, w = queue.popleft()
        if not s.isdisjoint(a.finals):
            return w
        for c in a.sigma:
            t = a.step(s, c)
            if t and t not in seen:
                seen.add(t)
                queue.append((t, w + c))
    return None


def counterexample(a1: Nfa, a2: Nfa) -> Optional[str]:
    """A word in exactly one of the two languages, or None if they are equal."""
    for x, y in ((a1, a2), (a2, a1)):
        w = shortest_word(difference(x, y))
        if w is not None:
            return w
    return None


def equivalent(a1: Nfa, a2: Nfa) -> bool:
    return counterexample(a1, a2) is None


def words_upto(a: Nfa, max_len: int) -> list[str]:
    """All accepted words of length at most ``max_len`` in shortlex order."""
    live = coreachable(a, a.finals)
    out = []
    level = [("", a.closure(a.initials) & live)]
    for length in range(max_len + 1):
        nxt = []
        for w, s in level:
            if not s:
                continue
            if not s.isdisjoint(a.finals):
                out.append(w)
            if length < max_len:
                for c in a.sigma:
                    t = a.step(s, c) & live
                    if t:
                        nxt.append((w + c, t))
        level = nxt
    return out


# --------------------------------------------------------- serialization


def _label_out(lab: str) -> str:
    return "<eps>" if lab == EPS else lab


def to_dict(a: Nfa) -> dict:
    return {
        "alphabet": sorted(a.alphabet),
        "marked": a.marked,
        "states": list(a.states),
        "initials": sorted(a.initials),
        "finals": sorted(a.finals),
        "transitions": [
            {"from": p, "label": _label_out(lab), "to": q}
            for p, lab, q in sorted(a.transitions())
        ],
    }


def from_dict(d: dict) -> Nfa:
    try:
        states = list(d["states"])
        if states != list(range(len(states))):
            raise ValueError("states must be numbered 0..n-1")
        rows = _rows(len(states))
        for t in d["transitions"]:
            lab = EPS if t["label"] == "<eps>" else t["label"]
            _add(rows, int(t["from"]), lab, int(t["to"]))
        return Nfa(d["alphabet"], len(states), d["initials"], d["finals"],
                   _freeze(rows), bool(d.get("marked", False)))
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed automaton: {exc}") from exc


def to_json(a: Nfa) -> str:
    return json.dumps(to_dict(a), sort_keys=True)


def from_json(text: str) -> Nfa:
    return from_dict(json.loads(text))


def to_dot(a: Nfa, name: str = "A", annotations: Optional[dict[int, str]] = None) -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for q in a.states:
        shape = "doublecircle" if q in a.finals else "circle"
        lab = str(q)
        if annotations and annotations.get(q):
            lab += "\\n" + annotations[q]
        lines.append(f'  {q} [shape={shape}, label="{lab}"];')
    for q in sorted(a.initials):
        lines.append(f"  __start -> {q};")
    for p, lab, q in sorted(a.transitions()):
        text = "&lambda;" if lab == EPS else lab
        lines.append(f'  {p} -> {q} [label="{text}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
