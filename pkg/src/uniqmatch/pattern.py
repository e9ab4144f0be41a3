"""Pattern syntax trees, node addresses and association maps.

A node address is a string over ``"12"``; the root is the empty string.
Addresses are printed as ``root`` when serialized.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Union

EPSILON_TOKEN = "_"
BOX = "#"
NONE_TOKEN = "<none>"
EPS_TOKEN = "<eps>"
ROOT = ""
ROOT_NAME = "root"

_RESERVED = set("+.*()_#<> \t\r\n")


class PatternSyntaxError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class InvalidAddress(KeyError):
    pass


class _Node:
    __slots__ = ()

    def __hash__(self):
        return self._hash  # type: ignore[attr-defined]


@dataclass(frozen=True, eq=True)
class Epsilon(_Node):
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("eps",)))

    __hash__ = _Node.__hash__

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, eq=True)
class Sym(_Node):
    symbol: str
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("sym", self.symbol)))

    __hash__ = _Node.__hash__

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, eq=True)
class Alt(_Node):
    left: "Pattern"
    right: "Pattern"
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("alt", self.left._hash, self.right._hash)))

    __hash__ = _Node.__hash__

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, eq=True)
class Cat(_Node):
    left: "Pattern"
    right: "Pattern"
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("cat", self.left._hash, self.right._hash)))

    __hash__ = _Node.__hash__

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, eq=True)
class Star(_Node):
    child: "Pattern"
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("star", self.child._hash)))

    __hash__ = _Node.__hash__

    def __str__(self):
        return to_text(self)


Pattern = Union[Epsilon, Sym, Alt, Cat, Star]

# Association maps: address -> matched subword, or None for the unassigned marker.
Associations = dict[str, Optional[str]]


# ---------------------------------------------------------------- parsing


def parse_pattern(text: str, alphabet: Optional[set[str]] = None) -> Pattern:
    """Parse the ASCII concrete syntax into a pattern tree.

    ``_`` is the empty-word pattern, ``+`` alternation, juxtaposition or ``.``
    concatenation and postfix ``*`` the star; ``+`` and concatenation chains
    group to the right.  Whitespace is ignored.
    """
    toks = [(i, c) for i, c in enumerate(text) if not c.isspace()]
    pos = 0

    def peek():
        return toks[pos][1] if pos < len(toks) else None

    def where():
        return toks[pos][0] if pos < len(toks) else len(text)

    def expr():
        nonlocal pos
        left = term()
        if peek() == "+":
            pos += 1
            return Alt(left, expr())
        return left

    def term():
        nonlocal pos
        left = factor()
        if peek() == ".":
            pos += 1
            return Cat(left, term())
        if peek() is not None and peek() not in "+)":
            return Cat(left, term())
        return left

    def factor():
        nonlocal pos
        node = base()
        while peek() == "*":
            pos += 1
            node = Star(node)
        return node

    def base():
        nonlocal pos
        c = peek()
        if c is None:
            raise PatternSyntaxError("unexpected end of pattern", text, where())
        if c == "(":
            pos += 1
            node = expr()
            if peek() != ")":
                raise PatternSyntaxError("expected ')'", text, where())
            pos += 1
            return node
        if c == EPSILON_TOKEN:
            pos += 1
            return Epsilon()
        if c in _RESERVED:
            raise PatternSyntaxError(f"unexpected {c!r}", text, where())
        if alphabet is not None and c not in alphabet:
            raise PatternSyntaxError(f"letter {c!r} outside the alphabet", text, where())
        pos += 1
        return Sym(c)

    node = expr()
    if pos != len(toks):
        raise PatternSyntaxError(f"unexpected {peek()!r}", text, where())
    return node


def to_text(p: Pattern) -> str:
    """Print with the fewest parentheses that parse back to the same tree."""
    if isinstance(p, Epsilon):
        return EPSILON_TOKEN
    if isinstance(p, Sym):
        return p.symbol
    if isinstance(p, Star):
        inner = to_text(p.child)
        if isinstance(p.child, (Alt, Cat)):
            inner = f"({inner})"
        return inner + "*"
    if isinstance(p, Cat):
        left, right = to_text(p.left), to_text(p.right)
        if isinstance(p.left, (Alt, Cat)):
            left = f"({left})"
        if isinstance(p.right, Alt):
            right = f"({right})"
        return left + right
    left, right = to_text(p.left), to_text(p.right)
    if isinstance(p.left, Alt):
        left = f"({left})"
    return f"{left}+{right}"


# ---------------------------------------------------------- structure


def children(p: Pattern) -> tuple[Pattern, ...]:
    if isinstance(p, (Alt, Cat)):
        return (p.left, p.right)
    if isinstance(p, Star):
        return (p.child,)
    return ()


def label(p: Pattern) -> str:
    if isinstance(p, Epsilon):
        return "eps"
    if isinstance(p, Sym):
        return p.symbol
    return {Alt: "+", Cat: ".", Star: "*"}[type(p)]


def iter_nodes(p: Pattern, prefix: str = "") -> Iterator[tuple[str, Pattern]]:
    yield prefix, p
    for digit, child in zip("12", children(p)):
        yield from iter_nodes(child, prefix + digit)


def domain(p: Pattern) -> set[str]:
    return {addr for addr, _ in iter_nodes(p)}


def pattern_size(p: Pattern) -> int:
    return sum(1 for _ in iter_nodes(p))


def bindable_nodes(p: Pattern) -> set[str]:
    """Addresses with no proper ancestor labelled by a star."""
    out = {ROOT}
    if isinstance(p, (Alt, Cat)):
        out |= {"1" + n for n in bindable_nodes(p.left)}
        out |= {"2" + n for n in bindable_nodes(p.right)}
    return out


def subpattern_at(p: Pattern, address: str) -> Pattern:
    node = p
    for i, digit in enumerate(address):
        kids = children(node)
        k = "12".find(digit)
        if k < 0 or k >= len(kids):
            raise InvalidAddress(f"{format_address(address)} is not a node of {to_text(p)}")
        node = kids[k]
    return node


def letters(p: Pattern) -> set[str]:
    return {q.symbol for _, q in iter_nodes(p) if isinstance(q, Sym)}


def nullable(p: Pattern) -> bool:
    if isinstance(p, (Epsilon, Star)):
        return True
    if isinstance(p, Sym):
        return False
    if isinstance(p, Alt):
        return nullable(p.left) or nullable(p.right)
    return nullable(p.left) and nullable(p.right)


# ---------------------------------------------------------- addresses


def format_address(address: str) -> str:
    return ROOT_NAME if address == ROOT else address


def parse_address(text: str) -> str:
    if text in (ROOT_NAME, ""):
        return ROOT
    if set(text) - set("12"):
        raise InvalidAddress(f"malformed node address {text!r}")
    return text


def reassociated(address: str) -> Optional[str]:
    """Address in ``(P1.P2).P3`` of a node of ``P1.(P2.P3)``.

    ``1n -> 11n``, ``21n -> 12n``, ``22n -> 2n`` and the root maps to the
    root; node ``2`` of the right-nested form has no counterpart.
    """
    if address == ROOT:
        return ROOT
    if address[0] == "1":
        return "11" + address[1:]
    if address == "2":
        return None
    if address[1] == "1":
        return "12" + address[2:]
    return "2" + address[2:]


def sorted_addresses(addresses) -> list[str]:
    return sorted(addresses)


# ------------------------------------------------------- associations


def format_value(value: Optional[str]) -> str:
    if value is None:
        return NONE_TOKEN
    return value if value else EPS_TOKEN


def associations_tsv(v: Mapping[str, Optional[str]]) -> str:
    lines = [f"{format_address(n)}\t{format_value(v[n])}" for n in sorted_addresses(v)]
    return "\n".join(lines) + "\n"


def associations_json(v: Mapping[str, Optional[str]]) -> str:
    rows = [{"node": format_address(n), "value": format_value(v[n])} for n in sorted_addresses(v)]
    return json.dumps(rows)


def parse_associations_tsv(text: str) -> Associations:
    out: Associations = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        node, value = line.split("\t")
        out[parse_address(node)] = (
            None if value == NONE_TOKEN else "" if value == EPS_TOKEN else value
        )
    return out
