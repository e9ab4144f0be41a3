"""Command-line interface: ``match``, ``infer``, ``compile`` and ``difftest``.

Exit codes: 0 match (or success), 1 no match (or failed difftest),
2 usage or parse error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import automata as fa
from . import hyper, infer, oracle, runtime
from .difftest import STANDARD_CONTEXTS, UNIVERSAL, context_automaton, run_difftest
from .pattern import (
    EPS_TOKEN,
    InvalidAddress,
    PatternSyntaxError,
    associations_json,
    associations_tsv,
    bindable_nodes,
    format_address,
    format_value,
    letters,
    parse_address,
    parse_pattern,
)

EXIT_OK, EXIT_NO_MATCH, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3
ENGINES = ("automaton", "oracle", "ckleene-prime")


class UsageError(Exception):
    pass


def _alphabet(args, *texts: str) -> frozenset[str]:
    if args.alphabet:
        return frozenset(args.alphabet)
    out = set()
    for t in texts:
        if t and t != UNIVERSAL:
            out |= letters(parse_pattern(t))
    if not out:
        raise UsageError("cannot infer a nonempty alphabet; pass --alphabet")
    return frozenset(out)


def _setup(args):
    context_text = args.context or UNIVERSAL
    sigma = _alphabet(args, args.pattern, context_text)
    pattern = parse_pattern(args.pattern, set(sigma))
    return pattern, context_text, context_automaton(context_text, sigma)


def _read_words(args) -> list[str]:
    if args.word is not None:
        return [args.word]
    if args.positional is not None:
        return [args.positional]
    words = [line.strip() for line in sys.stdin]
    return ["" if w == EPS_TOKEN else w for w in words if w]


# ---------------------------------------------------------------- match


def cmd_match(args) -> int:
    if args.hyper:
        with open(args.hyper, "rb") as fh:
            h = hyper.deserialize(fh.read())
        pattern, context = h.pattern, h.context
        if args.engine != "automaton":
            raise UsageError("a compiled artifact can only be run by the automaton engine")
    else:
        if not args.pattern:
            raise UsageError("match needs -p/--pattern or --hyper")
        pattern, _, context = _setup(args)
        h = hyper.compile(pattern, context) if args.engine == "automaton" else None
    if args.engine == "ckleene-prime":
        oracle.check_first_match_precondition(pattern)
    evaluator = oracle.Evaluator(first_match_star=args.engine == "ckleene-prime")

    def run(w: str):
        if h is not None:
            return runtime.match(h, w)
        if not set(w) <= context.alphabet or not context.accepts(w):
            return None
        return oracle.oracle_match(pattern, w, evaluator)

    words = _read_words(args)
    results = [(w, run(w)) for w in words]
    batch = args.word is None and args.positional is None
    out = sys.stdout
    if args.format == "json":
        if batch:
            rows = [{"word": w, "match": v is not None,
                     "associations": json.loads(associations_json(v)) if v is not None else None}
                    for w, v in results]
            out.write(json.dumps(rows) + "\n")
        elif results[0][1] is not None:
            out.write(associations_json(results[0][1]) + "\n")
    else:
        for w, v in results:
            if batch:
                if v is None:
                    out.write(f"{format_value(w)}\t<nomatch>\n")
                else:
                    for line in associations_tsv(v).splitlines():
                        out.write(f"{format_value(w)}\t{line}\n")
            elif v is not None:
                out.write(associations_tsv(v))
    return EXIT_OK if results and all(v is not None for _, v in results) else EXIT_NO_MATCH


# ---------------------------------------------------------------- infer


def cmd_infer(args) -> int:
    pattern, _, context = _setup(args)
    if args.node is not None:
        nodes = [parse_address(args.node)]
        bindable = bindable_nodes(pattern)
        for n in nodes:
            if n not in bindable:
                raise InvalidAddress(f"node {format_address(n)} is not a bindable node of the pattern")
    else:
        nodes = sorted(bindable_nodes(pattern))
    types, breaks = infer.infer(pattern, context)
    table = breaks if args.breaks else types
    if args.breaks:
        missing = [n for n in nodes if n not in breaks]
        if missing:
            raise InvalidAddress(f"node {format_address(missing[0])} is not a concatenation")
    out = sys.stdout
    if args.enumerate is not None:
        lists = {n: fa.words_upto(table[n], args.enumerate) for n in nodes}
        if args.format == "json":
            out.write(json.dumps({format_address(n): [format_value(w) for w in ws]
                                  for n, ws in lists.items()}) + "\n")
        else:
            for n, ws in lists.items():
                for w in ws:
                    prefix = "" if args.node is not None else f"{format_address(n)}\t"
                    out.write(f"{prefix}{format_value(w)}\n")
        return EXIT_OK
    if args.node is not None:
        out.write(fa.to_json(table[nodes[0]]) + "\n")
    else:
        out.write(json.dumps({format_address(n): fa.to_dict(table[n]) for n in nodes},
                             sort_keys=True) + "\n")
    return EXIT_OK


# -------------------------------------------------------------- compile


def cmd_compile(args) -> int:
    pattern, _, context = _setup(args)
    h = hyper.compile(pattern, context)
    data = hyper.serialize(h)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data.decode("utf-8") + "\n")
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(hyper.to_dot(h))
    return EXIT_OK


# ------------------------------------------------------------- difftest


def cmd_difftest(args) -> int:
    sigma = tuple(sorted(args.alphabet or "ab"))
    contexts = args.contexts.split(",") if args.contexts else STANDARD_CONTEXTS
    report = run_difftest(args.max_pattern_size, args.max_word_len, args.seed, sigma,
                          contexts, check_types=not args.no_types)
    out = sys.stdout
    if args.format == "json":
        out.write(json.dumps({
            "cases_run": report.cases_run,
            "words_run": report.words_run,
            "mismatches": [_mismatch_row(m) for m in report.mismatches],
            "divergences": [_mismatch_row(m) for m in report.divergences],
            "type_failures": [vars(t) for t in report.type_failures],
            "ambiguous": report.ambiguous,
            "adjacency_failures": report.adjacency_failures,
        }) + "\n")
    else:
        out.write(report.summary())
        for title, rows in (("mismatch", report.mismatches), ("divergence", report.divergences)):
            for m in rows:
                out.write(f"{title}\t{m.pattern}\t{m.context}\t{format_value(m.word)}\t"
                          f"{_compact(m.first)}\t{_compact(m.second)}\n")
    return EXIT_OK if report.ok else EXIT_NO_MATCH


def _compact(v) -> str:
    if v is None:
        return "<nomatch>"
    return " ".join(f"{format_address(n)}={format_value(v[n])}" for n in sorted(v))


def _mismatch_row(m) -> dict:
    return {"pattern": m.pattern, "context": m.context, "word": m.word,
            "first": _compact(m.first), "second": _compact(m.second)}


# --------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uniqmatch",
                                     description="Unique regular expression pattern matching.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alphabet", help="letters of the input alphabet, e.g. ab")
    common.add_argument("--state-limit", type=int, default=fa.DEFAULT_STATE_LIMIT,
                        help="cap on the states of any single automaton construction")
    common.add_argument("--format", choices=("tsv", "json"), default="tsv")

    pat = argparse.ArgumentParser(add_help=False)
    pat.add_argument("-p", "--pattern")
    pat.add_argument("-c", "--context", help="context pattern (default: all words)")

    m = sub.add_parser("match", parents=[common, pat], help="match words against a pattern")
    m.add_argument("positional", nargs="?", metavar="WORD")
    m.add_argument("-w", "--word")
    m.add_argument("--engine", choices=ENGINES, default="automaton")
    m.add_argument("--hyper", metavar="FILE", help="run a compiled artifact instead of -p")
    m.set_defaults(func=cmd_match)

    i = sub.add_parser("infer", parents=[common, pat], help="infer node types")
    i.add_argument("-n", "--node", help="node address (default: all bindable nodes)")
    i.add_argument("--enumerate", type=int, metavar="K", help="list accepted words up to length K")
    i.add_argument("--breaks", action="store_true", help="report break sets instead of types")
    i.set_defaults(func=cmd_infer)

    c = sub.add_parser("compile", parents=[common, pat], help="compile to a hyperautomaton")
    c.add_argument("--out", metavar="FILE")
    c.add_argument("--dot", metavar="FILE", help="also write a DOT rendering")
    c.set_defaults(func=cmd_compile)

    d = sub.add_parser("difftest", parents=[common], help="differential test of the engines")
    d.add_argument("--max-pattern-size", type=int, default=5)
    d.add_argument("--max-word-len", type=int, default=4)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--contexts", help="comma-separated context patterns")
    d.add_argument("--no-types", action="store_true", help="skip the type inference checks")
    d.set_defaults(func=cmd_difftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    needs_pattern = args.command in ("infer", "compile")
    if needs_pattern and not args.pattern:
        parser.error(f"{args.command} needs -p/--pattern")
    if args.state_limit < 1:
        parser.error("--state-limit must be at least 1")
    try:
        with fa.state_limit(args.state_limit):
            return args.func(args)
    except fa.StateLimitExceeded as exc:
        print(f"uniqmatch: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (PatternSyntaxError, InvalidAddress, UsageError, oracle.UnsupportedPattern,
            ValueError, OSError) as exc:
        print(f"uniqmatch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
