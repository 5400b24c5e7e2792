"""Command-line surface for scripted experiments.

Exit codes: 0 = accept/true/success, 1 = reject/false/diverged,
2 = usage or format error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .orbits import (
    AlphabetSpec,
    DEFAULT_ALPHABET,
    count_partial_permutations,
    enumerate_word_orbits,
    parse_word,
)
from .automaton import (
    AutomatonFormatError,
    accepts,
    anchor,
    anchor_top,
    is_universal_residual,
    parse,
    render,
)
from .learner import LearnBudget, learn
from .teacher import for_language
from . import corpus


class UsageError(Exception):
    pass


def _load_target(spec: str):
    """'builtin:NAME' -> corpus entry, anything else -> automaton file."""
    if spec.startswith("builtin:"):
        try:
            return corpus.get(spec[len("builtin:"):])
        except KeyError as e:
            raise UsageError(str(e)) from None
    try:
        with open(spec) as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {spec}: {e}") from None
    return parse(text)


def _target_automaton(spec: str):
    target = _load_target(spec)
    return target.automaton if isinstance(target, corpus.CorpusEntry) else target


def _cmd_member(args) -> int:
    aut = _target_automaton(args.target)
    word = parse_word(args.word, aut.alphabet)
    if accepts(aut, word):
        print("accept")
        return 0
    print("reject")
    return 1


def _cmd_universal(args) -> int:
    if not args.assume_residual:
        print(
            "universal requires --assume-residual: the procedure is only "
            "correct for residual automata, and residuality of a given "
            "automaton is undecidable.",
            file=sys.stderr,
        )
        return 2
    aut = _target_automaton(args.target)
    verdict = is_universal_residual(aut)
    print(verdict.describe())
    return 0 if verdict.universal else 1


def _cmd_anchor(args) -> int:
    aut = _target_automaton(args.target)
    out = anchor_top(aut) if args.top else anchor(aut)
    with open(args.output, "w") as fh:
        fh.write(render(out))
    return 0


def _cmd_orbits(args) -> int:
    if args.alphabet:
        alphabet = parse(open(args.alphabet).read()).alphabet
    else:
        alphabet = DEFAULT_ALPHABET
    n = len(enumerate_word_orbits(alphabet, args.max_len))
    print(n)
    print("k p(k)")
    for k in range(args.max_len * alphabet.dimension + 1):
        print(f"{k} {count_partial_permutations(k)}")
    return 0


def _cmd_learn(args) -> int:
    target = _load_target(args.target)
    eq_depth = args.eq_depth
    if eq_depth is None:
        # twice the known characterising length plus one, else just past
        # the row-length budget
        known = getattr(target, "char_length", None)
        eq_depth = 2 * known + 1 if known is not None else args.max_l + 1
    if isinstance(target, corpus.CorpusEntry):
        teacher = for_language(
            target.automaton.alphabet,
            predicate=target.predicate,
            eq_depth=eq_depth,
            name=target.name,
        )
    else:
        teacher = for_language(
            target.alphabet, automaton=target, eq_depth=eq_depth
        )
    budget = LearnBudget(max_equivalence=args.max_eq, max_length=args.max_l)
    if args.trace:
        with open(args.trace, "w") as fh:
            result = learn(teacher, budget, log=lambda line: print(line, file=fh))
    else:
        result = learn(teacher, budget)
    if args.stats:
        with open(args.stats, "w") as fh:
            json.dump(result.stats.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    if result.diverged:
        print("DIVERGED")
        return 1
    text = render(result.hypothesis.automaton)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_corpus(args) -> int:
    if args.action != "export":
        raise UsageError("corpus supports: export <name>")
    try:
        entry = corpus.get(args.name)
    except KeyError as e:
        raise UsageError(str(e)) from None
    text = render(entry.automaton)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="nomres",
        description="Nominal automata over equality atoms: simulate, anchor, learn.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("member", help="decide membership of a word")
    p.add_argument("target", help="automaton file or builtin:NAME")
    p.add_argument("word", help="word, e.g. 'a(1) a(2) a(1)' or 'eps'")
    p.set_defaults(fn=_cmd_member)

    p = sub.add_parser("universal", help="universality of a residual automaton")
    p.add_argument("target")
    p.add_argument("--assume-residual", action="store_true")
    p.set_defaults(fn=_cmd_universal)

    p = sub.add_parser("anchor", help="write the anchored construction")
    p.add_argument("target")
    p.add_argument("--top", action="store_true", help="the universal-on-Sigma variant")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(fn=_cmd_anchor)

    p = sub.add_parser("orbits", help="word-orbit count and p(k) table")
    p.add_argument("--alphabet", help="file whose alphabet lines to use")
    p.add_argument("--max-len", type=int, default=3)
    p.set_defaults(fn=_cmd_orbits)

    p = sub.add_parser("learn", help="learn a target language")
    p.add_argument("--target", required=True)
    p.add_argument(
        "--eq-depth", type=int,
        help="equivalence-check depth; defaults to twice the target's known "
             "characterising length plus one, else max-l + 1",
    )
    p.add_argument("--max-eq", type=int, default=50)
    p.add_argument("--max-l", type=int, default=8)
    p.add_argument("-o", "--output")
    p.add_argument("--stats")
    p.add_argument("--trace", help="write one line per learner loop event")
    p.set_defaults(fn=_cmd_learn)

    p = sub.add_parser("corpus", help="corpus export <name>")
    p.add_argument("action")
    p.add_argument("name")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_corpus)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (UsageError, AutomatonFormatError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
