"""Command-line front end.

    genme query <theory> <atom>
    genme explain <theory> <atom> [--templates F] [--index K]
    genme nearmiss <theory> <config> [--format text|json] [--max-degree D] [--templates F]

Exit status: 0 success / positive, 1 negative example, 2 usage, parse or IO error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time

from .engine import TheoryError
from .explanation import NotPositiveError, load_templates, local_explanations, render_explanation
from .parser import load_config, load_theory, parse_ground_atom
from .report import build_report, to_json, to_text
from .search import genme
from .terms import GenmeError

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _fail(message: str) -> int:
    print(f"genme: error: {message}", file=sys.stderr)
    return EXIT_ERROR


def cmd_query(args) -> int:
    theory = load_theory(args.theory)
    lit = parse_ground_atom(args.atom)
    positive = theory.models_literal(lit)
    print("positive" if positive else "negative")
    return EXIT_OK if positive else EXIT_NEGATIVE


def cmd_explain(args) -> int:
    theory = load_theory(args.theory)
    lit = parse_ground_atom(args.atom)
    templates = load_templates(args.templates) if args.templates else None
    try:
        found = local_explanations(theory, lit)
    except NotPositiveError as exc:
        print(f"genme: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    if args.index is not None:
        if not 0 <= args.index < len(found):
            return _fail(f"--index {args.index} out of range (0..{len(found) - 1})")
        found = [found[args.index]]
    for le in found:
        print(le.ground_clause)
        if templates:
            print("  " + render_explanation(le, templates))
    return EXIT_OK


def cmd_nearmiss(args) -> int:
    started = time.perf_counter()
    theory = load_theory(args.theory)
    config = load_config(args.config, theory)
    if args.max_degree is not None:
        if args.max_degree < 1:
            return _fail("--max-degree must be a positive integer")
        config = dataclasses.replace(config, max_degree=args.max_degree)
    templates = load_templates(args.templates) if args.templates else None
    loaded = time.perf_counter()
    try:
        family = genme(theory, config)
    except NotPositiveError as exc:
        print(f"genme: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    done = time.perf_counter()
    timing = {"load": loaded - started, "search": done - loaded} if args.timing else None
    report = build_report(family, config, timing)
    if args.format == "json":
        sys.stdout.write(to_json(report))
    else:
        sys.stdout.write(to_text(report, family, templates))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="genme", description="Near-miss explanations for clausal theories.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    q = sub.add_parser("query", help="classify a ground atom")
    q.add_argument("theory")
    q.add_argument("atom")
    q.set_defaults(func=cmd_query)

    e = sub.add_parser("explain", help="print local explanations of a positive example")
    e.add_argument("theory")
    e.add_argument("atom")
    e.add_argument("--templates", help="JSON template table for sentence rendering")
    e.add_argument("--index", type=int, help="print only the K-th local explanation (0-based)")
    e.set_defaults(func=cmd_explain)

    n = sub.add_parser("nearmiss", help="generate near-miss explanations")
    n.add_argument("theory")
    n.add_argument("config")
    n.add_argument("--format", choices=("text", "json"), default="text")
    n.add_argument("--max-degree", type=int)
    n.add_argument("--templates", help="JSON template table for sentence rendering (text format)")
    n.add_argument("--timing", action="store_true", help="include wall-clock timings in the report")
    n.add_argument("--seedless-deterministic", action="store_true",
                   help="no-op; runs use no randomness and are always deterministic")
    n.set_defaults(func=cmd_nearmiss)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GenmeError, TheoryError) as exc:
        return _fail(str(exc))
    except OSError as exc:
        return _fail(f"{exc.filename or ''}: {exc.strerror or exc}")
    except UnicodeDecodeError as exc:
        return _fail(f"input is not valid UTF-8: {exc}")


if __name__ == "__main__":
    sys.exit(main())
