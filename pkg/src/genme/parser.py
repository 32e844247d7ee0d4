"""Text formats: theory files, ground atoms and JSON run configurations.

Theory syntax::

    % comment
    parent(tom, kate).
    grandfather(A,B) :- male(A), parent(A,C), parent(C,B).
    supported_by(X,Y,A) :- supports(Y,X,A), not touches(X,Y).
    file_name('1fTmw4WN.PNG', file10).

Variables start with an upper-case letter; constants are lower-case
identifiers, quoted atoms or integers. ``not`` marks negation as failure.
"""

from __future__ import annotations

import json
import re
from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import NamedTuple

from .engine import BUILTINS, Theory, TheoryError
from .rewrite import MODES, RewritingFilter
from .terms import Clause, Constant, GenmeError, GroundnessError, Literal, Term, Variable


class ParseError(TheoryError):
    """Syntax error with a 1-based line and column."""


class ConfigError(GenmeError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<neck>:-)
  | (?P<punct>[(),.])
  | (?P<quoted>'(?:[^'\\\n]|\\.)*')
  | (?P<integer>-?[0-9]+(?![A-Za-z_]))
  | (?P<name>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z][A-Za-z0-9_]*)
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            ch = text[pos]
            hint = "unterminated quoted atom" if ch == "'" else f"unexpected character {ch!r}"
            raise ParseError(hint, line, pos - line_start + 1)
        kind, value = m.lastgroup, m.group()
        if kind not in ("ws", "comment"):
            if kind == "quoted":
                value = re.sub(r"\\(.)", r"\1", value[1:-1])
                if not value:
                    raise ParseError("empty quoted atom", line, pos - line_start + 1)
            tokens.append(Token(kind, value, line, pos - line_start + 1))
        newlines = m.group().count("\n")
        if newlines:
            line += newlines
            line_start = pos + m.group().rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"{message}, found {found}", tok.line, tok.column)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind not in ("punct", "neck"):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def term(self) -> Term:
        t = self.tok
        if t.kind == "var":
            self.advance()
            return Variable(t.text)
        if t.kind in ("name", "quoted", "integer"):
            self.advance()
            return Constant(t.text)
        raise self.error("expected a term")

    def atom(self) -> Literal:
        t = self.tok
        if t.kind != "name":
            if t.kind == "var":
                raise self.error("predicate symbols must start lower-case")
            raise self.error("expected an atom")
        self.advance()
        args: list[Term] = []
        if self.tok.text == "(" and self.tok.kind == "punct":
            self.advance()
            args.append(self.term())
            while self.tok.text == "," and self.tok.kind == "punct":
                self.advance()
                args.append(self.term())
            self.expect(")")
        return Literal(t.text, tuple(args))

    def literal(self) -> Literal:
        t = self.tok
        if t.kind == "name" and t.text == "not":
            nxt = self.tokens[self.i + 1]
            if nxt.kind == "name":
                self.advance()
                return self.atom().negate()
        return self.atom()

    def clause(self) -> Clause:
        start = self.tok
        head = self.atom()
        body: list[Literal] = []
        if self.tok.kind == "neck":
            self.advance()
            body.append(self.literal())
            while self.tok.text == "," and self.tok.kind == "punct":
                self.advance()
                body.append(self.literal())
        self.expect(".")
        return Clause(head, tuple(body), span=(start.line, start.column))

    def clauses(self) -> list[Clause]:
        out = []
        while self.tok.kind != "eof":
            out.append(self.clause())
        return out


def parse_clauses(text: str) -> list[Clause]:
    """Parse clause syntax only, without building a :class:`Theory`."""
    return _Parser(text).clauses()


def parse_theory(text: str) -> Theory:
    """Parse and validate a theory; errors carry the source line."""
    return Theory(parse_clauses(text))


def load_theory(path) -> Theory:
    with open(path, encoding="utf-8") as fh:
        return parse_theory(fh.read())


def parse_atom(text: str) -> Literal:
    p = _Parser(text)
    lit = p.atom()
    if p.tok.text == "." and p.tok.kind == "punct":
        p.advance()
    if p.tok.kind != "eof":
        raise p.error("expected end of atom")
    return lit


def parse_ground_atom(text: str) -> Literal:
    lit = parse_atom(text)
    if not lit.is_ground:
        names = ", ".join(v.name for v in lit.variables())
        raise GroundnessError(f"atom {lit} is not ground (variables: {names})")
    return lit


def serialize_clause(clause: Clause) -> str:
    return str(clause)


def serialize_theory(theory: Iterable[Clause]) -> str:
    return "".join(serialize_clause(c) + "\n" for c in theory)


# -- run configuration ---------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    target: Literal
    filters: tuple[RewritingFilter, ...] = ()
    # Per argument position of the target: allowed constants, or None for the full pool.
    candidate_domains: tuple[tuple[Constant, ...] | None, ...] | None = None
    immutable_constants: frozenset[Constant] = frozenset()
    max_degree: int | None = None
    # None lifts every body constant; {} lifts nothing; otherwise symbol -> positions.
    lift: dict[str, frozenset[int]] | None = field(default=None, hash=False)

    def to_dict(self) -> dict:
        out: dict = {
            "target": str(self.target),
            "filters": [f.to_dict() for f in self.filters],
        }
        if self.candidate_domains is not None:
            out["candidate_domains"] = [None if d is None else [str(c) for c in d]
                                        for d in self.candidate_domains]
        if self.immutable_constants:
            out["immutable_constants"] = sorted(str(c) for c in self.immutable_constants)
        if self.max_degree is not None:
            out["max_degree"] = self.max_degree
        if self.lift is not None:
            out["lift"] = {k: sorted(v) for k, v in sorted(self.lift.items())} if self.lift else False
        return out


def _constant(text, where: str) -> Constant:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ConfigError(f"{where}: expected a constant, got {text!r}")
    text = str(text)
    if text.startswith("'") and text.endswith("'") and len(text) > 2:
        text = text[1:-1]
    if not text or text[0].isupper():
        raise ConfigError(f"{where}: {text!r} is not a constant")
    return Constant(text)


def parse_config(text: str, theory: Theory | None = None) -> RunConfig:
    """Parse a JSON run configuration, validating it against ``theory`` if given."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    known = {"target", "filters", "candidate_domains", "immutable_constants", "max_degree", "lift"}
    extra = set(doc) - known
    if extra:
        raise ConfigError(f"unknown configuration keys: {', '.join(sorted(extra))}")
    if "target" not in doc or not isinstance(doc["target"], str):
        raise ConfigError("missing 'target' (a ground atom string)")
    try:
        target = parse_ground_atom(doc["target"])
    except GenmeError as exc:
        raise ConfigError(f"target: {exc}") from None

    raw_filters = doc.get("filters", [])
    if not isinstance(raw_filters, list):
        raise ConfigError("'filters' must be a list")
    filters = []
    for k, f in enumerate(raw_filters):
        if not isinstance(f, dict) or set(f) - {"from", "to", "mode"} or "from" not in f or "to" not in f:
            raise ConfigError(f"filters[{k}]: expected an object with 'from', 'to' and 'mode'")
        mode = f.get("mode", "single")
        if mode not in MODES:
            raise ConfigError(f"filters[{k}]: mode must be one of {', '.join(MODES)}, got {mode!r}")
        if not all(isinstance(f[key], str) and re.fullmatch(r"[a-z][A-Za-z0-9_]*", f[key])
                   for key in ("from", "to")):
            raise ConfigError(f"filters[{k}]: 'from' and 'to' must be predicate symbols")
        if f["from"] == f["to"]:
            raise ConfigError(f"filters[{k}]: 'from' and 'to' must differ")
        filters.append(RewritingFilter(f["from"], f["to"], mode))

    domains = doc.get("candidate_domains")
    if domains is not None:
        if not isinstance(domains, list) or len(domains) != target.arity:
            raise ConfigError(f"'candidate_domains' must list one entry per argument of "
                              f"{target.symbol}/{target.arity}")
        parsed = []
        for k, d in enumerate(domains):
            if d is None:
                parsed.append(None)
            elif isinstance(d, list):
                parsed.append(tuple(sorted({_constant(c, f"candidate_domains[{k}]") for c in d})))
            else:
                raise ConfigError(f"candidate_domains[{k}] must be a list or null")
        domains = tuple(parsed)

    immutable = doc.get("immutable_constants", [])
    if not isinstance(immutable, list):
        raise ConfigError("'immutable_constants' must be a list")
    immutable = frozenset(_constant(c, "immutable_constants") for c in immutable)

    max_degree = doc.get("max_degree")
    if max_degree is not None and (isinstance(max_degree, bool) or not isinstance(max_degree, int)
                                   or max_degree < 1):
        raise ConfigError("'max_degree' must be a positive integer")

    lift = doc.get("lift", True)
    if lift is True:
        lift = None
    elif lift is False:
        lift = {}
    elif isinstance(lift, dict):
        parsed_lift = {}
        for sym, positions in lift.items():
            if not isinstance(positions, list) or not all(
                    isinstance(p, int) and not isinstance(p, bool) and p >= 0 for p in positions):
                raise ConfigError(f"lift[{sym!r}] must be a list of argument positions")
            parsed_lift[sym] = frozenset(positions)
        lift = parsed_lift
    else:
        raise ConfigError("'lift' must be true, false or an object of positions")

    config = RunConfig(target, tuple(filters), domains, immutable, max_degree, lift)
    if theory is not None:
        validate_config(config, theory)
    return config


def validate_config(config: RunConfig, theory: Theory) -> None:
    preds = theory.predicates
    t = config.target
    if t.symbol not in preds:
        raise ConfigError(f"target predicate {t.symbol} does not occur in the theory")
    if preds[t.symbol] != t.arity:
        raise ConfigError(f"target {t} has arity {t.arity}, theory uses {t.symbol}/{preds[t.symbol]}")
    for f in config.filters:
        for sym in (f.from_symbol, f.to_symbol):
            if sym not in preds and sym not in BUILTINS:
                raise ConfigError(f"filter {f}: unknown predicate {sym}")
        a = preds.get(f.from_symbol, BUILTINS.get(f.from_symbol))
        b = preds.get(f.to_symbol, BUILTINS.get(f.to_symbol))
        if a != b:
            raise ConfigError(f"filter {f}: arity mismatch ({f.from_symbol}/{a} vs {f.to_symbol}/{b})")
    pool = set(theory.constants)
    used = set(config.immutable_constants)
    for d in config.candidate_domains or ():
        used.update(d or ())
    unknown = sorted(str(c) for c in used - pool)
    if unknown:
        raise ConfigError(f"unknown constants: {', '.join(unknown)}")
    for sym, positions in (config.lift or {}).items():
        if sym not in preds:
            raise ConfigError(f"lift: unknown predicate {sym}")
        bad = [p for p in positions if p >= preds[sym]]
        if bad:
            raise ConfigError(f"lift: {sym}/{preds[sym]} has no argument position {bad[0]}")


def load_config(path, theory: Theory | None = None) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), theory)
