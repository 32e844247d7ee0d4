"""Local (trace) explanations of positive examples, and their rendering."""

from __future__ import annotations

import json
import string
from collections.abc import Mapping
from dataclasses import dataclass

from .engine import Theory
from .terms import Clause, GenmeError, GroundnessError, Literal, Substitution, match_atom


class NotPositiveError(GenmeError):
    """The example is not modeled by the theory."""


class TemplateError(GenmeError):
    pass


@dataclass(frozen=True)
class LocalExplanation:
    clause: Clause
    theta: Substitution

    @property
    def ground_clause(self) -> Clause:
        return self.clause.apply(self.theta)

    @property
    def head(self) -> Literal:
        return self.clause.head.apply(self.theta)


def local_explanations(theory: Theory, example: Literal) -> list[LocalExplanation]:
    """Every ground instance ``C theta`` of a theory clause that derives ``example``.

    Clauses are visited in theory order, substitutions in canonical order.
    """
    if not example.is_ground:
        raise GroundnessError(f"example must be ground: {example}")
    if not example.positive or not theory.models_literal(example):
        raise NotPositiveError(f"{example} is not a positive example of the theory")
    found = []
    for clause in theory.clauses:
        head_theta = match_atom(clause.head, example)
        if head_theta is None:
            continue
        for theta in theory.models_literal_set(clause.body, head_theta):
            found.append(LocalExplanation(clause, head_theta.union(theta)))
    return found


# -- rendering -------------------------------------------------------------------

@dataclass(frozen=True)
class Template:
    positive: str
    negative: str | None = None


def _slots(pattern: str) -> set[int]:
    slots = set()
    for _, name, _, _ in string.Formatter().parse(pattern):
        if name is None:
            continue
        if not name.isdigit():
            raise TemplateError(f"template slot {{{name}}} must be a position like {{0}}")
        slots.add(int(name))
    return slots


def parse_templates(text: str) -> dict[str, Template]:
    """Template table: predicate -> pattern, or -> {"pos": ..., "neg": ...}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TemplateError(f"line {exc.lineno}: malformed template JSON: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise TemplateError("template table must be a JSON object")
    table = {}
    for sym, spec in doc.items():
        if isinstance(spec, str):
            table[sym] = Template(spec)
        elif isinstance(spec, dict) and isinstance(spec.get("pos"), str) and \
                isinstance(spec.get("neg", ""), str) and set(spec) <= {"pos", "neg"}:
            table[sym] = Template(spec["pos"], spec.get("neg"))
        else:
            raise TemplateError(f"template for {sym} must be a string or {{'pos', 'neg'}} object")
        for pattern in filter(None, (table[sym].positive, table[sym].negative)):
            _slots(pattern)
    return table


def load_templates(path) -> dict[str, Template]:
    with open(path, encoding="utf-8") as fh:
        return parse_templates(fh.read())


def check_templates(templates: Mapping[str, Template], arities: Mapping[str, int]) -> None:
    for sym, t in templates.items():
        if sym not in arities:
            continue
        for pattern in filter(None, (t.positive, t.negative)):
            if _slots(pattern) != set(range(arities[sym])):
                raise TemplateError(f"template {pattern!r} for {sym}/{arities[sym]} "
                                    f"must use slots {{0}}..{{{arities[sym] - 1}}}")


def render_literal(lit: Literal, templates: Mapping[str, Template], negate: bool = False) -> str:
    negative = negate != (not lit.positive)
    t = templates.get(lit.symbol)
    if t is None:
        return str(lit.atom.negate() if negative else lit.atom)
    check_templates({lit.symbol: t}, {lit.symbol: lit.arity})
    args = [str(a) for a in lit.args]
    if not negative:
        return t.positive.format(*args)
    if t.negative:
        return t.negative.format(*args)
    return "it is NOT the case that " + t.positive.format(*args)


def render_explanation(expl, templates: Mapping[str, Template] | None = None) -> str:
    """Render a local or near-miss explanation.

    Without templates this is the ground clause. With templates it is one
    sentence: the head (NOT-marked for a near miss), then the body literals
    joined by "and".
    """
    clause = expl.ground_clause
    if not templates:
        return str(clause)
    miss = getattr(expl, "is_miss", False)
    head = render_literal(clause.head, templates, negate=miss)
    if not clause.body:
        sentence = head
    else:
        sentence = head + " because " + " and ".join(render_literal(l, templates) for l in clause.body)
    return sentence[:1].upper() + sentence[1:] + "."
