"""Stratified bottom-up evaluation with negation as failure.

A :class:`Theory` is validated and materialised once, at construction:
arity consistency, clause safety and stratifiability are checked, then the
least model is computed stratum by stratum with semi-naive iteration. Every
query afterwards is a read against that model, so a theory can be shared
freely between threads.
"""

from __future__ import annotations

import datetime
import re
from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping, Sequence
from functools import lru_cache

from .terms import (
    Clause,
    Constant,
    GenmeError,
    GroundnessError,
    Literal,
    Substitution,
    Term,
    Variable,
)

BUILTINS = {"lt": 2, "gt": 2}

_ISO_DATE = re.compile(r"[0-9]{4}-[0-9]{2}-[0-9]{2}\Z")
_INTEGER = re.compile(r"-?[0-9]+\Z")


class TheoryError(GenmeError):
    """Load-time problem with a theory; carries the offending source line."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class ArityError(TheoryError):
    pass


class SafetyError(TheoryError):
    pass


class StratificationError(TheoryError):
    pass


def _span_of(clause: Clause) -> tuple[int | None, int | None]:
    return clause.span if clause.span else (None, None)


@lru_cache(maxsize=None)
def _comparable(c: Constant):
    if _INTEGER.match(c.name):
        return (0, int(c.name))
    if _ISO_DATE.match(c.name):
        try:
            return (1, datetime.date.fromisoformat(c.name))
        except ValueError:
            return None
    return None


def eval_builtin(symbol: str, args: Sequence[Constant]) -> bool:
    """``lt``/``gt`` over integers or ISO-8601 dates; mixed kinds compare false."""
    a, b = _comparable(args[0]), _comparable(args[1])
    if a is None or b is None or a[0] != b[0]:
        return False
    return a[1] < b[1] if symbol == "lt" else a[1] > b[1]


def is_builtin(lit: Literal) -> bool:
    return lit.symbol in BUILTINS and lit.arity == BUILTINS[lit.symbol]


class Relation:
    """A set of ground tuples with lazily built hash indexes on bound positions."""

    __slots__ = ("tuples", "_indexes")

    def __init__(self, tuples: Iterable[tuple[Constant, ...]] = ()):
        self.tuples: set[tuple[Constant, ...]] = set(tuples)
        self._indexes: dict[tuple[int, ...], dict[tuple, list]] = {}

    def add(self, t: tuple[Constant, ...]) -> bool:
        if t in self.tuples:
            return False
        self.tuples.add(t)
        for positions, index in self._indexes.items():
            index.setdefault(tuple(t[i] for i in positions), []).append(t)
        return True

    def lookup(self, positions: tuple[int, ...], key: tuple) -> Iterable[tuple[Constant, ...]]:
        if not positions:
            return self.tuples
        if len(positions) == len(next(iter(self.tuples), key)):
            return (key,) if key in self.tuples else ()
        index = self._indexes.get(positions)
        if index is None:
            index = {}
            for t in self.tuples:
                index.setdefault(tuple(t[i] for i in positions), []).append(t)
            self._indexes[positions] = index
        return index.get(key, ())

    def __contains__(self, t) -> bool:
        return t in self.tuples

    def __len__(self) -> int:
        return len(self.tuples)


_EMPTY = Relation()


def order_body(body: Sequence[Literal], bound: Iterable[Variable] = ()) -> list[Literal]:
    """Order a body for left-to-right evaluation.

    Positive database literals are picked greedily by how many of their
    arguments are already bound; negative and built-in literals are placed as
    soon as all their variables are bound. Raises :class:`SafetyError` when a
    filter literal can never become bound.
    """
    bound = set(bound)
    generators = [l for l in body if l.positive and not is_builtin(l)]
    filters = [l for l in body if not l.positive or is_builtin(l)]
    plan: list[Literal] = []

    def flush():
        for f in list(filters):
            if set(f.variables()) <= bound:
                plan.append(f)
                filters.remove(f)

    flush()
    while generators:
        best = max(generators, key=lambda l: (sum(1 for a in l.args
                                                  if isinstance(a, Constant) or a in bound),
                                              -generators.index(l)))
        generators.remove(best)
        plan.append(best)
        bound.update(best.variables())
        flush()
    if filters:
        loose = sorted({v.name for f in filters for v in f.variables() if v not in bound})
        raise SafetyError(f"variables {', '.join(loose)} occur only in negative or built-in literals")
    return plan


def solve(plan: Sequence[Literal], relations: Mapping[str, Relation],
          binding: dict[Variable, Constant],
          delta: tuple[int, Relation] | None = None) -> Iterator[dict[Variable, Constant]]:
    """Enumerate extensions of ``binding`` satisfying ``plan`` in order.

    ``delta`` optionally replaces the relation used at one plan position,
    which is how semi-naive iteration restricts a rule to new facts.
    """
    n = len(plan)

    def step(i: int, b: dict[Variable, Constant]):
        if i == n:
            yield b
            return
        lit = plan[i]
        if not lit.positive or is_builtin(lit):
            ground = tuple(a if isinstance(a, Constant) else b[a] for a in lit.args)
            if is_builtin(lit):
                holds = eval_builtin(lit.symbol, ground)
            else:
                holds = ground in relations.get(lit.symbol, _EMPTY)
            if holds == lit.positive:
                yield from step(i + 1, b)
            return
        rel = delta[1] if delta is not None and delta[0] == i else relations.get(lit.symbol, _EMPTY)
        positions, key, free = [], [], []
        for pos, a in enumerate(lit.args):
            if isinstance(a, Constant):
                positions.append(pos)
                key.append(a)
            elif a in b:
                positions.append(pos)
                key.append(b[a])
            else:
                free.append((pos, a))
        for t in rel.lookup(tuple(positions), tuple(key)):
            ext = dict(b)
            ok = True
            for pos, v in free:
                seen = ext.get(v)
                if seen is None:
                    ext[v] = t[pos]
                elif seen != t[pos]:
                    ok = False
                    break
            if ok:
                yield from step(i + 1, ext)

    yield from step(0, dict(binding))


def check_safety(clause: Clause) -> None:
    """Every head, negative or built-in variable must occur in a positive database literal."""
    line, col = _span_of(clause)
    positive_vars = {v for l in clause.body if l.positive and not is_builtin(l) for v in l.variables()}
    unsafe = [v for v in clause.head.variables() if v not in positive_vars]
    unsafe += [v for l in clause.body if not l.positive or is_builtin(l)
               for v in l.variables() if v not in positive_vars]
    if unsafe:
        names = ", ".join(sorted({v.name for v in unsafe}))
        raise SafetyError(f"unsafe clause {clause}: variables {names} are not bound by a "
                          "positive body literal", line, col)


def stratify(clauses: Sequence[Clause]) -> list[frozenset[str]]:
    """Layer predicate symbols so negative dependencies point strictly downwards."""
    symbols: dict[str, None] = {}
    edges: list[tuple[str, str, bool, Clause]] = []
    for c in clauses:
        symbols.setdefault(c.head.symbol, None)
        for l in c.body:
            if is_builtin(l):
                continue
            symbols.setdefault(l.symbol, None)
            edges.append((c.head.symbol, l.symbol, not l.positive, c))

    successors: dict[str, set[str]] = defaultdict(set)
    for head, dep, _, _ in edges:
        successors[head].add(dep)

    def reaches(src: str, dst: str) -> bool:
        stack, seen = [src], {src}
        while stack:
            s = stack.pop()
            if s == dst:
                return True
            for t in successors[s]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return False

    for head, dep, negative, clause in edges:
        if negative and reaches(dep, head):
            line, col = _span_of(clause)
            raise StratificationError(
                f"predicate {head} depends negatively on {dep} inside a recursive cycle", line, col)

    level = dict.fromkeys(symbols, 0)
    changed = True
    while changed:
        changed = False
        for head, dep, negative, _ in edges:
            need = level[dep] + (1 if negative else 0)
            if level[head] < need:
                level[head] = need
                changed = True
    strata: dict[int, set[str]] = defaultdict(set)
    for s, lvl in level.items():
        strata[lvl].add(s)
    return [frozenset(strata[k]) for k in sorted(strata)]


class Theory:
    """An immutable clausal theory together with its least stratified model."""

    def __init__(self, clauses: Iterable[Clause]):
        self.clauses: tuple[Clause, ...] = tuple(dict.fromkeys(clauses))
        self.predicates: dict[str, int] = {}
        constants: set[Constant] = set()
        for c in self.clauses:
            for lit in (c.head, *c.body):
                self._check_arity(lit, c)
            if is_builtin(c.head):
                line, col = _span_of(c)
                raise TheoryError(f"cannot define built-in predicate {c.head.symbol}/2", line, col)
            check_safety(c)
            constants |= c.constants()
        self.constants: tuple[Constant, ...] = tuple(sorted(constants))
        self.strata = stratify(self.clauses)
        self._model: dict[str, Relation] = {}
        self._evaluate()

    def _check_arity(self, lit: Literal, clause: Clause) -> None:
        if is_builtin(lit):
            return
        if lit.symbol in BUILTINS:
            line, col = _span_of(clause)
            raise ArityError(f"built-in {lit.symbol} takes 2 arguments, got {lit.arity}", line, col)
        known = self.predicates.setdefault(lit.symbol, lit.arity)
        if known != lit.arity:
            line, col = _span_of(clause)
            raise ArityError(f"predicate {lit.symbol} used with arity {lit.arity} "
                             f"but previously with arity {known}", line, col)

    def _evaluate(self) -> None:
        model = self._model
        for sym in self.predicates:
            model[sym] = Relation()
        for c in self.clauses:
            if c.is_fact:
                model[c.head.symbol].add(c.head.args)
        rules = [c for c in self.clauses if not c.is_fact]
        for stratum in self.strata:
            self._evaluate_stratum([c for c in rules if c.head.symbol in stratum], stratum)

    def _evaluate_stratum(self, rules: list[Clause], stratum: frozenset[str]) -> None:
        model = self._model
        plans = [(c, order_body(c.body)) for c in rules]
        delta: dict[str, Relation] = defaultdict(Relation)
        for c, plan in plans:
            for b in solve(plan, model, {}):
                head = tuple(a if isinstance(a, Constant) else b[a] for a in c.head.args)
                if head not in model[c.head.symbol]:
                    delta[c.head.symbol].add(head)
        recursive = [(c, plan, [i for i, l in enumerate(plan)
                                if l.positive and l.symbol in stratum and not is_builtin(l)])
                     for c, plan in plans]
        recursive = [r for r in recursive if r[2]]
        while delta:
            for sym, rel in delta.items():
                for t in rel.tuples:
                    model[sym].add(t)
            new: dict[str, Relation] = defaultdict(Relation)
            for c, plan, positions in recursive:
                for i in positions:
                    d = delta.get(plan[i].symbol)
                    if d is None:
                        continue
                    for b in solve(plan, model, {}, delta=(i, d)):
                        head = tuple(a if isinstance(a, Constant) else b[a] for a in c.head.args)
                        if head not in model[c.head.symbol]:
                            new[c.head.symbol].add(head)
            delta = new

    # -- queries -------------------------------------------------------------

    def relation(self, symbol: str) -> frozenset[tuple[Constant, ...]]:
        return frozenset(self._model.get(symbol, _EMPTY).tuples)

    @property
    def relations(self) -> Mapping[str, Relation]:
        return self._model

    def models_literal(self, lit: Literal) -> bool:
        if not lit.is_ground:
            raise GroundnessError(f"literal must be ground: {lit}")
        if is_builtin(lit):
            holds = eval_builtin(lit.symbol, lit.args)
        else:
            holds = lit.args in self._model.get(lit.symbol, _EMPTY)
        return holds == lit.positive

    def models_literal_set(self, literals: Iterable[Literal],
                           bindings: Mapping[Variable, Term] | None = None) -> list[Substitution]:
        """All substitutions over the variables of ``literals`` under which each is modeled.

        ``bindings`` pre-binds variables; pre-bound variables that occur in
        the literal set are reported in the result. The empty set yields
        ``[Substitution()]``.
        """
        literals = list(dict.fromkeys(literals))
        bindings = dict(bindings or {})
        wanted = {v for l in literals for v in l.variables()}
        plan = order_body(literals, bound=bindings)
        found = {Substitution({v: t for v, t in b.items() if v in wanted})
                 for b in solve(plan, self._model, bindings)}
        return sorted(found)

    def iter_solutions(self, plan: Sequence[Literal],
                       bindings: dict[Variable, Constant]) -> Iterator[dict[Variable, Constant]]:
        """Raw join over an already ordered body (see :func:`order_body`)."""
        return solve(plan, self._model, bindings)

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def __repr__(self) -> str:
        return f"Theory({len(self.clauses)} clauses, {len(self.constants)} constants)"


def models_literal(theory: Theory, lit: Literal) -> bool:
    return theory.models_literal(lit)


def models_literal_set(theory: Theory, literals: Iterable[Literal],
                       bindings: Mapping[Variable, Term] | None = None) -> list[Substitution]:
    return theory.models_literal_set(literals, bindings)


def constants_of(theory: Theory) -> tuple[Constant, ...]:
    return theory.constants
