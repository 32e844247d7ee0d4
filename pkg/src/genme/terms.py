"""Function-free clausal logic: terms, literals, clauses and substitutions."""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Union

_BARE_CONSTANT = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_INTEGER = re.compile(r"-?[0-9]+\Z")


class GenmeError(Exception):
    """Base class for every error raised by this package."""


class GroundnessError(GenmeError, ValueError):
    """An operation that needs a ground atom received variables."""


@dataclass(frozen=True, order=True, slots=True)
class Variable:
    name: str

    def __post_init__(self):
        if not self.name or not (self.name[0].isupper()):
            raise ValueError(f"variable name must start upper-case: {self.name!r}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True, slots=True)
class Constant:
    """A constant; ``name`` is the unquoted text.

    Quoted atoms and integers are ordinary constants. Rendering re-quotes
    any name that would not read back as a bare constant.
    """

    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("constant name must be non-empty")

    def __str__(self) -> str:
        if _BARE_CONSTANT.match(self.name) or _INTEGER.match(self.name):
            return self.name
        escaped = self.name.replace("\\", "\\\\").replace("'", "\\'")
        return f"'{escaped}'"


Term = Union[Variable, Constant]


@dataclass(frozen=True, slots=True)
class Literal:
    symbol: str
    args: tuple[Term, ...] = ()
    positive: bool = True

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_ground(self) -> bool:
        return all(isinstance(a, Constant) for a in self.args)

    @property
    def atom(self) -> Literal:
        return self if self.positive else Literal(self.symbol, self.args, True)

    def sort_key(self) -> tuple:
        return (self.symbol, tuple((isinstance(a, Variable), a.name) for a in self.args),
                not self.positive)

    def negate(self) -> Literal:
        return Literal(self.symbol, self.args, not self.positive)

    def variables(self) -> Iterator[Variable]:
        return (a for a in self.args if isinstance(a, Variable))

    def apply(self, theta: Mapping[Variable, Term]) -> Literal:
        if not theta:
            return self
        return Literal(self.symbol, tuple(theta.get(a, a) if isinstance(a, Variable) else a
                                          for a in self.args), self.positive)

    def __str__(self) -> str:
        text = self.symbol
        if self.args:
            text += "(" + ",".join(map(str, self.args)) + ")"
        return text if self.positive else "not " + text


@dataclass(frozen=True, slots=True)
class Clause:
    """``head :- body``. The body keeps source order; duplicates are dropped."""

    head: Literal
    body: tuple[Literal, ...] = ()
    # 1-based (line, column) of the clause in its source text, if parsed.
    span: tuple[int, int] | None = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if not self.head.positive:
            raise ValueError("clause head must be a positive atom")
        deduped = tuple(dict.fromkeys(self.body))
        if len(deduped) != len(self.body):
            object.__setattr__(self, "body", deduped)

    @property
    def is_fact(self) -> bool:
        return not self.body

    @property
    def is_ground(self) -> bool:
        return self.head.is_ground and all(l.is_ground for l in self.body)

    def variables(self) -> tuple[Variable, ...]:
        """Variables in order of first occurrence (head first)."""
        seen: dict[Variable, None] = {}
        for lit in (self.head, *self.body):
            for v in lit.variables():
                seen.setdefault(v, None)
        return tuple(seen)

    def constants(self) -> set[Constant]:
        return {a for lit in (self.head, *self.body) for a in lit.args if isinstance(a, Constant)}

    def apply(self, theta: Mapping[Variable, Term]) -> Clause:
        return Clause(self.head.apply(theta), tuple(l.apply(theta) for l in self.body), self.span)

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- " + ", ".join(map(str, self.body)) + "."


class Substitution(Mapping):
    """Immutable, hashable map from variables to terms.

    Iteration and comparison follow the canonical order: by variable name,
    then by bound term name.
    """

    __slots__ = ("_map", "_key")

    def __init__(self, bindings: Mapping[Variable, Term] | Iterable[tuple[Variable, Term]] = ()):
        pairs = bindings.items() if isinstance(bindings, Mapping) else bindings
        mapping: dict[Variable, Term] = {}
        for var, term in pairs:
            if not isinstance(var, Variable):
                raise TypeError(f"substitution keys must be variables, got {var!r}")
            if var in mapping and mapping[var] != term:
                raise ValueError(f"variable {var} bound twice")
            mapping[var] = term
        items = sorted(mapping.items(), key=lambda kv: (kv[0].name, kv[1].name))
        self._map = dict(items)
        self._key = tuple((v.name, type(t).__name__, t.name) for v, t in items)

    def __getitem__(self, var: Variable) -> Term:
        return self._map[var]

    def __iter__(self) -> Iterator[Variable]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __hash__(self) -> int:
        return hash(self._key)

    def __eq__(self, other) -> bool:
        if isinstance(other, Substitution):
            return self._key == other._key
        return isinstance(other, Mapping) and dict(self._map) == dict(other)

    def __lt__(self, other: Substitution) -> bool:
        return self._key < other._key

    def __repr__(self) -> str:
        return "{" + ", ".join(f"{v}->{t}" for v, t in self._map.items()) + "}"

    def union(self, other: Mapping[Variable, Term]) -> Substitution:
        return Substitution([*self._map.items(), *other.items()])

    def to_dict(self) -> dict[str, str]:
        return {v.name: str(t) for v, t in self._map.items()}


Expr = Union[Variable, Constant, Literal, Clause]


def apply_substitution(x: Expr, theta: Mapping[Variable, Term]):
    """Simultaneously replace every bound variable of ``x``."""
    if isinstance(x, Variable):
        return theta.get(x, x)
    if isinstance(x, Constant):
        return x
    if isinstance(x, (Literal, Clause)):
        return x.apply(theta)
    raise TypeError(f"cannot apply a substitution to {type(x).__name__}")


def match_atom(pattern: Literal, target: Literal) -> Substitution | None:
    """One-way match of ``pattern`` onto the ground atom ``target``."""
    if not target.is_ground:
        raise GroundnessError(f"match target must be ground: {target}")
    if pattern.symbol != target.symbol or pattern.arity != target.arity:
        return None
    theta: dict[Variable, Term] = {}
    for p, t in zip(pattern.args, target.args):
        if isinstance(p, Variable):
            bound = theta.setdefault(p, t)
            if bound != t:
                return None
        elif p != t:
            return None
    return Substitution(theta)


def var(name: str) -> Variable:
    return Variable(name)


def const(name: str | int) -> Constant:
    return Constant(str(name))


def atom(symbol: str, *args: str | int | Term, positive: bool = True) -> Literal:
    """Build a literal; strings starting upper-case become variables."""
    terms: list[Term] = []
    for a in args:
        if isinstance(a, (Variable, Constant)):
            terms.append(a)
        elif isinstance(a, int):
            terms.append(Constant(str(a)))
        elif a[:1].isupper():
            terms.append(Variable(a))
        else:
            terms.append(Constant(a))
    return Literal(symbol, tuple(terms), positive)
