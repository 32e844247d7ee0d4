"""Rewriting filters, predicate renaming and constant lifting."""

from __future__ import annotations

from collections.abc import Collection, Iterable, Mapping
from dataclasses import dataclass

from .terms import Clause, Constant, GenmeError, Literal, Substitution, Term, Variable

MODES = ("single", "all")


@dataclass(frozen=True, order=True)
class RewritingFilter:
    """Allows ``from_symbol`` literals in a clause body to become ``to_symbol``.

    ``single`` rewrites one occurrence at a time, ``all`` rewrites every
    occurrence together.
    """

    from_symbol: str
    to_symbol: str
    mode: str = "single"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.from_symbol == self.to_symbol:
            raise ValueError("a filter must map a predicate to a different one")

    @property
    def pair(self) -> tuple[str, str]:
        """Unordered predicate pair, used to merge a filter with its reverse."""
        return tuple(sorted((self.from_symbol, self.to_symbol)))

    def reversed(self) -> RewritingFilter:
        return RewritingFilter(self.to_symbol, self.from_symbol, self.mode)

    def to_dict(self) -> dict[str, str]:
        return {"from": self.from_symbol, "to": self.to_symbol, "mode": self.mode}

    def __str__(self) -> str:
        return f"{self.from_symbol}->{self.to_symbol} ({self.mode})"


def valid_literal_sets(f: RewritingFilter, body: Iterable[Literal]) -> list[tuple[Literal, ...]]:
    occurrences = tuple(l for l in body if l.symbol == f.from_symbol)
    if not occurrences:
        return []
    if f.mode == "single":
        return [(l,) for l in occurrences]
    return [occurrences]


class RenameError(GenmeError, ValueError):
    pass


def rename(literals: Iterable[Literal], p: str, q: str) -> tuple[Literal, ...]:
    """Swap predicate ``p`` for ``q``, keeping each literal's sign and arguments."""
    out = []
    for l in literals:
        if l.symbol != p:
            raise RenameError(f"cannot rename {l}: expected predicate {p}")
        out.append(Literal(q, l.args, l.positive))
    return tuple(out)


def minimally_changed_clause(clause: Clause, literals: Collection[Literal],
                             f: RewritingFilter) -> Clause:
    """Replace ``literals`` in the body by their renamed versions, in place.

    Body positions are kept so the changed clause reads like the original.
    """
    renamed = dict(zip(literals, rename(literals, f.from_symbol, f.to_symbol)))
    missing = [l for l in literals if l not in clause.body]
    if missing:
        raise RenameError(f"{missing[0]} is not in the body of {clause}")
    return Clause(clause.head, tuple(renamed.get(l, l) for l in clause.body), clause.span)


@dataclass(frozen=True)
class LiftedClause:
    clause: Clause
    extension: Substitution
    theta: Substitution

    def restore(self) -> Clause:
        return self.clause.apply(self.extension)


def lift_constants(clause: Clause, theta: Mapping[Variable, Term] = Substitution(),
                   eligible: Mapping[str, Collection[int]] | None = None,
                   prefix: str = "Lift") -> LiftedClause:
    """Turn body constants into fresh variables, one per occurrence.

    ``eligible`` limits lifting to the listed argument positions of the listed
    predicates; ``None`` lifts every body constant. Head constants stay.
    Fresh names are ``Lift1``, ``Lift2``, ... in body order, skipping names the
    clause already uses.
    """
    taken = {v.name for v in clause.variables()} | {v.name for v in theta}
    counter = 0
    extension: dict[Variable, Constant] = {}

    def fresh() -> Variable:
        nonlocal counter
        while True:
            counter += 1
            name = f"{prefix}{counter}"
            if name not in taken:
                return Variable(name)

    body = []
    for lit in clause.body:
        positions = None if eligible is None else eligible.get(lit.symbol, ())
        args = []
        for i, a in enumerate(lit.args):
            if isinstance(a, Constant) and (positions is None or i in positions):
                v = fresh()
                extension[v] = a
                args.append(v)
            else:
                args.append(a)
        body.append(Literal(lit.symbol, tuple(args), lit.positive))
    ext = Substitution(extension)
    return LiftedClause(Clause(clause.head, tuple(body), clause.span), ext,
                        Substitution(theta).union(ext))
