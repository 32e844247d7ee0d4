"""Exhaustive reference for :func:`genme.search.minimal_degree_search`.

Every alternative substitution over the constant pool is enumerated and
checked literal by literal against dense truth tables of the model. No joins,
no head-driven pruning unless asked for: it exists to be obviously correct,
and to count how many altered substitutions a naive search visits.
"""

from __future__ import annotations

from collections.abc import Collection, Mapping
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .engine import Theory, eval_builtin, is_builtin
from .search import DegreeMatch
from .terms import Clause, Constant, GenmeError, Literal, Substitution, Variable

GUARD = 10**7


class OracleGuardError(GenmeError):
    """The enumeration would exceed the configured size guard."""


@dataclass(frozen=True)
class OracleResult:
    match: DegreeMatch | None
    # altered substitutions enumerated (all theta' != theta in the search space)
    altered: int


def truth_table(theory: Theory, lit: Literal, index: Mapping[Constant, int]) -> np.ndarray:
    """Row-major truth table of ``lit``'s predicate over the pool, sign applied."""
    n = len(index)
    table = np.zeros(n ** lit.arity, dtype=np.uint8)
    if is_builtin(lit):
        pool = sorted(index, key=index.get)
        for i, a in enumerate(pool):
            for j, b in enumerate(pool):
                table[i * n + j] = eval_builtin(lit.symbol, (a, b))
    else:
        for t in theory.relation(lit.symbol):
            if all(c in index for c in t):
                flat = 0
                for c in t:
                    flat = flat * n + index[c]
                table[flat] = 1
    return table if lit.positive else 1 - table


def brute_force_oracle(theory: Theory, clause: Clause, theta: Mapping[Variable, Constant],
                       candidate: Literal, immutable: Collection[Constant] = frozenset(),
                       max_degree: int | None = None, head_constrained: bool = False,
                       guard: int = GUARD) -> OracleResult:
    """Enumerate every ``theta'`` over the constant pool and keep the closest misses.

    With ``head_constrained`` the head variables only range over the values the
    candidate dictates; otherwise they roam the whole pool and the head check
    filters them. Variables bound to immutable constants stay fixed.
    """
    pool = theory.constants
    index = {c: i for i, c in enumerate(pool)}
    n = len(pool)
    names = list(theta)
    var_index = {v: i for i, v in enumerate(names)}
    missing = set(clause.variables()) - set(theta)
    if missing:
        raise GenmeError(f"substitution leaves {sorted(v.name for v in missing)} unbound")
    if not names:
        return OracleResult(None, 0)

    pinned: dict[Variable, Constant] = {v: c for v, c in theta.items() if c in immutable}
    if head_constrained:
        if clause.head.symbol != candidate.symbol or clause.head.arity != candidate.arity:
            return OracleResult(None, 0)
        for a, c in zip(clause.head.args, candidate.args):
            if isinstance(a, Variable):
                if pinned.setdefault(a, c) != c:
                    return OracleResult(None, 0)

    sizes = np.array([1 if v in pinned else n for v in names], dtype=np.int64)
    space = int(np.prod(sizes, dtype=np.float64))
    if space > guard:
        raise OracleGuardError(f"{space} substitutions exceed the guard of {guard}")
    domains = np.zeros((len(names), n), dtype=np.int64)
    for i, v in enumerate(names):
        if v in pinned:
            domains[i, 0] = index[pinned[v]]
        else:
            domains[i] = np.arange(n)
    theta_idx = np.array([index[theta[v]] for v in names], dtype=np.int64)

    def code(a) -> int:
        return var_index[a] if isinstance(a, Variable) else -index[a] - 1

    if clause.head.symbol != candidate.symbol or clause.head.arity != candidate.arity \
            or any(c not in index for c in candidate.args):
        return OracleResult(None, int(np.prod(sizes)) - 1)
    head_codes = np.array([code(a) for a in clause.head.args], dtype=np.int64)
    head_values = np.array([index[c] for c in candidate.args], dtype=np.int64)

    body = clause.body
    for lit in body:
        if n ** lit.arity > guard:
            raise OracleGuardError(f"truth table for {lit.symbol} is too large")
    max_arity = max((l.arity for l in body), default=0)
    lit_codes = np.zeros((len(body), max(max_arity, 1)), dtype=np.int64)
    lit_arity = np.array([l.arity for l in body], dtype=np.int64)
    tables, offsets, at = [], [], 0
    for li, lit in enumerate(body):
        for k, a in enumerate(lit.args):
            lit_codes[li, k] = code(a)
        t = truth_table(theory, lit, index)
        tables.append(t)
        offsets.append(at)
        at += len(t)
    lit_offset = np.array(offsets, dtype=np.int64)
    flat = np.concatenate(tables) if tables else np.zeros(1, dtype=np.uint8)

    altered, best, rows = _kernels.scan(domains, sizes, theta_idx, head_codes, head_values,
                                        lit_codes, lit_arity, lit_offset, flat, n)
    if best < 0:
        return OracleResult(None, altered)
    limit = len(theta) if max_degree is None else min(max_degree, len(theta))
    if best > limit:
        return OracleResult(None, altered)
    thetas = sorted({Substitution(zip(names, (pool[i] for i in row))) for row in rows.tolist()})
    return OracleResult(DegreeMatch(int(best), tuple(thetas)), altered)
