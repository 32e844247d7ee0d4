"""Near-miss generation: candidates, degree-ranked substitution search, assembly."""

from __future__ import annotations

import itertools
import os
from collections import defaultdict
from collections.abc import Collection, Iterable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .engine import Theory, order_body
from .explanation import LocalExplanation, local_explanations
from .parser import RunConfig
from .rewrite import (
    RewritingFilter,
    lift_constants,
    minimally_changed_clause,
    valid_literal_sets,
)
from .terms import Clause, Constant, GenmeError, Literal, Substitution, Variable, match_atom


class DomainMismatchError(GenmeError, ValueError):
    pass


def substitution_distance(theta: Mapping[Variable, Constant],
                          theta_prime: Mapping[Variable, Constant]) -> int:
    """Number of variables bound differently, ``|theta \\ theta'|``."""
    if set(theta) != set(theta_prime):
        raise DomainMismatchError("substitutions must bind the same variables")
    return sum(1 for v, t in theta.items() if theta_prime[v] != t)


def near_miss_candidates(theory: Theory, example: Literal,
                         domains: Sequence[Collection[Constant] | None] | None = None) -> list[Literal]:
    """Ground atoms with the example's predicate that the theory does not model."""
    if domains is not None and len(domains) != example.arity:
        raise ValueError(f"need {example.arity} candidate domains, got {len(domains)}")
    pools = [sorted(d) if d is not None else list(theory.constants)
             for d in (domains or [None] * example.arity)]
    out = []
    for args in itertools.product(*pools):
        cand = Literal(example.symbol, tuple(args))
        if not theory.models_literal(cand):
            out.append(cand)
    return out


@dataclass(frozen=True)
class DegreeMatch:
    degree: int
    thetas: tuple[Substitution, ...]


def _fixed_bindings(clause: Clause, theta: Mapping[Variable, Constant], candidate: Literal,
                    immutable: Collection[Constant]) -> dict[Variable, Constant] | None:
    missing = set(clause.variables()) - set(theta)
    if missing:
        raise DomainMismatchError(f"substitution leaves {sorted(v.name for v in missing)} unbound")
    head = match_atom(clause.head, candidate)
    if head is None:
        return None
    fixed = dict(head)
    for v, c in theta.items():
        if c in immutable:
            if fixed.setdefault(v, c) != c:
                return None
    return fixed


def minimal_degree_search(theory: Theory, clause: Clause, theta: Mapping[Variable, Constant],
                          candidate: Literal, immutable: Collection[Constant] = frozenset(),
                          max_degree: int | None = None) -> DegreeMatch | None:
    """Smallest degree at which ``clause`` grounds to a miss for ``candidate``.

    Head variables are pinned by the candidate and immutable bindings are kept,
    then the body is solved as a join against the model. Every solution is a
    substitution satisfying the body with the right head, so the lowest
    distance among them is the degree the incremental search would stop at,
    and all solutions at that distance are returned.
    """
    fixed = _fixed_bindings(clause, theta, candidate, immutable)
    if fixed is None:
        return None
    limit = len(theta) if max_degree is None else min(max_degree, len(theta))
    plan = order_body(clause.body, bound=fixed)
    best = None
    hits: set[Substitution] = set()
    names = list(theta)
    for b in theory.iter_solutions(plan, fixed):
        full = [(v, b.get(v, theta[v])) for v in names]
        d = sum(1 for v, c in full if c != theta[v])
        if d == 0 or d > limit or (best is not None and d > best):
            continue
        if best is None or d < best:
            best = d
            hits = set()
        hits.add(Substitution(full))
    if best is None:
        return None
    return DegreeMatch(best, tuple(sorted(hits)))


@dataclass(frozen=True)
class NearMissExplanation:
    ground_clause: Clause
    degree: int
    candidate: Literal
    filter: RewritingFilter
    source_clause: Clause
    changed_clause: Clause
    literal_set: tuple[Literal, ...]
    theta: Substitution
    theta_prime: Substitution

    is_miss = True

    def sort_key(self, filter_rank: int = 0) -> tuple:
        return (self.degree, tuple(a.name for a in self.candidate.args), filter_rank,
                self.theta_prime)

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "candidate": str(self.candidate),
            "clause": str(self.ground_clause),
            "filter": self.filter.to_dict(),
            "source_clause": str(self.source_clause),
            "changed_clause": str(self.changed_clause),
            "literal_set": [str(l) for l in self.literal_set],
            "theta": self.theta.to_dict(),
            "theta_prime": self.theta_prime.to_dict(),
        }


@dataclass(frozen=True)
class NearMissFamily:
    """The degree-indexed result sets, with provenance, for one target."""

    target: Literal
    filters: tuple[RewritingFilter, ...]
    candidates: tuple[Literal, ...]
    local: tuple[LocalExplanation, ...]
    explanations: tuple[NearMissExplanation, ...]
    # largest |theta| over the local explanations, after lifting
    max_theta: int = 0

    def by_filter(self, f: RewritingFilter) -> dict[int, list[NearMissExplanation]]:
        out: dict[int, list[NearMissExplanation]] = defaultdict(list)
        for e in self.explanations:
            if e.filter == f:
                out[e.degree].append(e)
        return dict(out)

    def degree_set(self, d: int, filters: Iterable[RewritingFilter] | None = None) -> set[Clause]:
        wanted = set(self.filters if filters is None else filters)
        return {e.ground_clause for e in self.explanations if e.degree == d and e.filter in wanted}

    def histogram(self, filters: Iterable[RewritingFilter] | RewritingFilter,
                  degrees: Iterable[int] | None = None) -> dict[int, int]:
        """``|E_d|`` over the given filter(s); a filter and its reverse form one table row."""
        if isinstance(filters, RewritingFilter):
            filters = [filters]
        filters = list(filters)
        degrees = range(1, self.report_degrees + 1) if degrees is None else degrees
        return {d: len(self.degree_set(d, filters)) for d in degrees}

    def pairs(self) -> dict[tuple[str, str], list[RewritingFilter]]:
        """Filters grouped by unordered predicate pair, in first-seen order."""
        out: dict[tuple[str, str], list[RewritingFilter]] = {}
        for f in self.filters:
            out.setdefault(f.pair, []).append(f)
        return out

    @property
    def report_degrees(self) -> int:
        """Columns shown in reports: at least 3 (or ``|theta|`` if smaller), more if found."""
        found = max((e.degree for e in self.explanations), default=0)
        return max(found, min(3, self.max_theta), 1)


def _thread_count(threads: int | None) -> int:
    if threads is None:
        raw = os.environ.get("GENME_THREADS", "1")
        try:
            threads = int(raw)
        except ValueError:
            threads = 1
    if threads <= 0:
        threads = os.cpu_count() or 1
    return threads


@dataclass(frozen=True)
class _Variant:
    local: LocalExplanation
    filter: RewritingFilter
    literal_set: tuple[Literal, ...]
    clause: Clause
    theta: Substitution


def variants(theory: Theory, example: Literal, filters: Sequence[RewritingFilter],
             lift: Mapping[str, Collection[int]] | None = None,
             locals_: Sequence[LocalExplanation] | None = None) -> list[_Variant]:
    """All (local explanation, filter, literal set) triples with their changed clause."""
    if locals_ is None:
        locals_ = local_explanations(theory, example)
    out = []
    for le in locals_:
        lifted = lift_constants(le.clause, le.theta, lift)
        for f in filters:
            for lits in valid_literal_sets(f, lifted.clause.body):
                changed = minimally_changed_clause(lifted.clause, lits, f)
                out.append(_Variant(le, f, lits, changed, lifted.theta))
    return out


def genme(theory: Theory, config: RunConfig, threads: int | None = None) -> NearMissFamily:
    """Generate the near-miss family for ``config.target``.

    Loops over local explanations (constants lifted), filters, valid literal
    sets and candidates; each (changed clause, candidate) pair contributes the
    explanations at its minimal degree. Output order never depends on
    ``threads``.
    """
    example = config.target
    locals_ = local_explanations(theory, example)
    candidates = near_miss_candidates(theory, example, config.candidate_domains)
    work = variants(theory, example, config.filters, config.lift, locals_)
    max_theta = max((len(lift_constants(le.clause, le.theta, config.lift).theta)
                     for le in locals_), default=0)

    def run(variant: _Variant) -> list[NearMissExplanation]:
        found = []
        for cand in candidates:
            match = minimal_degree_search(theory, variant.clause, variant.theta, cand,
                                          config.immutable_constants, config.max_degree)
            if match is None:
                continue
            for tp in match.thetas:
                found.append(NearMissExplanation(
                    variant.clause.apply(tp), match.degree, cand, variant.filter,
                    variant.local.clause, variant.clause, variant.literal_set,
                    variant.theta, tp))
        return found

    n = _thread_count(threads)
    if n > 1 and len(work) > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            batches = list(pool.map(run, work))
    else:
        batches = [run(v) for v in work]

    seen: dict[tuple, NearMissExplanation] = {}
    for batch in batches:
        for e in batch:
            seen.setdefault((e.filter, e.degree, e.ground_clause), e)
    rank = {f: i for i, f in reversed(list(enumerate(config.filters)))}
    ordered = sorted(seen.values(), key=lambda e: e.sort_key(rank[e.filter]))
    return NearMissFamily(example, tuple(config.filters), tuple(candidates), tuple(locals_),
                          tuple(ordered), max_theta)
