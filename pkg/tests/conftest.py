import itertools
import random

import pytest

from genme import datasets
from genme.engine import eval_builtin, is_builtin, stratify
from genme.terms import Clause, Constant, Literal, Variable


@pytest.fixture(scope="session")
def family():
    return datasets.load("family")


@pytest.fixture(scope="session")
def arches():
    return datasets.load("arches")


@pytest.fixture(scope="session")
def filemgmt():
    return datasets.load("filemgmt")


@pytest.fixture(scope="session")
def gf_config(family):
    return datasets.load_config("family_gf.json", family)


@pytest.fixture(scope="session")
def dt_config(family):
    return datasets.load_config("family_dt.json", family)


@pytest.fixture(scope="session")
def arch_config(arches):
    return datasets.load_config("arches.json", arches)


def naive_model(clauses, constants):
    """Least stratified model by exhaustive grounding of every clause.

    Deliberately dumb: each clause is instantiated with every assignment of
    its variables over ``constants`` and re-checked until nothing changes.
    """
    clauses = list(clauses)
    facts: set[Literal] = set()
    for stratum in stratify(clauses):
        rules = [c for c in clauses if c.head.symbol in stratum]
        changed = True
        while changed:
            changed = False
            for c in rules:
                vs = c.variables()
                for values in itertools.product(constants, repeat=len(vs)):
                    g = c.apply(dict(zip(vs, values)))
                    if g.head in facts:
                        continue
                    if all(_holds(l, facts) for l in g.body):
                        facts.add(g.head)
                        changed = True
    return facts


def _holds(lit, facts):
    if is_builtin(lit):
        return eval_builtin(lit.symbol, lit.args) == lit.positive
    return (lit.atom in facts) == lit.positive


PEOPLE = ["ann", "bob", "cid", "dee", "eve", "fay", "gus", "hal", "ivy", "jon", "kim", "lou"]


def random_family_theory(rng: random.Random):
    """Small family-style theory: at most 12 people and at most 6 rules.

    Returns ``(text, target_symbol)``.
    """
    n = rng.randint(4, 12)
    people = PEOPLE[:n]
    lines = []
    for k, p in enumerate(people):
        male = k == 0 or (k > 1 and rng.random() < 0.5)
        lines.append(f"{'male' if male else 'female'}({p}).")
    for j in range(1, n):
        for i in rng.sample(range(j), min(j, rng.randint(0, 2))):
            lines.append(f"parent({people[i]}, {people[j]}).")
    lines.append(f"parent({people[0]}, {people[1]}).")
    lines.append("child(X, Y) :- parent(Y, X).")
    vars_ = ["A", "B", "C", "D"]
    for _ in range(rng.randint(1, 5)):
        body = []
        for _ in range(rng.randint(1, 4)):
            if rng.random() < 0.4:
                body.append((rng.choice(["male", "female"]), (rng.choice(vars_),), True))
            else:
                x, y = rng.sample(vars_, 2)
                if rng.random() < 0.1:
                    y = rng.choice(people)
                body.append((rng.choice(["parent", "child"]), (x, y), True))
        used = sorted({a for _, args, _ in body for a in args if a in vars_})
        for v in [v for v in vars_ if v not in used][:max(0, 2 - len(used))]:
            body.append((rng.choice(["male", "female"]), (v,), True))
            used.append(v)
        head_a, head_b = sorted(used)[:2]
        if rng.random() < 0.3:
            body.append((rng.choice(["male", "female"]), (head_b,), False))
        text = ", ".join(("" if pos else "not ") + f"{sym}({', '.join(args)})"
                         for sym, args, pos in body)
        lines.append(f"target({head_a}, {head_b}) :- {text}.")
    return "\n".join(lines) + "\n", "target"
