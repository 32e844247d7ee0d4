import dataclasses
import random

import pytest

from genme import datasets
from genme.explanation import local_explanations
from genme.oracle import OracleGuardError, brute_force_oracle
from genme.parser import parse_ground_atom, parse_theory
from genme.rewrite import (
    RewritingFilter,
    lift_constants,
    minimally_changed_clause,
    valid_literal_sets,
)
from genme.search import (
    DomainMismatchError,
    _thread_count,
    genme,
    minimal_degree_search,
    near_miss_candidates,
    substitution_distance,
    variants,
)
from genme.terms import Constant, Substitution, Variable

from conftest import random_family_theory

A, B, C = Variable("A"), Variable("B"), Variable("C")
g = parse_ground_atom


def sub(**kw):
    return Substitution({Variable(k): Constant(v) for k, v in kw.items()})


@pytest.mark.parametrize("theta_prime, expected", [
    (sub(A="ian", B="kate", C="tom"), 0),
    (sub(A="jodie", B="kate", C="tom"), 1),
    (sub(A="jodie", B="mat", C="tom"), 2),
    (sub(A="lynn", B="mat", C="charlie"), 3),
])
def test_distance(theta_prime, expected):
    assert substitution_distance(sub(A="ian", B="kate", C="tom"), theta_prime) == expected


def test_distance_domain_mismatch():
    with pytest.raises(DomainMismatchError):
        substitution_distance(sub(A="ian"), sub(B="ian"))


def test_candidate_counts(family, arches, filemgmt):
    assert len(near_miss_candidates(family, g("grandfather(ian,kate)"))) == 96
    assert len(near_miss_candidates(family, g("daughter(becky,jodie)"))) == 92
    structs = [Constant(f"struct{i}") for i in range(1, 7)]
    assert [str(c) for c in near_miss_candidates(arches, g("arch(struct1)"), [structs])] == \
        ["arch(struct4)", "arch(struct5)", "arch(struct6)"]


def test_candidates_never_modeled(family):
    for cand in near_miss_candidates(family, g("grandfather(ian,kate)")):
        assert not family.models_literal(cand)


@pytest.fixture(scope="module")
def gf_parts(family):
    (le,) = local_explanations(family, g("grandfather(ian,kate)"))
    f = RewritingFilter("male", "female")
    (lits,) = valid_literal_sets(f, le.clause.body)
    return le, minimally_changed_clause(le.clause, lits, f)


def test_minimal_degree_jodie_kate(family, gf_parts):
    le, changed = gf_parts
    m = minimal_degree_search(family, changed, le.theta, g("grandfather(jodie,kate)"))
    assert m.degree == 1
    assert m.thetas == (sub(A="jodie", B="kate", C="tom"),)


def test_minimal_degree_lynn_mat(family, gf_parts):
    le, changed = gf_parts
    m = minimal_degree_search(family, changed, le.theta, g("grandfather(lynn,mat)"))
    assert m.degree == 3 and m.thetas == (sub(A="lynn", B="mat", C="charlie"),)


def test_minimal_degree_unreachable(family, gf_parts):
    le, changed = gf_parts
    assert minimal_degree_search(family, changed, le.theta, g("grandfather(mat,ian)")) is None


def test_max_degree_bounds_search(family, gf_parts):
    le, changed = gf_parts
    cand = g("grandfather(lynn,mat)")
    assert minimal_degree_search(family, changed, le.theta, cand, max_degree=2) is None
    assert minimal_degree_search(family, changed, le.theta, cand, max_degree=3).degree == 3


def test_immutable_constant_pins_variable(family, gf_parts):
    le, changed = gf_parts
    tom = {Constant("tom")}
    assert minimal_degree_search(family, changed, le.theta, g("grandfather(jodie,kate)"), tom).degree == 1
    assert minimal_degree_search(family, changed, le.theta, g("grandfather(lynn,kate)"), tom) is None


def test_head_mismatch(family, gf_parts):
    le, changed = gf_parts
    assert minimal_degree_search(family, changed, le.theta, g("daughter(jodie,kate)")) is None


def test_arch_struct4_under_supported_by_variant_is_not_a_miss(arches):
    (le,) = local_explanations(arches, g("arch(struct1)"))
    lifted = lift_constants(le.clause, le.theta)
    f = RewritingFilter("supports", "supported_by", "all")
    (lits,) = valid_literal_sets(f, lifted.clause.body)
    changed = minimally_changed_clause(lifted.clause, lits, f)
    assert minimal_degree_search(arches, changed, lifted.theta, g("arch(struct4)")) is None
    assert minimal_degree_search(arches, changed, lifted.theta, g("arch(struct5)")).degree == 3


def test_oracle_matches_search_on_gf(family, gf_parts):
    le, changed = gf_parts
    for cand in near_miss_candidates(family, g("grandfather(ian,kate)")):
        oracle = brute_force_oracle(family, changed, le.theta, cand)
        assert oracle.altered == 999
        assert oracle.match == minimal_degree_search(family, changed, le.theta, cand)


def test_oracle_guard(arches):
    (le,) = local_explanations(arches, g("arch(struct1)"))
    with pytest.raises(OracleGuardError):
        brute_force_oracle(arches, le.clause, le.theta, g("arch(struct4)"), guard=1000)


def test_oracle_agrees_on_random_theories():
    rng = random.Random(3)
    checked = 0
    for _ in range(15):
        text, sym = random_family_theory(rng)
        theory = parse_theory(text)
        rel = sorted(theory.relation(sym))
        if not rel:
            continue
        example = g(f"{sym}({','.join(c.name for c in rel[0])})")
        filters = [RewritingFilter("male", "female"), RewritingFilter("parent", "child", "all")]
        for v in variants(theory, example, filters):
            for cand in near_miss_candidates(theory, example)[:10]:
                oracle = brute_force_oracle(theory, v.clause, v.theta, cand)
                assert oracle.match == minimal_degree_search(theory, v.clause, v.theta, cand)
                checked += 1
    assert checked > 50


def test_gf_histograms(family, gf_config):
    r = genme(family, gf_config)
    male, female, parent, child = gf_config.filters
    assert r.histogram([male, female]) == {1: 1, 2: 2, 3: 1}
    assert r.histogram([parent, child]) == {1: 0, 2: 2, 3: 2}
    assert len(r.explanations) == 8


def test_dt_histograms(family, dt_config):
    r = genme(family, dt_config)
    male, female, parent, child = dt_config.filters
    assert r.histogram([male, female]) == {1: 1, 2: 3}
    assert r.histogram([parent, child]) == {1: 0, 2: 6}
    assert str(r.explanations[0].ground_clause) == \
        "daughter(tom,jodie) :- male(tom), child(tom,jodie)."


def test_arch_histograms(arches, arch_config):
    r = genme(arches, arch_config)
    sup, sup_by, meets, not_meets = arch_config.filters
    assert r.max_theta == 7
    assert r.histogram([meets, not_meets]) == {1: 1, 2: 0, 3: 1}
    assert r.histogram([sup, sup_by]) == {1: 0, 2: 0, 3: 1}


def test_filemgmt_histogram(filemgmt):
    cfg = datasets.load_config("filemgmt.json", filemgmt)
    r = genme(filemgmt, cfg)
    assert len(r.candidates) == 9
    assert r.histogram(cfg.filters) == {1: 1, 2: 4, 3: 7}
    assert str(r.explanations[0].candidate) == "irrelevant(file12)"


def test_explanations_are_misses_with_renamed_literals(family, gf_config):
    r = genme(family, gf_config)
    for e in r.explanations:
        assert e.ground_clause.head == e.candidate
        assert not family.models_literal(e.candidate)
        assert all(family.models_literal(l) for l in e.ground_clause.body)
        assert substitution_distance(e.theta, e.theta_prime) == e.degree
        assert any(l.symbol == e.filter.to_symbol for l in e.ground_clause.body)


def test_threads_do_not_change_output(family, gf_config, arches, arch_config):
    for theory, cfg in ((family, gf_config), (arches, arch_config)):
        assert genme(theory, cfg, threads=1) == genme(theory, cfg, threads=4)


def test_thread_count_from_env(monkeypatch):
    monkeypatch.delenv("GENME_THREADS", raising=False)
    assert _thread_count(None) == 1
    monkeypatch.setenv("GENME_THREADS", "3")
    assert _thread_count(None) == 3
    monkeypatch.setenv("GENME_THREADS", "0")
    assert _thread_count(None) >= 1
    assert _thread_count(2) == 2


def test_max_degree_config(family, gf_config):
    r = genme(family, dataclasses.replace(gf_config, max_degree=1))
    assert [e.degree for e in r.explanations] == [1]


def test_empty_filter_list(family, gf_config):
    r = genme(family, dataclasses.replace(gf_config, filters=()))
    assert r.explanations == () and len(r.candidates) == 96


def test_order_is_by_degree(family, dt_config):
    r = genme(family, dt_config)
    degrees = [e.degree for e in r.explanations]
    assert degrees == sorted(degrees)
