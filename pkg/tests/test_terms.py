import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from genme.parser import parse_ground_atom
from genme.terms import (
    Clause,
    Constant,
    GroundnessError,
    Literal,
    Substitution,
    Variable,
    apply_substitution,
    atom,
    match_atom,
)

A, B, C = Variable("A"), Variable("B"), Variable("C")


def sub(**kw):
    return Substitution({Variable(k): Constant(v) for k, v in kw.items()})


def test_apply_grounds_parent_literal():
    assert apply_substitution(atom("parent", "A", "C"), sub(A="ian", C="tom")) == atom("parent", "ian", "tom")


def test_apply_empty_substitution_is_identity():
    lit = atom("parent", "A", "C")
    assert apply_substitution(lit, Substitution()) == lit


def test_apply_to_grandfather_body():
    body = Clause(atom("grandfather", "A", "B"),
                  (atom("male", "A"), atom("parent", "A", "C"), atom("parent", "C", "B")))
    ground = apply_substitution(body, sub(A="jodie", B="kate", C="tom"))
    assert set(ground.body) == {atom("male", "jodie"), atom("parent", "jodie", "tom"),
                                atom("parent", "tom", "kate")}


def test_apply_keeps_sign_and_unbound_variables():
    lit = atom("supports", "Y", "X", "A", positive=False)
    out = lit.apply(sub(Y="b"))
    assert not out.positive
    assert out.args == (Constant("b"), Variable("X"), Variable("A"))


def test_simultaneous_replacement():
    # A -> B and B -> A must swap, not chain
    swap = Substitution({A: B, B: A})
    assert atom("p", "A", "B").apply(swap) == atom("p", "B", "A")


@pytest.mark.parametrize("pattern, target, expected", [
    (atom("grandfather", "A", "B"), "grandfather(ian,kate)", {"A": "ian", "B": "kate"}),
    (atom("grandfather", "A", "A"), "grandfather(ian,kate)", None),
    (atom("daughter", "A", "B"), "grandfather(ian,kate)", None),
    (atom("grandfather", "ian", "B"), "grandfather(ian,kate)", {"B": "kate"}),
    (atom("grandfather", "tom", "B"), "grandfather(ian,kate)", None),
])
def test_match_atom(pattern, target, expected):
    got = match_atom(pattern, parse_ground_atom(target))
    assert got == (None if expected is None else sub(**expected))


def test_match_atom_requires_ground_target():
    with pytest.raises(GroundnessError):
        match_atom(atom("p", "A"), atom("p", "B"))


def test_match_atom_sound_and_complete_by_enumeration(family):
    patterns = [atom("parent", "A", "B"), atom("parent", "A", "A"), atom("parent", "tom", "B"),
                atom("grandfather", "A", "B"), atom("male", "A")]
    pool = family.constants
    for pat in patterns:
        for args in itertools.product(pool, repeat=pat.arity):
            target = Literal(pat.symbol, args)
            theta = match_atom(pat, target)
            # brute force: does any assignment of pattern variables reproduce target?
            vs = sorted(set(pat.variables()))
            witnesses = [dict(zip(vs, vals)) for vals in itertools.product(pool, repeat=len(vs))
                         if pat.apply(dict(zip(vs, vals))) == target]
            if theta is None:
                assert witnesses == []
            else:
                assert pat.apply(theta) == target
                assert [dict(theta)] == witnesses


names = st.sampled_from(["ian", "kate", "tom", "'x y'", "42", "a1"])
variables = st.sampled_from([A, B, C, Variable("D")])
literals = st.builds(
    lambda sym, args, pos: Literal(sym, tuple(args), pos),
    st.sampled_from(["p", "q", "r"]),
    st.lists(st.one_of(variables, names.map(lambda n: Constant(n.strip("'")))), max_size=3),
    st.booleans(),
)
ground_subs = st.dictionaries(variables, names.map(lambda n: Constant(n.strip("'"))), max_size=4)


@given(literals, ground_subs)
def test_substitution_is_idempotent_for_ground_codomain(lit, theta):
    once = lit.apply(theta)
    assert once.apply(theta) == once
    assert once.symbol == lit.symbol and once.arity == lit.arity and once.positive == lit.positive


@given(literals)
def test_empty_substitution_identity(lit):
    assert apply_substitution(lit, {}) == lit


def test_substitution_canonical_order_and_hash():
    s1 = Substitution([(C, Constant("tom")), (A, Constant("ian"))])
    s2 = Substitution({A: Constant("ian"), C: Constant("tom")})
    assert list(s1) == [A, C]
    assert s1 == s2 and hash(s1) == hash(s2)
    assert sorted([sub(A="tom"), sub(A="ian")]) == [sub(A="ian"), sub(A="tom")]


def test_substitution_rejects_conflicting_binding():
    with pytest.raises(ValueError):
        Substitution([(A, Constant("ian")), (A, Constant("tom"))])


def test_constant_rendering_requotes_when_needed():
    assert str(Constant("ian")) == "ian"
    assert str(Constant("6902")) == "6902"
    assert str(Constant("1fTmw4WN.PNG")) == "'1fTmw4WN.PNG'"
    assert str(Constant("Ian")) == "'Ian'"
    assert str(Constant("it's")) == "'it\\'s'"


def test_clause_drops_duplicate_body_literals():
    c = Clause(atom("p", "X"), (atom("q", "X"), atom("q", "X")))
    assert c.body == (atom("q", "X"),)
