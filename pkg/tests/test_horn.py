import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from convergent.gen import (
    all_terms,
    random_body_subterm_clause,
    random_ground_substitution,
    random_small_program,
)
from convergent.horn import (
    Interpretation,
    Program,
    herbrand_universe,
    is_nonexpanding,
    least_model,
    parse_program,
    satisfies,
    tp_step,
    validate_body_subterm_property,
)
from convergent.syntax import ParseError, parse_atom
from convergent.terms import App, Atom, atom_distance, iterate, substitute_atom, variables
from oracles import brute_force_least_model, ground_instances

GAMMA1 = "p(f(X)) :- p(X).\np(f(a)).\n"
A = App("a")


def p_f(i):
    return parse_atom(f"p({iterate('f', i, A)})")


def test_parse_program():
    prog = parse_program("% comment\np(f(X)) :- p(X).\np(f(a)).\n")
    assert len(prog) == 2
    assert not prog.clauses[0].is_fact and prog.clauses[1].is_fact
    assert str(prog.clauses[0]) == "p(f(X)) :- p(X)."
    with pytest.raises(ParseError) as info:
        parse_program("p(a).\np(X) :-")
    assert info.value.line == 2


def test_tp_step_examples():
    prog = parse_program(GAMMA1)
    first = tp_step(prog, Interpretation(frozenset(), 6))
    assert first.atoms == {p_f(1)}
    second = tp_step(prog, first)
    assert second.atoms == {p_f(1), p_f(2)}
    nofacts = parse_program("p(f(X)) :- p(X).")
    assert tp_step(nofacts, Interpretation(frozenset(), 6)).atoms == frozenset()


def test_least_model_gamma1():
    model, fix = least_model(parse_program(GAMMA1), 6, 10)
    assert fix
    assert model.atoms == {p_f(i) for i in range(1, 6)}
    assert model.overflow == 1  # p(f^6(a)) is cut


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_least_model_gamma_k(k):
    prog = parse_program(f"p(f(X)) :- p(X).\np(iter(f,{k},a)).\n")
    model, fix = least_model(prog, 6, 20)
    assert fix and model.atoms == {p_f(i) for i in range(k, 6)}


def test_step_bound_exhausted():
    _, fix = least_model(parse_program(GAMMA1), 12, 3)
    assert not fix


def test_facts_only_one_step():
    prog = parse_program("p(a).\nq(b).\n")
    assert tp_step(prog, Interpretation(frozenset(), 3)).atoms == {parse_atom("p(a)"), parse_atom("q(b)")}


def test_head_only_variables_range_over_universe():
    prog = parse_program("p(X).\nq(a).\nr(f(b)).\n")
    model, _ = least_model(prog, 2, 10)
    assert {a for a in model.atoms if a.pred == "p"} == {
        parse_atom(f"p({t})") for t in ("a", "b", "f(a)", "f(b)")
    }


def test_satisfies_examples():
    i = Interpretation(frozenset({parse_atom("p(a)")}), 3)
    ok, cex = satisfies(i, parse_program("q(a) :- p(a)."))
    assert not ok and cex[2] == parse_atom("q(a)")
    ok, _ = satisfies(Interpretation(frozenset(), 3), parse_program("p(f(X)) :- p(X)."))
    assert ok
    model, _ = least_model(parse_program(GAMMA1), 6, 10)
    assert satisfies(model, parse_program(GAMMA1))[0]


def test_interpretation_respects_bound():
    with pytest.raises(ValueError):
        Interpretation(frozenset({p_f(5)}), 3)


def test_serialize_sorted():
    model, _ = least_model(parse_program("q(b).\np(a).\n"), 3, 5)
    assert model.serialize() == "p(a)\nq(b)\n"


def test_body_subterm_property_examples():
    assert validate_body_subterm_property(parse_program("p(f(X)) :- p(X)."))[0]
    ok, bad = validate_body_subterm_property(parse_program("p(a) :- q(b)."))
    assert not ok and str(bad[0]) == "p(a) :- q(b)."
    assert validate_body_subterm_property(Program())[0]


def test_universe_counts():
    sig = parse_program("p(g(a,f(b))).").signature
    assert len(herbrand_universe(sig, 1)) == 2
    assert len(herbrand_universe(sig, 2)) == 2 + 2 + 4
    assert set(herbrand_universe(sig, 3)) == set(all_terms({"a": 0, "b": 0, "f": 1, "g": 2}, 3))


# -- brute-force oracles ----------------------------------------------------------


def _naive_tp(program, interp):
    universe = all_terms(dict(program.signature.functions), interp.depth_bound)
    out = set()
    for c in program:
        for head, body in ground_instances(c, universe, interp.depth_bound):
            if all(b in interp.atoms for b in body):
                out.add(head)
    return frozenset(out)


def _random_interp(rng, program, depth_bound):
    universe = all_terms(dict(program.signature.functions), depth_bound)
    base = [
        Atom(p, args)
        for p, n in program.signature.predicates.items()
        for args in product(universe, repeat=n)
    ]
    return frozenset(a for a in base if rng.random() < 0.4)


@pytest.mark.parametrize("seed", range(40))
def test_tp_step_matches_naive_enumeration(seed):
    rng = random.Random(seed)
    prog, bound = random_small_program(rng)
    atoms = _random_interp(rng, prog, bound)
    got = tp_step(prog, Interpretation(atoms, bound))
    assert got.atoms == _naive_tp(prog, Interpretation(atoms, bound))


@pytest.mark.parametrize("seed", range(30))
def test_monotonicity(seed):
    rng = random.Random(1000 + seed)
    prog, bound = random_small_program(rng)
    small = _random_interp(rng, prog, bound)
    big = small | _random_interp(rng, prog, bound)
    a = tp_step(prog, Interpretation(small, bound)).atoms
    b = tp_step(prog, Interpretation(big, bound)).atoms
    assert a <= b


@pytest.mark.parametrize("seed", range(25))
def test_fixpoint_soundness_and_leastness(seed):
    rng = random.Random(2000 + seed)
    prog, bound = random_small_program(rng)
    model, fix = least_model(prog, bound, 50)
    assert fix
    assert satisfies(model, prog)[0]
    assert tp_step(prog, model).atoms <= model.atoms
    universe = all_terms(dict(prog.signature.functions), bound)
    assert model.atoms == brute_force_least_model(prog, bound, universe, prog.signature.predicates)


# -- clause distance laws -------------------------------------------------------------


def _head_body_gap(clause, t1, t2):
    h = atom_distance(substitute_atom(clause.head, t1), substitute_atom(clause.head, t2))
    b = max(atom_distance(substitute_atom(x, t1), substitute_atom(x, t2)) for x in clause.body)
    return h, b


def test_body_subterm_clause_can_expand():
    # body-subterm hypothesis holds, yet the head moves further than any body atom
    prog = parse_program("p(X,f(X)) :- q(f(X)).")
    assert validate_body_subterm_property(prog)[0]
    h, b = _head_body_gap(prog.clauses[0], {"X": A}, {"X": App("b")})
    assert h > b
    assert not is_nonexpanding(prog.clauses[0])


@pytest.mark.parametrize(
    "text,expected",
    [
        ("p(f(X)) :- p(X).", True),
        ("p(X) :- q(X).", True),
        ("p(X,Y) :- q(X).", False),
        ("p(X) :- q(f(X)).", False),
        ("s(X,b) :- p(X).", True),
        ("v(h(X,Y)) :- s(X,Y).", True),
        ("p(a) :- q(b).", True),
    ],
)
def test_is_nonexpanding_examples(text, expected):
    assert is_nonexpanding(parse_program(text).clauses[0]) is expected


@settings(max_examples=300)
@given(st.integers(0, 10 ** 9))
def test_nonexpanding_clauses_obey_lipschitz_law(seed):
    rng = random.Random(seed)
    clause = random_body_subterm_clause(rng)
    names = sorted(variables(clause.head) | set().union(*(variables(b) for b in clause.body)))
    t1 = random_ground_substitution(rng, names)
    t2 = random_ground_substitution(rng, names)
    h, b = _head_body_gap(clause, t1, t2)
    if is_nonexpanding(clause):
        assert h <= b


@settings(max_examples=300)
@given(st.integers(0, 10 ** 9))
def test_nonexpanding_is_exact(seed):
    # when the syntactic test fails, moving one head variable exhibits a violation
    clause = random_body_subterm_clause(random.Random(seed))
    if is_nonexpanding(clause):
        return
    names = sorted(variables(clause.head) | set().union(*(variables(b) for b in clause.body)))
    base = {x: A for x in names}
    gaps = [_head_body_gap(clause, base, {**base, x: App("b")}) for x in sorted(variables(clause.head))]
    assert any(h > b for h, b in gaps)
