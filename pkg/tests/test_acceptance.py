"""The eight acceptance criteria, one test each, at the stated tolerances."""

import io
import random
import re
import time
from fractions import Fraction
from itertools import product
from pathlib import Path

import numpy as np

from convergent.cli import main
from convergent.cauchy import make_fix
from convergent.gen import (
    all_terms,
    random_body_subterm_clause,
    random_family,
    random_ground_substitution,
    random_ground_term,
    random_small_program,
    random_term,
)
from convergent.horn import Program, least_model, validate_body_subterm_property
from convergent.limits import limit_model, model_distance, model_sequence, parse_family, verify_limit_theorem
from convergent.terms import (
    App,
    Distance,
    ZERO,
    apply_substitution,
    atom_distance,
    depth,
    distance,
    iterate,
    least_var_depth,
    same_to_depth,
    substitute_atom,
    variables,
)
from oracles import brute_force_least_model, exp_series, terms_upto

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"
SIG = {"a": 0, "b": 0, "f": 1, "g": 2}


def cli(*argv):
    out = io.StringIO()
    return main(list(argv), out), out.getvalue()


def test_1_metric_suite(verdict):
    t0 = time.perf_counter()
    ts = terms_upto(SIG, 3)
    n = len(ts)
    D = [[distance(s, t) for t in ts] for s in ts]
    bad = 0
    for i, j in product(range(n), repeat=2):
        d = D[i][j]
        bad += not (d.is_zero or (isinstance(d.m, int) and d.m >= 1))
        bad += d != D[j][i]
        bad += d.is_zero != (i == j)
        for m in range(1, 5):
            bad += same_to_depth(ts[i], ts[j], m) != (d.is_zero or d.m >= m + 1)
    big = 10 ** 6
    K = np.array([[big if d.is_zero else d.m for d in row] for row in D])
    for i in range(n):
        bad += int((K[i] < np.minimum(K[i][:, None], K).max(axis=0)).sum())
    for i, t in enumerate(ts):
        ball = [j for j in range(n) if D[i][j].below(depth(t))]
        bad += ball != [i]
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 10
    verdict("1 metric suite", ok, f"{n} terms, {bad} violations, {elapsed:.2f}s")
    assert ok


def _template_with_x(rng):
    while True:
        t = random_term(rng, SIG, ["X"], 5)
        if least_var_depth(t, "X") is not None:
            return t


def test_2_substitution_law(verdict):
    rng = random.Random(2)
    bad = 0
    for _ in range(1000):
        t = _template_with_x(rng)
        r1 = random_ground_term(rng, SIG, 5)
        r2 = random_ground_term(rng, SIG, 5)
        while r2 == r1:
            r2 = random_ground_term(rng, SIG, 5)
        m, m2 = least_var_depth(t, "X"), distance(r1, r2).m
        got = distance(apply_substitution(t, {"X": r1}), apply_substitution(t, {"X": r2}))
        bad += got != Distance(m + m2)
    verdict("2 substitution law", bad == 0, f"1000 triples, {bad} violations")
    assert bad == 0


def test_3_fixed_point_term(verdict):
    code, out = cli("fix-check")
    lines = out.splitlines()
    wits = {int(m): int(k) for m, k in re.findall(r"m=(\d+) H=\d+ equivalent .*K=(\d+)", out)}
    cli_ok = code == 0 and sorted(wits) == [1, 2, 4, 8, 16, 32] and all(k <= m for m, k in wits.items())
    fix = make_fix("f", App("a"))
    bad = sum(
        distance(fix[k], fix[j]) != (ZERO if k == j else Distance(min(k, j) + 2))
        for k in range(17)
        for j in range(17)
    )
    ok = cli_ok and bad == 0 and len(lines) == 6
    verdict("3 fixed-point term", ok, f"witnesses {wits}, {bad} bad approximant distances")
    assert ok


def test_4_example_end_to_end(verdict):
    t0 = time.perf_counter()
    fam = parse_family((PROGRAMS / "shift.lpf").read_text())
    code, out = cli("family", "limit", str(PROGRAMS / "shift.lpf"), "--horizon", "6")
    clauses = [ln for ln in out.splitlines() if not ln.startswith("%")]
    a = code == 0 and clauses == ["p(f(X)) :- p(X)."]
    seq = model_sequence(fam, 6, 8, 100)
    b = all(model_distance(seq[k], seq[k + 1]) == Distance(k + 2) for k in range(1, 5))
    reps = limit_model(seq, 4).representatives
    c = [str(r) for r in reps] == [f"p({iterate('f', 7, App('a'))})"]
    report = verify_limit_theorem(fam, 6, 8, 100, 4)
    d = report.passed and len(report.items) == 4 and all(ok for _, ok, _ in report.items)
    elapsed = time.perf_counter() - t0
    ok = a and b and c and d and elapsed < 5
    verdict("4 worked example end to end", ok, f"(a)={a} (b)={b} (c)={c} (d)={d}, {elapsed:.2f}s")
    assert ok


def test_5_lipschitz_clause_property(verdict):
    # range-restricted clauses only: head-only variables would break the law trivially
    rng = random.Random(5)
    bad, first = 0, None
    for _ in range(500):
        clause = random_body_subterm_clause(rng, range_restricted=True)
        assert validate_body_subterm_property(Program.of([clause]))[0]
        names = sorted(variables(clause.head) | set().union(*(variables(x) for x in clause.body)))
        t1 = random_ground_substitution(rng, names)
        t2 = random_ground_substitution(rng, names)
        h = atom_distance(substitute_atom(clause.head, t1), substitute_atom(clause.head, t2))
        b = max(atom_distance(substitute_atom(x, t1), substitute_atom(x, t2)) for x in clause.body)
        if h > b:
            bad += 1
            first = first or f"{clause} head {h} > body {b}"
    detail = f"500 pairs, {bad} violations" + (f"; e.g. {first}" if first else "")
    verdict("5 Lipschitz clause property", bad == 0, detail)
    assert bad == 0, detail


def test_6_leastness_oracle(verdict):
    rng = random.Random(6)
    bad = sizes = 0
    for _ in range(100):
        prog, bound = random_small_program(rng, max_atoms=12)
        universe = all_terms(dict(prog.signature.functions), bound)
        sizes = max(sizes, sum(len(universe) ** a for a in prog.signature.predicates.values()))
        model, fix = least_model(prog, bound, 100)
        bad += not fix or model.atoms != brute_force_least_model(prog, bound, universe, prog.signature.predicates)
    verdict("6 leastness oracle", bad == 0, f"100 programs (largest base {sizes} atoms), {bad} mismatches")
    assert bad == 0


def test_7_randomized_theorem(verdict):
    rng = random.Random(7)
    failures = []
    for i in range(50):
        fam = random_family(rng)
        report = verify_limit_theorem(fam, 8, 10, 100, 4)
        if not report.passed:
            failures.append((i, report.culprit))
    ok = not failures
    verdict("7 randomized theorem check", ok, f"50 families, {50 - len(failures)} PASS {failures[:3]}")
    assert ok


def test_8_exp(verdict):
    code, out = cli("exp", "1", "--precision", "1000000")
    value = Fraction(out.splitlines()[0])
    gap = abs(value - exp_series(Fraction(1), 30))
    code0, out0 = cli("exp", "0")
    ok = code == 0 and gap < Fraction(1, 10 ** 6) and code0 == 0 and out0.splitlines()[0] == "1/1"
    verdict("8 exp", ok, f"|exp 1 - series| = {float(gap):.3e}, exp 0 = {out0.splitlines()[0]}")
    assert ok
