"""Seeded random generators for terms, clauses, programs and families.

Used by the property tests, the acceptance suite and ``scripts/``.

Theorem-check families (:func:`random_family`) have two parts: a fixed,
index-free rule set, plus one fact stream ``p(iter(f, @k, c))``.  Every rule
is drawn from these templates::

    copy      Q(X) :- P(X).
    join      Q(X) :- P1(X), P2(X).
    pair      s(X,X) :- P(X).        s(X,b) :- P(X).
    unpair    Q(X) :- s(X,X).
    wrap      u(g(X)) :- P(X).       v(h(X,Y)) :- s(X,Y).
    recurse   p(f(X)) :- p(X).       (stream predicate and function only)
    static    q(b).  r(b).  s(b,b).

``P, Q`` range over the unary predicates ``p, q, r``.  The wrap heads ``u``
and ``v`` never occur in a body, so the only recursion that nests terms is
along the stream's own function ``f``.  Therefore every atom is at most one
level deeper than the stream fact that produced it.  With ``depth_bound >=
horizon + 2`` the depth cutoff never drops an atom that has a counterpart at
the next index.  Every template satisfies the body-subterm hypothesis and is
non-expanding.
"""

from __future__ import annotations

import random
from typing import Optional

from .horn import Clause, Program
from .limits import ProgramFamily
from .syntax import IndexExpr, Iter, Signature
from .terms import App, Atom, Var, const, variables

__all__ = [
    "random_ground_term",
    "random_term",
    "random_body_subterm_clause",
    "random_ground_substitution",
    "random_small_program",
    "random_family",
    "all_terms",
]

X, Y = Var("X"), Var("Y")


def all_terms(signature: dict, max_depth: int) -> list:
    """Every ground term of depth <= ``max_depth`` (leaf depth 1)."""
    from itertools import product

    level = [const(n) for n, a in signature.items() if a == 0]
    out = list(level)
    newest = set(level)
    for _ in range(2, max_depth + 1):
        fresh = [
            App(n, args)
            for n, a in signature.items()
            if a > 0
            for args in product(out, repeat=a)
            if any(t in newest for t in args)
        ]
        out += fresh
        newest = set(fresh)
    return out


def random_ground_term(rng: random.Random, signature: dict, max_depth: int) -> App:
    consts = [n for n, a in signature.items() if a == 0]
    funcs = [(n, a) for n, a in signature.items() if a > 0]
    if max_depth <= 1 or not funcs or rng.random() < 0.3:
        return const(rng.choice(consts))
    name, arity = rng.choice(funcs)
    return App(name, tuple(random_ground_term(rng, signature, max_depth - 1) for _ in range(arity)))


def random_term(rng: random.Random, signature: dict, var_names, max_depth: int):
    """A term whose leaves are constants or variables from ``var_names``."""
    consts = [n for n, a in signature.items() if a == 0]
    funcs = [(n, a) for n, a in signature.items() if a > 0]
    if max_depth <= 1 or not funcs or rng.random() < 0.35:
        if var_names and (not consts or rng.random() < 0.6):
            return Var(rng.choice(var_names))
        return const(rng.choice(consts))
    name, arity = rng.choice(funcs)
    return App(name, tuple(random_term(rng, signature, var_names, max_depth - 1) for _ in range(arity)))


def _subterms(t):
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from _subterms(a)


def random_body_subterm_clause(
    rng: random.Random,
    signature: Optional[dict] = None,
    preds: Optional[dict] = None,
    max_depth: int = 3,
    range_restricted: bool = False,
) -> Clause:
    """A rule whose body arguments are all subterms of head arguments.

    Any such rule satisfies the body-subterm hypothesis by construction.
    Nothing else is constrained: repeated variables at different depths are
    allowed, and so are head-only variables unless ``range_restricted``.
    """
    signature = signature or {"a": 0, "b": 0, "f": 1, "g": 2}
    preds = preds or {"p": 1, "q": 1, "s": 2}
    names = ["X", "Y", "Z"]
    hp = rng.choice(sorted(preds))
    head = Atom(hp, tuple(random_term(rng, signature, names, max_depth) for _ in range(preds[hp])))
    pool = [s for arg in head.args for s in _subterms(arg)]
    body = []
    for _ in range(rng.randint(1, 3)):
        bp = rng.choice(sorted(preds))
        body.append(Atom(bp, tuple(rng.choice(pool) for _ in range(preds[bp]))))
    clause = Clause(head, tuple(body))
    if range_restricted and not variables(head) <= set().union(*(variables(b) for b in body)):
        return random_body_subterm_clause(rng, signature, preds, max_depth, range_restricted)
    return clause


def random_ground_substitution(rng: random.Random, names, signature=None, max_depth: int = 4) -> dict:
    signature = signature or {"a": 0, "b": 0, "f": 1, "g": 2}
    return {x: random_ground_term(rng, signature, max_depth) for x in names}


def random_small_program(rng: random.Random, max_atoms: int = 12):
    """Return ``(program, depth_bound)`` with a ground base of <= ``max_atoms`` atoms."""
    while True:
        funcs = {c: 0 for c in rng.sample(["a", "b", "c"], rng.randint(1, 2))}
        if rng.random() < 0.7:
            funcs["f"] = 1
        preds = {"p": 1}
        if rng.random() < 0.7:
            preds["q"] = 1
        if rng.random() < 0.4:
            preds["r"] = 0
        depth_bound = rng.randint(1, 3)
        n_terms = len(all_terms(funcs, depth_bound))
        base = sum(n_terms ** a for a in preds.values())
        if base <= max_atoms:
            break
    clauses = []
    for _ in range(rng.randint(1, 5)):
        hp = rng.choice(sorted(preds))
        head = Atom(hp, tuple(random_term(rng, funcs, ["X", "Y"], 2) for _ in range(preds[hp])))
        body = []
        for _ in range(rng.choice([0, 0, 1, 1, 2])):
            bp = rng.choice(sorted(preds))
            body.append(Atom(bp, tuple(random_term(rng, funcs, ["X", "Y"], 2) for _ in range(preds[bp]))))
        clauses.append(Clause(head, tuple(body)))
    sig = Signature(dict(funcs), dict(preds))
    return Program.of(clauses, sig), depth_bound


_UNARY = ("p", "q", "r")


def random_family(rng: random.Random) -> ProgramFamily:
    """Rule set drawn from the module-level templates plus one ``@k`` fact stream."""
    P = lambda name, *args: Atom(name, tuple(args))  # noqa: E731
    rules = []
    for _ in range(rng.randint(1, 5)):
        kind = rng.choice(["copy", "join", "pair", "pair_b", "unpair", "wrap_g", "wrap_h"])
        a, b, c = (rng.choice(_UNARY) for _ in range(3))
        if kind == "copy" and a != b:
            rules.append(Clause(P(b, X), (P(a, X),)))
        elif kind == "join":
            rules.append(Clause(P(c, X), (P(a, X), P(b, X))))
        elif kind == "pair":
            rules.append(Clause(P("s", X, X), (P(a, X),)))
        elif kind == "pair_b":
            rules.append(Clause(P("s", X, const("b")), (P(a, X),)))
        elif kind == "unpair":
            rules.append(Clause(P(b, X), (P("s", X, X),)))
        elif kind == "wrap_g":
            rules.append(Clause(P("u", App("g", (X,))), (P(a, X),)))
        elif kind == "wrap_h":
            rules.append(Clause(P("v", App("h", (X, Y))), (P("s", X, Y),)))
    if rng.random() < 0.4:
        rules.append(Clause(P("p", App("f", (X,))), (P("p", X),)))
    for fact in (P("q", const("b")), P("r", const("b")), P("s", const("b"), const("b"))):
        if rng.random() < 0.25:
            rules.append(Clause(fact))
    seed = const(rng.choice(["a", "b"]))
    stream = Clause(P("p", Iter("f", IndexExpr(), seed)))
    clauses = tuple(dict.fromkeys(rules + [stream]))
    sig = Signature(
        {"a": 0, "b": 0, "f": 1, "g": 1, "h": 2},
        {"p": 1, "q": 1, "r": 1, "s": 2, "u": 1, "v": 1},
    )
    return ProgramFamily(clauses, sig)
