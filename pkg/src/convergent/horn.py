"""Bottom-up Horn clause engine over depth-bounded Herbrand interpretations.

Interpretations are finite sets of ground atoms whose arguments all have depth
at most ``depth_bound``.  The immediate-consequence operator drops derived
heads that exceed the bound and counts them; :func:`satisfies` treats such
heads as vacuously satisfied, so truncation never manufactures a
counterexample.

Ground instances are found by matching clause bodies against the
interpretation rather than by enumerating the whole universe.  Variables that
occur only in a clause head still range over the depth-bounded universe.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from .syntax import Signature, parse_clauses
from .terms import (
    App,
    Atom,
    Substitution,
    Term,
    Var,
    atom_depth,
    least_var_depth,
    substitute_atom,
    subterms,
    variables,
)

__all__ = [
    "Clause",
    "Program",
    "Interpretation",
    "parse_program",
    "herbrand_universe",
    "match_atom",
    "tp_step",
    "least_model",
    "satisfies",
    "validate_body_subterm_property",
    "is_nonexpanding",
]


@dataclass(frozen=True)
class Clause:
    head: Atom
    body: tuple = ()

    @property
    def is_fact(self) -> bool:
        return not self.body

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(str(b) for b in self.body)}."


@dataclass(frozen=True)
class Program:
    clauses: tuple = ()
    signature: Signature = field(default_factory=Signature, compare=False, hash=False)

    @classmethod
    def of(cls, clauses: Iterable[Clause], signature: Optional[Signature] = None) -> "Program":
        clauses = tuple(clauses)
        sig = Signature() if signature is None else Signature(dict(signature.functions), dict(signature.predicates))
        for c in clauses:
            for a in (c.head,) + c.body:
                _register(sig, a)
        return cls(clauses, sig)

    def __iter__(self):
        return iter(self.clauses)

    def __len__(self):
        return len(self.clauses)

    def __str__(self) -> str:
        return "\n".join(str(c) for c in self.clauses)


def _register(sig: Signature, a: Atom):
    sig.add_predicate(a.pred, len(a.args))
    for arg in a.args:
        for t in subterms(arg):
            if isinstance(t, App):
                sig.add_function(t.head, len(t.args))


@dataclass(frozen=True)
class Interpretation:
    atoms: frozenset = frozenset()
    depth_bound: int = 0
    overflow: int = field(default=0, compare=False)

    def __post_init__(self):
        for a in self.atoms:
            d = atom_depth(a)
            if d > self.depth_bound:
                raise ValueError(f"{a} has depth {d} > bound {self.depth_bound}")

    def __contains__(self, a: Atom) -> bool:
        return a in self.atoms

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self):
        return len(self.atoms)

    def sorted(self) -> list:
        return sorted(self.atoms, key=str)

    def serialize(self) -> str:
        return "".join(f"{a}\n" for a in self.sorted())


def parse_program(text: str, signature: Optional[Signature] = None) -> Program:
    sig = signature if signature is not None else Signature()
    clauses = [Clause(h, b) for h, b, _ in parse_clauses(text, sig)]
    return Program(tuple(clauses), sig)


@lru_cache(maxsize=64)
def _universe(functions: tuple, depth_bound: int) -> tuple:
    constants = [App(n, ()) for n, a in functions if a == 0]
    everything = list(constants)
    newest = set(constants)  # terms of the previous depth exactly
    for _ in range(2, depth_bound + 1):
        fresh = [
            App(name, args)
            for name, arity in functions
            if arity > 0
            for args in itertools.product(everything, repeat=arity)
            if any(a in newest for a in args)
        ]
        everything.extend(fresh)
        newest = set(fresh)
    return tuple(everything)


def herbrand_universe(signature: Signature, depth_bound: int) -> tuple:
    """Ground terms of depth <= ``depth_bound``, shallowest first."""
    return _universe(tuple(sorted(signature.functions.items())), depth_bound)


def match_term(pattern: Term, ground: Term, theta: dict) -> Optional[dict]:
    if isinstance(pattern, Var):
        bound = theta.get(pattern.name)
        if bound is None:
            out = dict(theta)
            out[pattern.name] = ground
            return out
        return theta if bound == ground else None
    if not isinstance(ground, App) or pattern.head != ground.head or len(pattern.args) != len(ground.args):
        return None
    for p, g in zip(pattern.args, ground.args):
        theta = match_term(p, g, theta)
        if theta is None:
            return None
    return theta


def match_atom(pattern: Atom, ground: Atom, theta: dict) -> Optional[dict]:
    if pattern.pred != ground.pred or len(pattern.args) != len(ground.args):
        return None
    for p, g in zip(pattern.args, ground.args):
        theta = match_term(p, g, theta)
        if theta is None:
            return None
    return theta


def _index(atoms) -> dict:
    idx = {}
    for a in atoms:
        idx.setdefault((a.pred, len(a.args)), []).append(a)
    return idx


def _body_matches(body: tuple, idx: dict, theta: dict) -> Iterator[dict]:
    if not body:
        yield theta
        return
    first, rest = body[0], body[1:]
    for g in idx.get((first.pred, len(first.args)), ()):
        t2 = match_atom(first, g, theta)
        if t2 is not None:
            yield from _body_matches(rest, idx, t2)


def _instances(clause: Clause, idx: dict, universe_of) -> Iterator[dict]:
    """All ground substitutions over the clause's variables whose body lies in ``idx``."""
    head_only = sorted(variables(clause.head) - set().union(*(variables(b) for b in clause.body)))
    for theta in _body_matches(clause.body, idx, {}):
        if not head_only:
            yield theta
            continue
        pool = universe_of()
        for values in itertools.product(pool, repeat=len(head_only)):
            out = dict(theta)
            out.update(zip(head_only, values))
            yield out


def tp_step(program: Program, interp: Interpretation) -> Interpretation:
    """One application of the immediate-consequence operator."""
    bound = interp.depth_bound
    idx = _index(interp.atoms)
    sig = program.signature.merged(_signature_of(interp.atoms))
    derived = set()
    dropped = set()
    for clause in program:
        for theta in _instances(clause, idx, lambda: herbrand_universe(sig, bound)):
            h = substitute_atom(clause.head, theta)
            if atom_depth(h) > bound:
                dropped.add(h)
            else:
                derived.add(h)
    return Interpretation(frozenset(derived), bound, len(dropped))


def least_model(program: Program, depth_bound: int, step_bound: int):
    """Iterate ``tp_step`` from the empty set; returns ``(model, reached_fixpoint)``."""
    if depth_bound < 1 or step_bound < 1:
        raise ValueError("bounds must be >= 1")
    current = Interpretation(frozenset(), depth_bound)
    for _ in range(step_bound):
        nxt = tp_step(program, current)
        if nxt.atoms == current.atoms:
            return nxt, True
        current = nxt
    return current, False


def _signature_of(atoms) -> Signature:
    sig = Signature()
    for a in atoms:
        _register(sig, a)
    return sig


def satisfies(interp: Interpretation, program: Program):
    """Check the model condition; returns ``(ok, counterexample)``.

    The counterexample is ``(clause, substitution, missing_head)``.  Heads
    deeper than the interpretation's bound are exempt.
    """
    bound = interp.depth_bound
    idx = _index(interp.atoms)
    sig = program.signature.merged(_signature_of(interp.atoms))
    for clause in program:
        for theta in _instances(clause, idx, lambda: herbrand_universe(sig, bound)):
            h = substitute_atom(clause.head, theta)
            if atom_depth(h) <= bound and h not in interp.atoms:
                return False, (clause, Substitution(theta), h)
    return True, None


def validate_body_subterm_property(program: Program):
    """Every term in a body atom must occur as a subterm of a head argument.

    Returns ``(ok, offending_clauses)``.
    """
    offenders = []
    for clause in program:
        head_terms = {s for arg in clause.head.args for s in subterms(arg)}
        if any(arg not in head_terms for b in clause.body for arg in b.args):
            offenders.append(clause)
    return not offenders, offenders


def is_nonexpanding(clause: Clause) -> bool:
    """Whether ρ(head θ1, head θ2) <= max_i ρ(body_i θ1, body_i θ2) for all θ1, θ2.

    Holds exactly when every head variable occurs in the body and its
    shallowest head occurrence is no shallower than its shallowest body
    occurrence.
    """
    head = clause.head.as_app()
    for x in variables(clause.head):
        body_depths = [least_var_depth(b.as_app(), x) for b in clause.body]
        body_depths = [d for d in body_depths if d is not None]
        if not body_depths or least_var_depth(head, x) < min(body_depths):
            return False
    return True
