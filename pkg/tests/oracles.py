"""Independent reference implementations used as test oracles.

None of these call into the metric or the engine under test.
"""

from fractions import Fraction
from itertools import product
from math import factorial

from convergent.terms import App, Var


def labels(t, pos=()):
    """Map each tree position to its node label (name, arity) or a variable tag."""
    if isinstance(t, Var):
        out = {pos: ("var", t.name)}
    else:
        out = {pos: (t.head, len(t.args))}
        for i, a in enumerate(t.args):
            out.update(labels(a, pos + (i,)))
    return out


def coincide_depth(s, t):
    """Greatest d such that both trees carry identical labels at every position of depth <= d.

    Depth counts nodes, root = 1.  Returns None for identical trees.
    """
    ls, lt = labels(s), labels(t)
    if ls == lt:
        return None
    bad = [len(p) + 1 for p in set(ls) | set(lt) if ls.get(p) != lt.get(p)]
    return min(bad) - 1


def reference_distance(s, t) -> Fraction:
    d = coincide_depth(s, t)
    return Fraction(0) if d is None else Fraction(1, d + 1)


def ground_instances(clause, universe, depth_bound):
    """Every ground instance of a clause over ``universe``, as (head, body) with depth <= bound."""
    from convergent.terms import atom_depth, substitute_atom, variables

    names = sorted(set().union(variables(clause.head), *(variables(b) for b in clause.body)))
    for values in product(universe, repeat=len(names)):
        theta = dict(zip(names, values))
        head = substitute_atom(clause.head, theta)
        body = [substitute_atom(b, theta) for b in clause.body]
        if atom_depth(head) > depth_bound:
            continue  # truncated heads are exempt
        if any(atom_depth(b) > depth_bound for b in body):
            continue  # a body outside the base never holds
        yield head, body


def brute_force_least_model(program, depth_bound, universe, predicates):
    """Intersection of every subset of the ground base that is closed under the clauses."""
    import numpy as np

    base = [
        _atom(p, args) for p, n in sorted(predicates.items()) for args in product(universe, repeat=n)
    ]
    bit = {a: 1 << i for i, a in enumerate(base)}
    n = len(base)
    masks = np.arange(1 << n, dtype=np.int64)
    is_model = np.ones(1 << n, dtype=bool)
    for clause in program:
        for head, body in ground_instances(clause, universe, depth_bound):
            b = sum(bit[x] for x in set(body))
            h = bit[head]
            is_model &= ~(((masks & b) == b) & ((masks & h) == 0))
    models = masks[is_model]
    least = int(np.bitwise_and.reduce(models)) if len(models) else (1 << n) - 1
    return frozenset(a for a in base if least & bit[a])


def _atom(pred, args):
    from convergent.terms import Atom

    return Atom(pred, tuple(args))


def exp_series(x: Fraction, terms: int) -> Fraction:
    """sum_{i < terms} x^i / i! straight from the closed form."""
    return sum((x ** i / factorial(i) for i in range(terms)), Fraction(0))


def terms_upto(signature, max_depth):
    """Enumerate ground terms by brute force over shapes (independent of the package's enumerator)."""
    consts = [App(n) for n, a in signature.items() if a == 0]
    by_depth = {1: consts}
    for d in range(2, max_depth + 1):
        smaller = [t for k in range(1, d) for t in by_depth[k]]
        level = []
        for name, a in signature.items():
            if a == 0:
                continue
            for args in product(smaller, repeat=a):
                if max(_depth(x) for x in args) == d - 1:
                    level.append(App(name, args))
        by_depth[d] = level
    return [t for d in sorted(by_depth) for t in by_depth[d]]


def _depth(t):
    return 1 + max((_depth(a) for a in t.args), default=0)
