"""Count head-vs-body distance violations for random clauses, by clause class.

Three classes are compared over the same clause generator:
all body-subterm clauses, the range-restricted ones, and the ones
``is_nonexpanding`` accepts.  Prints counts and a few counterexamples.

    python3 scripts/lipschitz_probe.py --samples 5000
"""

import argparse
import random

from convergent.gen import random_body_subterm_clause, random_ground_substitution
from convergent.horn import is_nonexpanding
from convergent.terms import atom_distance, substitute_atom, variables


def gap(clause, t1, t2):
    h = atom_distance(substitute_atom(clause.head, t1), substitute_atom(clause.head, t2))
    b = max(atom_distance(substitute_atom(x, t1), substitute_atom(x, t2)) for x in clause.body)
    return h, b


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--show", type=int, default=3)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    seen = {"body-subterm": [0, 0], "range-restricted": [0, 0], "non-expanding": [0, 0]}
    examples = []
    for _ in range(args.samples):
        clause = random_body_subterm_clause(rng)
        head_vars = variables(clause.head)
        body_vars = set().union(*(variables(b) for b in clause.body))
        names = sorted(head_vars | body_vars)
        h, b = gap(clause, random_ground_substitution(rng, names), random_ground_substitution(rng, names))
        bad = h > b
        classes = ["body-subterm"]
        if head_vars <= body_vars:
            classes.append("range-restricted")
        if is_nonexpanding(clause):
            classes.append("non-expanding")
        for c in classes:
            seen[c][0] += 1
            seen[c][1] += bad
        if bad and head_vars <= body_vars and len(examples) < args.show:
            examples.append(f"  {clause}   head {h} > body {b}")
    for name, (n, bad) in seen.items():
        print(f"{name:<18} {bad:5} violations / {n} samples")
    if examples:
        print("range-restricted counterexamples:")
        print("\n".join(examples))


if __name__ == "__main__":
    main()
