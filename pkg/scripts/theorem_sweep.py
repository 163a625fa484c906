"""Randomized sweep of the limit theorem over generated families.

Families come from ``convergent.gen.random_family``; see its module docstring
for the templates.  Prints a per-family line and the overall pass rate.

    python3 scripts/theorem_sweep.py --samples 200 --seed 0
"""

import argparse
import random
from collections import Counter

from convergent.gen import random_family
from convergent.limits import verify_limit_theorem


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--depth", type=int, default=10)
    ap.add_argument("--horizon", type=int, default=8)
    ap.add_argument("--precision", type=int, default=4)
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    tally = Counter()
    for i in range(args.samples):
        fam = random_family(rng)
        report = verify_limit_theorem(fam, args.horizon, args.depth, 100, args.precision)
        tally[report.status] += 1
        if args.verbose or not report.passed:
            rules = "; ".join(str(c) for c in fam.template_clauses)
            print(f"[{i:3}] {report.status:<8} {report.culprit or ''}  {rules}")
    print(f"{tally['PASS']}/{args.samples} PASS  {dict(tally)}")


if __name__ == "__main__":
    main()
