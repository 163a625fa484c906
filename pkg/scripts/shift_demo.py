"""Run the theorem check on the shifting-fact family and dump the distance trace.

    python3 scripts/shift_demo.py --depth 12 --horizon 10 --csv trace.csv
"""

import argparse
from pathlib import Path

from convergent.limits import parse_family, verify_limit_theorem

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", default=str(ROOT / "programs" / "shift.lpf"))
    ap.add_argument("--depth", type=int, default=8)
    ap.add_argument("--horizon", type=int, default=6)
    ap.add_argument("--precision", type=int, default=4)
    ap.add_argument("--csv")
    args = ap.parse_args()

    family = parse_family(Path(args.family).read_text())
    report = verify_limit_theorem(family, args.horizon, args.depth, 100, args.precision)
    print(report.render(), end="")
    print("k  rho(M_k,M_k+1)  rho(M_k,limit)")
    for k, adj, lim in report.csv_rows():
        print(f"{k:<3}{adj or '-':<16}{lim}")
    if args.csv:
        Path(args.csv).write_text(report.to_csv())


if __name__ == "__main__":
    main()
