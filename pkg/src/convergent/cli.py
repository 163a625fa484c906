"""Command-line front end.

Exit codes: 0 success, 2 parse/file/usage error, 3 step bound exhausted
before a fixpoint, 4 body-subterm hypothesis fails, 5 a convergence or
verification check fails.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .cauchy import (
    ConvergedUpTo,
    InfTerm,
    NotCauchy,
    check_cauchy,
    equivalent,
    make_fix,
    map_continuous,
    stream_from_file,
    wrap,
)
from .horn import least_model, parse_program
from .limits import (
    check_model_cauchy,
    instantiate_clause,
    model_distance,
    model_sequence,
    parse_family,
    program_limit,
    verify_limit_theorem,
)
from .ring import constant_real, eval_real, exp_real, parse_rational, render_rational
from .syntax import ParseError, Signature, has_index, parse_term
from .terms import distance

EXIT_OK, EXIT_USAGE, EXIT_STEPS, EXIT_HYPOTHESIS, EXIT_FAILED = 0, 2, 3, 4, 5

FIX_PRECISIONS = (1, 2, 4, 8, 16, 32)


@dataclass
class RunConfig:
    command: str
    paths: list = field(default_factory=list)
    depth_bound: int = 8
    step_bound: int = 100
    horizon: int = 6
    precision: int = 4
    csv_path: Optional[str] = None

    def check_limit_bounds(self):
        if self.precision > self.depth_bound - 2:
            raise UsageError(
                f"precision {self.precision} must be <= depth - 2 = {self.depth_bound - 2}"
            )


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def cmd_dist(args, out) -> int:
    sig = Signature()
    s = parse_term(args.term1, sig)
    t = parse_term(args.term2, sig)
    print(distance(s, t), file=out)
    return EXIT_OK


def cmd_model(args, out) -> int:
    program = parse_program(_read(args.program))
    model, fixpoint = least_model(program, args.depth, args.steps)
    out.write(model.serialize())
    if fixpoint:
        print(f"% fixpoint reached ({len(model)} atoms, {model.overflow} heads beyond depth)", file=sys.stderr)
        return EXIT_OK
    print(f"% step bound {args.steps} exhausted before a fixpoint", file=sys.stderr)
    return EXIT_STEPS


def _hypothesis_warnings(seq) -> list:
    return [(k, msg) for k, msg in seq.warnings if msg.startswith("body-subterm")]


def cmd_family(args, out) -> int:
    cfg = RunConfig(
        f"family {args.action}", [args.family], args.depth, args.steps, args.horizon, args.precision, args.csv
    )
    family = parse_family(_read(args.family))
    if args.action == "limit":
        lim = program_limit(family, cfg.horizon)
        if lim.exists:
            out.write("".join(f"{c}\n" for c in lim.liminf))
        else:
            print("% lower limit", file=out)
            out.write("".join(f"{c}\n" for c in lim.liminf))
            print("% upper limit", file=out)
            out.write("".join(f"{c}\n" for c in lim.limsup))
        print(f"% {lim.describe()}", file=out)
        return EXIT_OK if lim.exists else EXIT_FAILED

    cfg.check_limit_bounds()
    if args.action == "models":
        seq = model_sequence(family, cfg.horizon, cfg.depth_bound, cfg.step_bound)
        for k in range(1, cfg.horizon + 1):
            print(f"% M_{k}", file=out)
            out.write(seq[k].serialize())
        rows = []
        for k in range(1, cfg.horizon):
            d = model_distance(seq[k], seq[k + 1])
            rows.append((k, str(d)))
            print(f"% rho(M_{k}, M_{k + 1}) = {d}", file=out)
        for k, msg in seq.warnings:
            print(f"% warning k={k}: {msg}", file=out)
        verdict = check_model_cauchy(seq, cfg.precision)
        print(f"% {verdict}", file=out)
        if cfg.csv_path:
            lines = ["k,rho_adjacent"] + [f"{k},{d}" for k, d in rows]
            Path(cfg.csv_path).write_text("\n".join(lines) + "\n", encoding="utf-8")
        if _hypothesis_warnings(seq):
            return EXIT_HYPOTHESIS
        if any("fixpoint" in msg for _, msg in seq.warnings):
            return EXIT_STEPS
        return EXIT_OK if isinstance(verdict, ConvergedUpTo) else EXIT_FAILED

    report = verify_limit_theorem(family, cfg.horizon, cfg.depth_bound, cfg.step_bound, cfg.precision)
    out.write(report.render())
    if cfg.csv_path:
        Path(cfg.csv_path).write_text(report.to_csv(), encoding="utf-8")
    if report.status == "HYPOTHESIS_FAILED":
        return EXIT_HYPOTHESIS
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_fix_check(args, out) -> int:
    sig = Signature()
    seed = parse_term(args.seed, sig)
    sig.add_function(args.f, 1)
    fix = make_fix(args.f, seed)
    image = map_continuous(wrap(args.f), fix)
    ok = True
    for m in args.precision or FIX_PRECISIONS:
        try:
            v = equivalent(fix, image, m, 4 * m)
        except NotCauchy as exc:
            v = exc.verdict
        good = isinstance(v, ConvergedUpTo) and v.witness <= m
        ok &= good
        status = "equivalent" if good else "NOT equivalent"
        print(f"m={m} H={4 * m} {status} {v}", file=out)
    return EXIT_OK if ok else EXIT_FAILED


def stream_from_descriptor(desc: str) -> InfTerm:
    """``fix(f,a)``, ``file:<path>`` or ``family-atom:<path>[#n]``.

    The family form streams the ``n``-th index-dependent fact of the family
    (default the first) at ``k = 1, 2, ...``, read as a tree rooted at the
    predicate symbol.
    """
    if desc.startswith("file:"):
        return stream_from_file(desc[5:])
    if desc.startswith("family-atom:"):
        spec = desc[len("family-atom:"):]
        path, _, which = spec.partition("#")
        family = parse_family(_read(path))
        facts = [c for c in family.template_clauses if c.is_fact and has_index(c.head)]
        n = int(which) if which else 0
        if n >= len(facts):
            raise UsageError(f"{path} has {len(facts)} index-dependent facts")
        template = facts[n]

        def gen(k):
            return instantiate_clause(template, k + 1).head.as_app()

        return InfTerm(gen, name=f"family-atom:{spec}")
    term = parse_term(desc)
    if getattr(term, "head", None) == "fix" and len(term.args) == 2 and not term.args[0].args:
        return make_fix(term.args[0].head, term.args[1])
    raise UsageError(f"unknown stream descriptor {desc!r}")


def cmd_cauchy(args, out) -> int:
    stream = stream_from_descriptor(args.stream)
    horizon = args.horizon
    if stream.length is not None:
        horizon = min(horizon, stream.length - 1)
    v = check_cauchy(stream, args.precision, horizon)
    print(f"{stream}: {v}", file=out)
    if isinstance(v, ConvergedUpTo):
        print(stream[v.witness], file=out)
        return EXIT_OK
    return EXIT_FAILED


def cmd_exp(args, out) -> int:
    try:
        x = parse_rational(args.x)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    value, verdict = eval_real(exp_real(constant_real(x)), args.precision, args.horizon)
    if value is None:
        print(f"% {verdict}", file=out)
        return EXIT_FAILED
    print(render_rational(value), file=out)
    print(f"% witness K={verdict.witness} precision 1/{args.precision}", file=out)
    return EXIT_OK


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="convergent", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="distance between two finite terms")
    p.add_argument("term1")
    p.add_argument("term2")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("model", help="depth-bounded least model of a .lp program")
    p.add_argument("program")
    p.add_argument("--depth", type=_positive, default=8)
    p.add_argument("--steps", type=_positive, default=100)
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("family", help="limits of an indexed .lpf family")
    p.add_argument("action", choices=("limit", "models", "verify"))
    p.add_argument("family")
    p.add_argument("--depth", type=_positive, default=8)
    p.add_argument("--steps", type=_positive, default=100)
    p.add_argument("--horizon", type=_positive, default=6)
    p.add_argument("--precision", type=_positive, default=4)
    p.add_argument("--csv", metavar="PATH")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("fix-check", help="check f(t) ≡ t for t = fix(f, seed)")
    p.add_argument("--f", default="f")
    p.add_argument("--seed", default="a")
    p.add_argument("--precision", type=_positive, nargs="*")
    p.set_defaults(func=cmd_fix_check)

    p = sub.add_parser("cauchy", help="finite-horizon Cauchy check of a term stream")
    p.add_argument("stream", help="fix(f,a) | file:PATH | family-atom:PATH[#n]")
    p.add_argument("--precision", type=_positive, default=4)
    p.add_argument("--horizon", type=_positive, default=20)
    p.set_defaults(func=cmd_cauchy)

    p = sub.add_parser("exp", help="exact rational approximant of e^x")
    p.add_argument("x", help="rational literal, p/q or decimal")
    p.add_argument("--precision", type=_positive, default=1000)
    p.add_argument("--horizon", type=_positive, default=30)
    p.set_defaults(func=cmd_exp)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (ParseError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())
