"""Indexed program families, their set-theoretic limits, and limits of models.

A family is a program text in which ``@k`` may appear as an ``iter`` count.
Instantiating at ``k = 1, 2, ...`` gives a sequence of Horn programs whose
lower and upper limits are computed symbolically from the count expressions
and cross-checked on a finite window.  Least models of the instances form a
sequence of finite atom sets, compared with the Hausdorff lift of the atom
distance.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from math import lcm
from typing import Optional

from .cauchy import ConvergedUpTo, Diverged, Unknown, Verdict, settle
from .horn import (
    Clause,
    Interpretation,
    Program,
    least_model,
    satisfies,
    validate_body_subterm_property,
)
from .syntax import Signature, index_exprs, instantiate_atom, parse_clauses
from .terms import ONE, ZERO, Atom, Distance, atom_depth, atom_distance

__all__ = [
    "ProgramFamily",
    "ProgramLimit",
    "ModelSequence",
    "LimitClass",
    "LimitModelApprox",
    "TheoremReport",
    "parse_family",
    "family_instantiate",
    "instantiate_clause",
    "program_limit",
    "model_distance",
    "model_sequence",
    "check_model_cauchy",
    "limit_model",
    "verify_limit_theorem",
]


@dataclass(frozen=True)
class ProgramFamily:
    template_clauses: tuple
    signature: Signature = field(default_factory=Signature, compare=False)

    def indexed(self) -> list:
        return [c for c in self.template_clauses if _clause_exprs(c)]

    def index_free(self) -> list:
        return [c for c in self.template_clauses if not _clause_exprs(c)]


def _clause_exprs(c: Clause) -> list:
    out = []
    for a in (c.head,) + c.body:
        out.extend(index_exprs(a))
    return out


def parse_family(text: str) -> ProgramFamily:
    sig = Signature()
    clauses = tuple(Clause(h, b) for h, b, _ in parse_clauses(text, sig, family=True))
    return ProgramFamily(clauses, sig)


def instantiate_clause(c: Clause, k: int) -> Clause:
    return Clause(instantiate_atom(c.head, k), tuple(instantiate_atom(b, k) for b in c.body))


def family_instantiate(family: ProgramFamily, k: int) -> Program:
    if k < 1:
        raise ValueError("family index starts at 1")
    seen = {}
    for c in family.template_clauses:
        seen.setdefault(instantiate_clause(c, k), None)
    return Program.of(seen, family.signature)


@dataclass(frozen=True)
class ProgramLimit:
    liminf: Program
    limsup: Program
    verdict: Verdict
    diagnostics: tuple = ()

    @property
    def exists(self) -> bool:
        return isinstance(self.verdict, ConvergedUpTo)

    def describe(self) -> str:
        v = self.verdict
        if isinstance(v, ConvergedUpTo):
            return f"ConvergedUpTo(H={v.precision}, K={v.witness})"
        return str(v)


def _ordered(clauses) -> Program:
    return Program.of(dict.fromkeys(clauses))


def program_limit(family: ProgramFamily, horizon: int) -> ProgramLimit:
    """Lower/upper limits of the instance sequence.

    Index-free clauses belong to both limits.  A clause with an injective
    count (no ``mod``) yields pairwise distinct instances and belongs to
    neither.  Periodic clauses contribute, over one common period, the
    instances present at every residue (lower limit) or at some residue
    (upper limit).  The window ``[1, horizon]`` is used as a cross-check.
    """
    if horizon < 4:
        raise ValueError("horizon must be >= 4")
    static = [instantiate_clause(c, 1) for c in family.index_free()]
    periodic = [c for c in family.indexed() if not any(e.injective for e in _clause_exprs(c))]
    period = lcm(*(e.period for c in periodic for e in _clause_exprs(c))) if periodic else 1
    residues = [{instantiate_clause(c, r) for c in periodic} for r in range(1, period + 1)]
    always = set.intersection(*residues) if residues else set()
    sometimes = set.union(*residues) if residues else set()
    seen_order = static + [instantiate_clause(c, r) for r in range(1, period + 1) for c in periodic]
    liminf = [c for c in dict.fromkeys(seen_order) if c in set(static) | always]
    limsup = [c for c in dict.fromkeys(seen_order) if c in set(static) | sometimes]

    window = [set(family_instantiate(family, k).clauses) for k in range(1, horizon + 1)]
    half = horizon // 2
    win_inf = set().union(*(set.intersection(*window[i:]) for i in range(half)))
    win_sup = set().union(*window[:half]) & set().union(*window[half:])

    diagnostics = []
    if win_inf != set(liminf):
        diagnostics.append(
            "lower limit: symbolic and windowed disagree on "
            + ", ".join(sorted(str(c) for c in win_inf ^ set(liminf)))
        )
    if win_sup != set(limsup):
        diagnostics.append(
            "upper limit: symbolic and windowed disagree on "
            + ", ".join(sorted(str(c) for c in win_sup ^ set(limsup)))
        )
    if diagnostics:
        verdict = Unknown(horizon, "; ".join(diagnostics))
    elif set(liminf) == set(limsup):
        first = next(i for i in range(horizon) if set(liminf) <= set.intersection(*window[i:]))
        verdict = ConvergedUpTo(horizon, first + 1)
    else:
        extra = tuple(c for c in limsup if c not in set(liminf))
        verdict = Diverged(horizon, extra)
    return ProgramLimit(_ordered(liminf), _ordered(limsup), verdict, tuple(diagnostics))


def _directed(a_atoms, b_atoms) -> Distance:
    worst = ZERO
    for a in a_atoms:
        if a in b_atoms:
            continue
        best = min((atom_distance(a, b) for b in b_atoms), default=ONE)
        worst = max(worst, best)
        if worst == ONE:
            break
    return worst


def model_distance(a, b) -> Distance:
    """Hausdorff distance of two finite atom sets under the atom distance.

    ρ(∅, ∅) = 0 and ρ(∅, B) = 1 for non-empty B.
    """
    a = _atoms(a)
    b = _atoms(b)
    return max(_directed(a, b), _directed(b, a))


def _atoms(x) -> frozenset:
    return x.atoms if isinstance(x, Interpretation) else frozenset(x)


@dataclass(frozen=True)
class ModelSequence:
    models: tuple  # models[k-1] is M_k
    depth_bound: int
    step_bound: int
    warnings: tuple = ()  # (k, message) pairs

    @property
    def horizon(self) -> int:
        return len(self.models)

    def __getitem__(self, k: int) -> Interpretation:
        if k < 1:
            raise IndexError(k)
        return self.models[k - 1]


def model_sequence(family: ProgramFamily, horizon: int, depth_bound: int, step_bound: int) -> ModelSequence:
    models = []
    warnings = []
    for k in range(1, horizon + 1):
        prog = family_instantiate(family, k)
        ok, bad = validate_body_subterm_property(prog)
        if not ok:
            warnings.append((k, "body-subterm hypothesis fails for " + " ".join(str(c) for c in bad)))
        model, fixpoint = least_model(prog, depth_bound, step_bound)
        if not fixpoint:
            warnings.append((k, f"no fixpoint within {step_bound} steps"))
        models.append(model)
    return ModelSequence(tuple(models), depth_bound, step_bound, tuple(warnings))


def check_model_cauchy(seq: ModelSequence, m: int) -> Verdict:
    return settle(seq.models, m, dist=model_distance, start=1)


@dataclass(frozen=True)
class LimitClass:
    """Chains whose final atoms lie within ``1/m`` of each other."""

    representative: Atom
    chains: tuple  # each chain is a tuple of atoms (p_start, ..., p_H)
    start: int  # index of the first atom in every chain


@dataclass(frozen=True)
class LimitModelApprox:
    classes: tuple
    precision: int
    witness: Optional[int]
    diagnostic: str = ""

    @property
    def representatives(self) -> frozenset:
        return frozenset(c.representative for c in self.classes)


def _nearest(target: Atom, pool) -> Atom:
    return min(pool, key=lambda b: (atom_distance(target, b), str(b)))


def limit_model(seq: ModelSequence, m: int) -> LimitModelApprox:
    """Greedy chains ``p_k ∈ M_k`` built backwards from ``M_H``.

    A chain is kept when its adjacent distances from the Cauchy witness on
    are below ``1/m``.  Kept chains are grouped by the ``1/m``-ball of their
    final atom (an equivalence relation in an ultrametric); each group is
    represented by its deepest final atom, ties broken lexicographically.
    """
    verdict = check_model_cauchy(seq, m)
    if not isinstance(verdict, ConvergedUpTo):
        return LimitModelApprox((), m, None, f"model sequence not certified Cauchy: {verdict}")
    K = verdict.witness
    H = seq.horizon
    chains = []
    for a in seq[H].sorted():
        chain = [a]
        for k in range(H - 1, 0, -1):
            if not seq[k].atoms:
                break
            chain.append(_nearest(chain[-1], seq[k].sorted()))
        chain.reverse()
        start = H - len(chain) + 1
        if start > K:
            continue
        tail = chain[K - start:]
        if all(atom_distance(x, y).below(m) for x, y in zip(tail, tail[1:])):
            chains.append((start, tuple(chain)))
    groups = []
    for start, chain in chains:
        for g in groups:
            if atom_distance(g[0][1][-1], chain[-1]).below(m):
                g.append((start, chain))
                break
        else:
            groups.append([(start, chain)])
    classes = []
    for g in groups:
        finals = [c[-1] for _, c in g]
        rep = min(finals, key=lambda a: (-atom_depth(a), str(a)))
        classes.append(LimitClass(rep, tuple(c for _, c in g), max(s for s, _ in g)))
    classes.sort(key=lambda c: str(c.representative))
    diag = "" if classes else "no tail-stable chain found"
    return LimitModelApprox(tuple(classes), m, K, diag)


@dataclass
class TheoremReport:
    status: str  # PASS, FAILED or HYPOTHESIS_FAILED
    items: list = field(default_factory=list)  # (name, ok, detail)
    culprit: str = ""
    limit: Optional[ProgramLimit] = None
    sequence: Optional[ModelSequence] = None
    approx: Optional[LimitModelApprox] = None
    adjacent: list = field(default_factory=list)  # ρ(M_k, M_{k+1}), k = 1..H-1
    trace: list = field(default_factory=list)  # ρ(M_k, limit representatives), k = 1..H

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def render(self) -> str:
        lines = [f"theorem check: {self.status}"]
        if self.culprit:
            lines.append(f"culprit: {self.culprit}")
        for name, ok, detail in self.items:
            lines.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        if self.approx is not None and self.approx.classes:
            lines.append("limit representatives:")
            lines.extend(f"  {a}" for a in sorted(map(str, self.approx.representatives)))
        return "\n".join(lines) + "\n"

    def csv_rows(self) -> list:
        rows = []
        for k in range(1, len(self.trace) + 1):
            adj = str(self.adjacent[k - 1]) if k - 1 < len(self.adjacent) else ""
            rows.append((k, adj, str(self.trace[k - 1])))
        return rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("k", "rho_adjacent", "rho_limit"))
        w.writerows(self.csv_rows())
        return buf.getvalue()


def verify_limit_theorem(
    family: ProgramFamily, horizon: int, depth_bound: int, step_bound: int, m: int
) -> TheoremReport:
    """Finite-precision check that the limit of least models models the limit program.

    Four items: the program limit exists; the least models form a Cauchy
    sequence at ``1/m``; ρ(M_k, limit) is non-increasing and ends below
    ``1/m``; the limit set (representatives plus atoms common to the tail)
    is a model of the limit program.
    """
    if m > depth_bound - 2:
        raise ValueError(f"precision {m} exceeds depth_bound - 2 = {depth_bound - 2}")
    report = TheoremReport("PASS")
    for k in range(1, horizon + 1):
        ok, bad = validate_body_subterm_property(family_instantiate(family, k))
        if not ok:
            report.status = "HYPOTHESIS_FAILED"
            report.culprit = f"k={k}: body term missing from head in {bad[0]}"
            return report

    lim = program_limit(family, horizon)
    report.limit = lim
    report.items.append(("program limit", lim.exists, lim.describe()))

    seq = model_sequence(family, horizon, depth_bound, step_bound)
    report.sequence = seq
    report.adjacent = [model_distance(seq[k], seq[k + 1]) for k in range(1, horizon)]
    cauchy = check_model_cauchy(seq, m)
    report.items.append(("models Cauchy", isinstance(cauchy, ConvergedUpTo), str(cauchy)))

    approx = limit_model(seq, m)
    report.approx = approx
    reps = approx.representatives
    report.trace = [model_distance(seq[k], reps) for k in range(1, horizon + 1)]
    monotone = all(b <= a for a, b in zip(report.trace, report.trace[1:]))
    settled = report.trace[-1].below(m)
    report.items.append(
        (
            "distance to limit",
            monotone and settled,
            " ".join(map(str, report.trace)) + ("" if monotone else " (increases)"),
        )
    )

    if isinstance(cauchy, ConvergedUpTo) and lim.exists:
        common = frozenset.intersection(*(seq[k].atoms for k in range(cauchy.witness, horizon + 1)))
        limit_set = Interpretation(reps | common, depth_bound)
        ok, cex = satisfies(limit_set, lim.liminf)
        detail = "limit set models the limit program" if ok else f"{cex[0]} fails under {cex[1]}: missing {cex[2]}"
        report.items.append(("limit is a model", ok, detail))
    else:
        report.items.append(("limit is a model", False, "skipped: no limit to check"))

    failed = [name for name, ok, _ in report.items if not ok]
    if failed:
        report.status = "FAILED"
        report.culprit = failed[0]
    return report
