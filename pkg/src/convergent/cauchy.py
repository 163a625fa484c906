"""Infinitary terms as streams of finite approximants.

An :class:`InfTerm` never materialises its limit.  Every question about it is
asked at an explicit precision ``m`` (meaning ``1/m``) and horizon ``H``, and
answered with a three-valued verdict, since Cauchy-ness of a black-box stream
is only semi-decidable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Mapping, Optional, Sequence, Union

from .terms import (
    App,
    Term,
    apply_substitution,
    distance,
    least_var_depth,
)

__all__ = [
    "ConvergedUpTo",
    "RefutedAt",
    "Unknown",
    "Diverged",
    "Verdict",
    "NotCauchy",
    "InfTerm",
    "LipschitzMap",
    "wrap",
    "into_template",
    "settle",
    "make_fix",
    "constant_stream",
    "check_cauchy",
    "inf_distance",
    "equivalent",
    "map_continuous",
    "subst_sequence",
    "stream_from_file",
]

TAIL_SAMPLES = 64


@dataclass(frozen=True)
class ConvergedUpTo:
    precision: int
    witness: int

    def __str__(self) -> str:
        return f"ConvergedUpTo(precision=1/{self.precision}, K={self.witness})"


@dataclass(frozen=True)
class RefutedAt:
    k: int
    j: int
    distance: object  # Distance for terms, Fraction for reals

    def __str__(self) -> str:
        return f"RefutedAt(k={self.k}, j={self.j}, distance={self.distance})"


@dataclass(frozen=True)
class Unknown:
    horizon: int
    reason: str = ""

    def __str__(self) -> str:
        extra = f": {self.reason}" if self.reason else ""
        return f"Unknown(H={self.horizon}{extra})"


@dataclass(frozen=True)
class Diverged:
    """Set-theoretic limit does not exist: lower and upper limits differ."""

    horizon: int
    difference: tuple = ()

    def __str__(self) -> str:
        return f"Diverged(H={self.horizon}, |limsup - liminf|={len(self.difference)})"


Verdict = Union[ConvergedUpTo, RefutedAt, Unknown, Diverged]


class NotCauchy(Exception):
    """A precondition Cauchy check did not come back converged."""

    def __init__(self, verdict: Verdict, which: str = ""):
        self.verdict = verdict
        self.which = which
        super().__init__(f"{which or 'stream'} not certified Cauchy: {verdict}")


def settle(
    values: Sequence,
    m: int,
    dist: Callable = distance,
    start: int = 0,
    samples: int = TAIL_SAMPLES,
    seed: int = 0,
) -> Verdict:
    """Finite-horizon Cauchy check for a sequence in an ultrametric space.

    ``values[i]`` is the element with index ``start + i``.  Under the
    ultrametric inequality adjacent pairs bound every pair, so the witness
    ``K`` is the least index past which all adjacent distances are below
    ``1/m``.  The pair ``(K, H)`` and ``samples`` random tail pairs are
    checked as well.  A witness found only in the second half of the window is
    reported as Unknown.
    """
    if m < 1:
        raise ValueError("precision m must be >= 1")
    n = len(values)
    horizon = start + n - 1
    if n < 2:
        return Unknown(horizon, "need at least two approximants")
    adjacent = [dist(values[i], values[i + 1]) for i in range(n - 1)]
    if not adjacent[-1].below(m):
        return RefutedAt(horizon - 1, horizon, adjacent[-1])
    i = n - 1
    while i > 0 and adjacent[i - 1].below(m):
        i -= 1
    rng = random.Random(seed)
    pairs = [(i, n - 1)] + [
        tuple(sorted(rng.sample(range(i, n), 2))) for _ in range(samples if n - i > 2 else 0)
    ]
    for a, b in pairs:
        d = dist(values[a], values[b])
        if not d.below(m):
            return RefutedAt(start + a, start + b, d)
    if i > (n - 1) // 2:
        return Unknown(horizon, f"settles only at K={start + i}")
    return ConvergedUpTo(m, start + i)


@dataclass(frozen=True)
class InfTerm:
    """Infinitary term given by its approximant generator ``k -> t_k``.

    ``modulus(m)`` optionally declares an index past which approximants are
    within ``1/m`` of each other.  ``verified`` is False when the stream was
    produced by a map whose continuity is unchecked.
    """

    gen: Callable[[int], Term]
    modulus: Optional[Callable[[int], int]] = None
    verified: bool = True
    name: str = ""
    length: Optional[int] = None
    _cached: Callable = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_cached", lru_cache(maxsize=4096)(self.gen))

    def __getitem__(self, k: int) -> Term:
        if k < 0 or (self.length is not None and k >= self.length):
            raise IndexError(k)
        return self._cached(k)

    def prefix(self, horizon: int) -> list:
        return [self[k] for k in range(horizon + 1)]

    def __str__(self) -> str:
        return self.name or f"InfTerm({self[0]}, {self[1]}, ...)"


def make_fix(f: str, seed: Term) -> InfTerm:
    """The stream ``f(seed), f(f(seed)), ...`` whose limit satisfies ``f(t) ≡ t``."""

    def gen(k):
        t = seed
        for _ in range(k + 1):
            t = App(f, (t,))
        return t

    return InfTerm(gen, modulus=lambda m: m, name=f"fix({f},{seed})")


def constant_stream(t: Term) -> InfTerm:
    return InfTerm(lambda k: t, modulus=lambda m: 0, name=f"const({t})")


def check_cauchy(t: InfTerm, m: int, horizon: int) -> Verdict:
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    return settle(t.prefix(horizon), m)


def inf_distance(s: InfTerm, t: InfTerm, m: int, horizon: int):
    """Approximate the limit distance; returns ``(Distance, ConvergedUpTo)``.

    The distance is read at the larger of the two witnesses.  At or above
    ``1/m`` it is exact for the limits; below ``1/m`` it only bounds them.
    """
    vs = check_cauchy(s, m, horizon)
    if not isinstance(vs, ConvergedUpTo):
        raise NotCauchy(vs, str(s))
    vt = check_cauchy(t, m, horizon)
    if not isinstance(vt, ConvergedUpTo):
        raise NotCauchy(vt, str(t))
    k = max(vs.witness, vt.witness)
    return distance(s[k], t[k]), ConvergedUpTo(m, k)


def equivalent(s: InfTerm, t: InfTerm, m: int, horizon: int) -> Verdict:
    """``ConvergedUpTo`` when ``s ≡ t`` up to ``1/m``, else ``RefutedAt(K, K, d)``."""
    d, v = inf_distance(s, t, m, horizon)
    if d.below(m):
        return v
    return RefutedAt(v.witness, v.witness, d)


@dataclass(frozen=True)
class LipschitzMap:
    """A term map known by construction to satisfy ρ(φs, φt) <= ρ(s, t)."""

    fn: Callable[[Term], Term]
    description: str = ""

    def __call__(self, t: Term) -> Term:
        return self.fn(t)


def wrap(f: str) -> LipschitzMap:
    return LipschitzMap(lambda t: App(f, (t,)), f"wrap {f}")


def into_template(template: Term, var: str) -> LipschitzMap:
    return LipschitzMap(lambda t: apply_substitution(template, {var: t}), f"{var} into {template}")


def map_continuous(phi: Callable[[Term], Term], t: InfTerm) -> InfTerm:
    """Apply ``phi`` approximant-wise.

    Only :class:`LipschitzMap` instances keep the input's modulus; anything
    else yields a stream flagged as unverified.
    """
    name = f"{getattr(phi, 'description', getattr(phi, '__name__', 'phi'))}∘{t}"
    if isinstance(phi, LipschitzMap):
        return InfTerm(lambda k: phi(t[k]), t.modulus, t.verified, name)
    return InfTerm(lambda k: phi(t[k]), None, False, name)


def subst_sequence(
    template: Term,
    thetas: Callable[[int], Mapping[str, Term]],
    moduli: Optional[Mapping[str, Callable[[int], int]]] = None,
) -> InfTerm:
    """Stream ``template θ_k``.

    With a modulus ``K_x`` for each bound variable's value stream, the result
    gets the modulus ``m -> max_x K_x(m - d_x)`` where ``d_x`` is the least
    depth of ``x`` in the template; precisions ``m <= d_x`` need no tail.
    """
    def derived(m):
        return max((moduli[x](m - d) for x, d in depths.items() if m - d >= 1), default=0)

    depths = {}
    if moduli is not None:
        depths = {x: least_var_depth(template, x) for x in moduli}
        depths = {x: d for x, d in depths.items() if d is not None}
    modulus = derived if moduli is not None else None
    return InfTerm(lambda k: apply_substitution(template, thetas(k)), modulus, name=f"{template}Θ_k")


def stream_from_file(path: Union[str, Path]) -> InfTerm:
    """One approximant per non-empty line; the stream is finite (``length`` set)."""
    from .syntax import parse_term

    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: no approximants")
    terms = [parse_term(ln) for ln in lines]
    return InfTerm(terms.__getitem__, name=f"file:{path}", length=len(terms))
