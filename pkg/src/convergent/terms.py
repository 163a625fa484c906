"""Finite first-order terms and the tree ultrametric on them.

Terms are immutable labelled ordered trees.  Constants are applications with
no arguments; variables form their own class of leaves.  The distance between
two terms is ``1/(d+1)`` where ``d`` is the greatest depth to which their trees
coincide, and ``0`` for identical terms.  Distances are kept symbolic
(:class:`Distance`), never as floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterator, Mapping, Optional, Union

__all__ = [
    "Var",
    "App",
    "Term",
    "Atom",
    "Distance",
    "ZERO",
    "Substitution",
    "const",
    "depth",
    "atom_depth",
    "distance",
    "atom_distance",
    "same_to_depth",
    "apply_substitution",
    "substitute_atom",
    "least_var_depth",
    "variables",
    "subterms",
    "iterate",
    "is_ground",
]


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class App:
    head: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.head
        return f"{self.head}({','.join(str(a) for a in self.args)})"


Term = Union[Var, App]


def const(name: str) -> App:
    return App(name, ())


@dataclass(frozen=True, slots=True)
class Atom:
    pred: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(str(a) for a in self.args)})"

    def as_app(self) -> App:
        """View the atom as a tree whose root is the predicate symbol."""
        return App(self.pred, self.args)


@total_ordering
@dataclass(frozen=True, slots=True)
class Distance:
    """A value in ``{0} ∪ {1/m : m >= 1}``.

    ``m is None`` encodes zero.  Ordering follows the numeric value, so the
    builtin ``max`` and ``min`` work directly.
    """

    m: Optional[int] = None

    def __post_init__(self):
        if self.m is not None and (not isinstance(self.m, int) or self.m < 1):
            raise ValueError(f"reciprocal distance needs m >= 1, got {self.m!r}")

    @classmethod
    def recip(cls, m: int) -> "Distance":
        return cls(m)

    @property
    def is_zero(self) -> bool:
        return self.m is None

    def wrap(self) -> "Distance":
        """``D/(D+1)``: zero stays zero, ``1/m`` becomes ``1/(m+1)``."""
        return self if self.m is None else Distance(self.m + 1)

    def as_fraction(self) -> Fraction:
        return Fraction(0) if self.m is None else Fraction(1, self.m)

    def below(self, m: int) -> bool:
        """True iff this distance is strictly less than ``1/m``."""
        return self.m is None or self.m > m

    def _key(self) -> tuple:
        return (0, 0) if self.m is None else (1, -self.m)

    def __lt__(self, other: "Distance") -> bool:
        if not isinstance(other, Distance):
            return NotImplemented
        return self._key() < other._key()

    def __str__(self) -> str:
        return "0" if self.m is None else f"1/{self.m}"


ZERO = Distance()
ONE = Distance(1)


class Substitution(dict):
    """Finite map from variable names to terms; no variable maps to itself."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        for name, value in self.items():
            if not isinstance(name, str):
                raise TypeError(f"substitution keys are variable names, got {name!r}")
            if value == Var(name):
                raise ValueError(f"variable {name} bound to itself")

    def __str__(self) -> str:
        inner = ", ".join(f"{k}/{v}" for k, v in sorted(self.items()))
        return "{" + inner + "}"


def depth(t: Term) -> int:
    """Leaves (variables and constants) have depth 1."""
    if isinstance(t, Var) or not t.args:
        return 1
    return 1 + max(depth(a) for a in t.args)


def atom_depth(p: Atom) -> int:
    """Depth of the deepest argument; 0 for propositional atoms."""
    return max((depth(a) for a in p.args), default=0)


def _same_head(s: Term, t: Term) -> bool:
    if isinstance(s, Var) or isinstance(t, Var):
        return s == t
    return s.head == t.head and len(s.args) == len(t.args)


def distance(s: Term, t: Term) -> Distance:
    if s == t:
        return ZERO
    if not _same_head(s, t):
        return ONE
    # same head, different terms: at least one child pair differs
    return max(distance(a, b) for a, b in zip(s.args, t.args)).wrap()


def atom_distance(p: Atom, q: Atom) -> Distance:
    return distance(p.as_app(), q.as_app())


def same_to_depth(s: Term, t: Term, m: int) -> bool:
    """True iff the trees of ``s`` and ``t`` agree on every node at depth <= m."""
    if m <= 0:
        return True
    if not _same_head(s, t):
        return False
    if isinstance(s, Var):
        return True
    return all(same_to_depth(a, b, m - 1) for a, b in zip(s.args, t.args))


def apply_substitution(t: Term, theta: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return theta.get(t.name, t)
    if not t.args:
        return t
    return App(t.head, tuple(apply_substitution(a, theta) for a in t.args))


def substitute_atom(p: Atom, theta: Mapping[str, Term]) -> Atom:
    return Atom(p.pred, tuple(apply_substitution(a, theta) for a in p.args))


def least_var_depth(t: Term, x: str) -> Optional[int]:
    """Offset below the root of the shallowest occurrence of variable ``x``.

    ``least_var_depth(X, "X") == 0`` and ``least_var_depth(f(X), "X") == 1``.
    Returns None when ``x`` does not occur.
    """
    frontier = [t]
    level = 0
    while frontier:
        nxt = []
        for node in frontier:
            if isinstance(node, Var):
                if node.name == x:
                    return level
            else:
                nxt.extend(node.args)
        frontier = nxt
        level += 1
    return None


def variables(t: Union[Term, Atom]) -> set:
    if isinstance(t, Var):
        return {t.name}
    out = set()
    for a in t.args:
        out |= variables(a)
    return out


def subterms(t: Term) -> Iterator[Term]:
    """Every subterm occurrence, root first."""
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)


def is_ground(t: Union[Term, Atom]) -> bool:
    if isinstance(t, Var):
        return False
    return all(is_ground(a) for a in t.args)


def iterate(f: str, n: int, t: Term) -> Term:
    """``f`` applied ``n`` times around ``t``."""
    if n < 0:
        raise ValueError(f"negative iteration count {n}")
    for _ in range(n):
        t = App(f, (t,))
    return t
