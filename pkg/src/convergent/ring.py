"""Computable functions on the reals via Cauchy sequences of exact rationals.

A real is a stream ``n -> x_n`` of :class:`fractions.Fraction` values.  A map
on rationals is lifted pointwise; the exponential is the diagonal
``n -> exp_partial(n, x_n)``.  No floating point is used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

from .cauchy import ConvergedUpTo, RefutedAt, Unknown

__all__ = [
    "CauchyReal",
    "ContinuousMap",
    "exp_partial",
    "constant_real",
    "lift",
    "lift_indexed",
    "exp_real",
    "eval_real",
    "parse_rational",
    "render_rational",
]


def exp_partial(n: int, x) -> Fraction:
    """``1 + x + x^2/2! + ... + x^n/n!``, each step adding ``x^i/i!``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    x = Fraction(x)
    total = Fraction(1)
    term = Fraction(1)
    for i in range(1, n + 1):
        term = term * x / i
        total += term
    return total


@dataclass(frozen=True)
class CauchyReal:
    gen: Callable[[int], Fraction]
    modulus: Optional[Callable[[int], int]] = None
    name: str = ""
    _cached: Callable = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_cached", lru_cache(maxsize=4096)(self.gen))

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            raise IndexError(n)
        return Fraction(self._cached(n))

    def prefix(self, horizon: int) -> list:
        return [self[n] for n in range(horizon + 1)]


@dataclass(frozen=True)
class ContinuousMap:
    """A rational map with a declared modulus of continuity.

    ``mu(m)`` is a precision ``p`` such that inputs closer than ``1/p`` have
    images closer than ``1/m``.
    """

    fn: Callable[[Fraction], Fraction]
    mu: Callable[[int], int]

    def __call__(self, q: Fraction) -> Fraction:
        return self.fn(q)


def constant_real(q) -> CauchyReal:
    q = Fraction(q)
    return CauchyReal(lambda n: q, lambda m: 0, render_rational(q))


def lift(phi: Callable[[Fraction], Fraction], x: CauchyReal) -> CauchyReal:
    modulus = None
    if isinstance(phi, ContinuousMap) and x.modulus is not None:
        modulus = lambda m: x.modulus(phi.mu(m))  # noqa: E731
    return CauchyReal(lambda n: phi(x[n]), modulus, f"phi({x.name})")


def lift_indexed(phi: Callable[[int, Fraction], Fraction], x: CauchyReal) -> CauchyReal:
    """The diagonal stream ``n -> phi(n, x_n)``."""
    return CauchyReal(lambda n: phi(n, x[n]), None, f"phi(n, {x.name})")


def exp_real(x: CauchyReal) -> CauchyReal:
    return lift_indexed(exp_partial, x)


def eval_real(x: CauchyReal, m: int, horizon: int):
    """Return ``(approximant or None, verdict)`` at precision ``1/m``.

    The witness ``K`` is the least index whose tail ``x_K..x_H`` has
    oscillation (max minus min) below ``1/m``; that bounds every pairwise gap
    in the tail, which adjacent gaps alone would not.
    """
    if m < 1:
        raise ValueError("precision m must be >= 1")
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    vals = x.prefix(horizon)
    eps = Fraction(1, m)
    last = abs(vals[-1] - vals[-2])
    if last >= eps:
        return None, RefutedAt(horizon - 1, horizon, last)
    lo = hi = vals[-1]
    k = horizon
    while k > 0:
        v = vals[k - 1]
        if max(hi, v) - min(lo, v) >= eps:
            break
        lo, hi = min(lo, v), max(hi, v)
        k -= 1
    if k > horizon // 2:
        return None, Unknown(horizon, f"settles only at K={k}")
    return vals[k], ConvergedUpTo(m, k)


def parse_rational(text: str) -> Fraction:
    """Accepts ``p/q``, integers and decimal literals, converted exactly."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def render_rational(q: Union[Fraction, int]) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"
