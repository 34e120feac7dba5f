"""Bistable reaction functions on the state set {0, ..., K}."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Sequence

import numpy as np

from .errors import InvalidParams, NotBistable

__all__ = [
    "ReactionFunction",
    "from_table",
    "maximal",
    "truncated_polynomial",
    "lambda_thresholds",
    "mirror_reaction",
    "as_fraction",
    "dumps_reaction",
    "loads_reaction",
]


def _check_params(K: int, a: int) -> None:
    if not (isinstance(K, int) and isinstance(a, int)):
        raise InvalidParams(f"K and a must be integers, got K={K!r}, a={a!r}")
    if not 2 <= a <= K - 2:
        raise InvalidParams(f"need 2 <= a <= K-2, got a={a}, K={K}")


def _validate(K: int, a: int, values: tuple[int, ...]) -> None:
    if len(values) != K + 1:
        raise NotBistable(f"table has {len(values)} entries, expected K+1={K + 1}", "range")
    for u, v in enumerate(values):
        if not 0 <= v <= K:
            raise NotBistable(f"f({u})={v} outside [0, {K}]", "range", u)
    for u in (0, a, K):
        if values[u] != u:
            raise NotBistable(f"fixed point f({u})={u} violated (f({u})={values[u]})", "fixed-point", u)
    for u in range(1, K + 1):
        if values[u] < values[u - 1]:
            raise NotBistable(f"f nondecreasing violated at u={u}", "monotonicity", u)
    for u in range(1, a):
        if values[u] >= u:
            raise NotBistable(f"f(u)<u violated at u={u}", "sign", u)
    for u in range(a + 1, K):
        if values[u] <= u:
            raise NotBistable(f"f(u)>u violated at u={u}", "sign", u)


@dataclass(frozen=True)
class ReactionFunction:
    """Validated bistable map f: {0..K} -> {0..K} with threshold ``a``.

    Construction fails with :class:`NotBistable` naming the first violated
    clause.  Instances are immutable and callable.
    """

    capacity: int
    a: int
    values: tuple[int, ...]
    table: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_params(self.capacity, self.a)
        values = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", values)
        _validate(self.capacity, self.a, values)
        table = np.asarray(values, dtype=np.int64)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @property
    def K(self) -> int:
        return self.capacity

    def __call__(self, u: int) -> int:
        return self.values[u]

    def __hash__(self):
        return hash((self.capacity, self.a, self.values))


def from_table(K: int, a: int, values: Sequence[int]) -> ReactionFunction:
    return ReactionFunction(K, a, tuple(values))


def maximal(a: int, K: int) -> ReactionFunction:
    """Heaviside-like caricature: 0 below ``a``, ``a`` at ``a``, ``K`` above."""
    _check_params(K, a)
    values = [0 if u < a else (a if u == a else K) for u in range(K + 1)]
    return ReactionFunction(K, a, tuple(values))


def as_fraction(lam) -> Fraction:
    """Exact rational value of ``lam``.

    Floats are read through their shortest decimal representation, so
    ``0.1`` means exactly 1/10 rather than the nearest binary double.
    """
    if isinstance(lam, Fraction):
        return lam
    if isinstance(lam, bool):
        raise InvalidParams(f"lambda must be a number, got {lam!r}")
    if isinstance(lam, int):
        return Fraction(lam)
    if isinstance(lam, float):
        if not math.isfinite(lam):
            raise InvalidParams(f"lambda must be finite, got {lam!r}")
        return Fraction(repr(lam))
    if isinstance(lam, str):
        try:
            return Fraction(lam)
        except ValueError as exc:
            raise InvalidParams(f"cannot parse lambda {lam!r}") from exc
    if isinstance(lam, Real):
        return Fraction(lam)
    raise InvalidParams(f"lambda must be a number, got {lam!r}")


def truncated_polynomial(K: int, a: int, lam) -> ReactionFunction:
    """Truncated cubic reaction with steepness ``lam``.

    Rounds up above ``a`` and down at or below ``a``; the cubic is evaluated
    in exact rational arithmetic.
    """
    _check_params(K, a)
    lam = as_fraction(lam)
    if lam <= 0:
        raise InvalidParams(f"lambda must be positive, got {lam}")
    values = []
    for p in range(K + 1):
        g = p + lam * p * (K - p) * (p - a)
        if p > a:
            values.append(min(K, math.ceil(g)))
        else:
            values.append(max(0, math.floor(g)))
    return ReactionFunction(K, a, tuple(values))


def lambda_thresholds(K: int, a: int) -> tuple[Fraction, Fraction]:
    """Return ``(lambda_under, lambda_over)`` for the truncated polynomial.

    Below ``lambda_under`` every state above ``a`` grows by exactly one per
    reaction step, which rules out moving fronts for any diffusion.  Above
    ``lambda_over`` the state ``a+1`` at least doubles, which yields a moving
    front once ``delta >= a+1`` (for ``a < K/2``).
    """
    _check_params(K, a)
    peak = max(p * (K - p) * (p - a) for p in range(a + 1, K))
    return Fraction(1, peak), Fraction(1, K - a - 1)


def mirror_reaction(f: ReactionFunction) -> ReactionFunction:
    K = f.capacity
    return ReactionFunction(K, K - f.a, tuple(K - f(K - u) for u in range(K + 1)))


def dumps_reaction(f: ReactionFunction) -> str:
    return f"{f.capacity} {f.a}\n" + " ".join(str(v) for v in f.values) + "\n"


def loads_reaction(text: str) -> ReactionFunction:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 2:
        raise ValueError("reaction text needs a 'K a' line and one line of K+1 values")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("first line must be 'K a'")
    K, a = int(head[0]), int(head[1])
    values = [int(tok) for tok in lines[1].split()]
    return from_table(K, a, values)
