"""Monotone traveling fronts connecting 0 to K.

A profile is stored by its core ``(w_1, ..., w_{N-1})``; ``w_n = 0`` for
``n <= 0`` and ``w_n = K`` for ``n >= N``.  Speed ``c`` follows the ansatz
``u_n(t) = w_{n - c t}``, so ``c = -1`` is a front moving one cell left per
step.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

from .errors import (
    BranchLimitExceeded,
    FastSpeedUnsupported,
    InvalidParams,
    LengthLimitExceeded,
)
from .kernel import LatticeWindow, check_delta, h_delta_closed as _h
from .reactions import ReactionFunction, mirror_reaction

__all__ = [
    "WaveProfile",
    "verify_wave",
    "recurrence_holds",
    "exists_left_tw",
    "exists_right_tw",
    "first_residual",
    "next_residual",
    "construct_left_tws",
    "construct_right_tws",
    "mirror",
    "reverse",
    "radial",
    "dumps_profiles",
    "loads_profiles",
]


@dataclass(frozen=True)
class WaveProfile:
    core: tuple[int, ...]
    capacity: int

    def __post_init__(self):
        core = tuple(int(v) for v in self.core)
        object.__setattr__(self, "core", core)
        K = self.capacity
        prev = 1
        for v in core:
            if v < prev or v >= K:
                raise InvalidParams(f"core {core} is not nondecreasing inside (0, {K})")
            prev = v

    @property
    def N(self) -> int:
        return len(self.core) + 1

    def value(self, n: int) -> int:
        if n <= 0:
            return 0
        if n >= self.N:
            return self.capacity
        return self.core[n - 1]

    def window(self, pad: int = 2) -> LatticeWindow:
        K = self.capacity
        cells = (0,) * pad + self.core + (K,) * pad
        return LatticeWindow(cells, K, 0, K)

    def to_line(self) -> str:
        return " ".join(str(v) for v in (self.capacity, self.N, *self.core))

    @classmethod
    def from_line(cls, line: str) -> "WaveProfile":
        values = [int(tok) for tok in line.split()]
        if len(values) < 2 or values[1] != len(values) - 1:
            raise InvalidParams(f"malformed profile line {line!r}")
        return cls(tuple(values[2:]), values[0])


def recurrence_holds(w: WaveProfile, f: ReactionFunction, delta: int, c: int) -> bool:
    """Check ``w_{n-c} = d_delta(f(w_{n-1}), f(w_n), f(w_{n+1}))`` on every index.

    No restriction on ``c``.  Outside ``[-margin, N + margin]`` the three
    stencil cells and ``w_{n-c}`` all sit in the same constant tail, and ``f``
    fixes both 0 and K, so both sides agree trivially there.
    """
    margin = max(2, abs(c) + 1)
    v = w.value
    for n in range(-margin, w.N + margin + 1):
        fn = f(v(n))
        rhs = fn + _h(delta, f(v(n - 1)), fn) + _h(delta, f(v(n + 1)), fn)
        if v(n - c) != rhs:
            return False
    return True


def verify_wave(w: WaveProfile, f: ReactionFunction, delta: int, c: int) -> bool:
    if abs(c) >= 2:
        raise FastSpeedUnsupported(f"no traveling fronts with |c| >= 2 exist (got c={c})")
    if w.capacity != f.capacity:
        return False
    return recurrence_holds(w, f, check_delta(delta), c)


def exists_left_tw(f: ReactionFunction, delta: int) -> int | None:
    """Smallest witness ``p`` in ``(a, K/2]`` with ``delta >= p`` and ``f(p) >= 2p``."""
    K, a = f.capacity, f.a
    if 2 * a >= K:
        return None
    for p in range(a + 1, K // 2 + 1):
        if delta >= p and f(p) >= 2 * p:
            return p
    return None


def exists_right_tw(f: ReactionFunction, delta: int) -> int | None:
    """Largest witness ``p`` in ``[K/2, a)`` with ``delta >= K-p`` and ``f(p) <= 2p-K``."""
    K, a = f.capacity, f.a
    if 2 * a <= K:
        return None
    for p in range(a - 1, (K + 1) // 2 - 1, -1):
        if delta >= K - p and f(p) <= 2 * p - K:
            return p
    return None


def first_residual(f: ReactionFunction, delta: int, m: int) -> int:
    """Zero exactly when ``m`` can be the first core value of a left front."""
    return _h(delta, f(m), 0) - m


def next_residual(f: ReactionFunction, delta: int, w_prev: int, w_cur: int, m: int) -> int:
    """Zero exactly when ``m`` can follow ``w_prev, w_cur`` in a left front."""
    fc = f(w_cur)
    return fc - _h(delta, fc, f(w_prev)) + _h(delta, f(m), fc) - m


def construct_left_tws(
    f: ReactionFunction,
    delta: int,
    branch_limit: int = 10000,
    length_limit: int | None = None,
) -> list[WaveProfile]:
    """Enumerate every left front (``c = -1``) reachable by the zero recursion.

    ``w_1`` runs over all zeros of ``first_residual`` on ``[p, K]`` and each next value
    over all zeros of ``next_residual`` on ``[w_n, K]``; the zero scans are exhaustive
    because ``next_residual`` need not be monotone.  A branch closes when the next
    value is ``K`` and the closed profile passes the full recurrence check.
    """
    delta = check_delta(delta)
    p = exists_left_tw(f, delta)
    if p is None:
        return []
    K = f.capacity
    if length_limit is None:
        length_limit = 4 * K
    found: set[tuple[int, ...]] = set()
    truncated = False

    stack = [(m,) for m in range(K, p - 1, -1) if first_residual(f, delta, m) == 0]
    while stack:
        core = stack.pop()
        if core[-1] == K:
            w = WaveProfile(core[:-1], K)
            if w.core not in found and recurrence_holds(w, f, delta, -1):
                found.add(w.core)
                if len(found) > branch_limit:
                    raise BranchLimitExceeded(
                        f"more than {branch_limit} left fronts", _sorted_profiles(found, K)
                    )
            continue
        if len(core) >= length_limit:
            truncated = True
            continue
        prev = core[-2] if len(core) > 1 else 0
        cur = core[-1]
        for m in range(K, cur - 1, -1):
            if next_residual(f, delta, prev, cur, m) == 0:
                stack.append(core + (m,))

    result = _sorted_profiles(found, K)
    if truncated:
        raise LengthLimitExceeded(f"a branch exceeded core length {length_limit}", result)
    return result


def _sorted_profiles(cores: Iterable[tuple[int, ...]], K: int) -> list[WaveProfile]:
    return [WaveProfile(core, K) for core in sorted(set(cores))]


def mirror(w: WaveProfile, f: ReactionFunction) -> tuple[WaveProfile, ReactionFunction]:
    """Point reflection ``w_n -> K - w_{N-n}`` together with ``u -> K - f(K-u)``.

    Turns left fronts of ``f`` into right fronts of the mirrored reaction and
    is an involution.
    """
    K = w.capacity
    return WaveProfile(tuple(K - v for v in reversed(w.core)), K), mirror_reaction(f)


def construct_right_tws(
    f: ReactionFunction,
    delta: int,
    branch_limit: int = 10000,
    length_limit: int | None = None,
) -> list[WaveProfile]:
    fm = mirror_reaction(f)
    lefts = construct_left_tws(fm, delta, branch_limit, length_limit)
    return sorted((mirror(w, fm)[0] for w in lefts), key=lambda w: w.core)


def reverse(w: WaveProfile, pad: int = 2) -> LatticeWindow:
    """Decreasing configuration ``(..., K, w_{N-1}, ..., w_1, 0, ...)``."""
    K = w.capacity
    cells = (K,) * pad + w.core[::-1] + (0,) * pad
    return LatticeWindow(cells, K, K, 0)


def radial(
    w: WaveProfile,
    plateau: int,
    kind: Literal["expanding", "contracting"] = "expanding",
    pad: int = 2,
) -> LatticeWindow:
    """Glue an ascending and a descending copy of ``w`` around a plateau.

    ``expanding`` puts a K-plateau between the fronts (0 outside);
    ``contracting`` puts a 0-plateau between them (K outside).
    """
    if plateau < 1:
        raise InvalidParams(f"plateau must be at least 1, got {plateau}")
    K = w.capacity
    if kind == "expanding":
        cells = (0,) * pad + w.core + (K,) * plateau + w.core[::-1] + (0,) * pad
        return LatticeWindow(cells, K, 0, 0)
    if kind == "contracting":
        cells = (K,) * pad + w.core[::-1] + (0,) * plateau + w.core + (K,) * pad
        return LatticeWindow(cells, K, K, K)
    raise InvalidParams(f"unknown radial kind {kind!r}")


def dumps_profiles(profiles: Sequence[WaveProfile]) -> str:
    return "".join(w.to_line() + "\n" for w in profiles)


def loads_profiles(text: str) -> list[WaveProfile]:
    return [WaveProfile.from_line(ln) for ln in text.splitlines() if ln.strip()]
