"""Higher-order (c, m) traveling waves: profiles that return to themselves,
shifted by ``c`` cells, after ``m`` steps.  Their speed is ``gamma = c/m``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import InvalidParams, WindowTooSmall
from .kernel import LatticeWindow, check_delta, h_delta, iterate, step_array
from .pinned import search_pinned
from .reactions import ReactionFunction, _check_params, maximal
from .waves import exists_left_tw, exists_right_tw

__all__ = [
    "HigherOrderWave",
    "MaximalClass",
    "detect",
    "detect_trajectory",
    "support_length",
    "construct_pm12",
    "characterize_maximal",
    "characterize_generic",
    "dumps_wave",
    "loads_wave",
]


@dataclass(frozen=True)
class HigherOrderWave:
    profiles: tuple[LatticeWindow, ...]
    c: int
    m: int
    start: int = 0
    gamma: Fraction = field(init=False)
    c_reduced: int = field(init=False)
    m_reduced: int = field(init=False)

    def __post_init__(self):
        if self.m < 1 or len(self.profiles) != self.m:
            raise InvalidParams(f"need m >= 1 profiles, got m={self.m}, {len(self.profiles)} profiles")
        if abs(self.c) > self.m:
            raise InvalidParams(f"|c| <= m violated: c={self.c}, m={self.m}")
        g = gcd(self.c, self.m)
        object.__setattr__(self, "gamma", Fraction(self.c, self.m))
        object.__setattr__(self, "c_reduced", self.c // g)
        object.__setattr__(self, "m_reduced", self.m // g)

    def closes(self, f: ReactionFunction, delta: int) -> bool:
        """Replay ``F`` over one period and compare with the shifted start."""
        first = self.profiles[0]
        w = first
        for i in range(1, self.m):
            w = iterate(f, delta, w, 1)
            if w != self.profiles[i]:
                return False
        return iterate(f, delta, w, 1) == first.shifted(self.c)


def support_length(w: LatticeWindow) -> int:
    """Width of the part of ``w`` that differs from its constant tails."""
    cells = w.cells
    lo = next((i for i, v in enumerate(cells) if v != w.boundary_left), None)
    if lo is None:
        lo = len(cells)
    hi = next((i for i in range(len(cells) - 1, -1, -1) if cells[i] != w.boundary_right), None)
    if hi is None:
        hi = -1
    return max(0, hi - lo + 1)


def _matches(old: np.ndarray, new: np.ndarray, m: int) -> np.ndarray:
    """Shifts ``c`` in ``[-m, m]`` for which ``new[i] == old[i - c]`` on the interior."""
    L = new.shape[-1]
    core = new[m:L - m]
    windows = sliding_window_view(old, L - 2 * m)  # row j starts at j = m - c
    hits = np.flatnonzero((windows == core).all(axis=1))
    return m - hits


def detect_trajectory(traj: Sequence[np.ndarray], m_max: int) -> tuple[int, int, int] | None:
    """Earliest ``(t, m, c)`` with ``traj[t+m]`` equal to ``traj[t]`` shifted by ``c``.

    Ties at equal ``t`` prefer smaller ``m``, then smaller ``|c|``, then
    negative ``c``.
    """
    best = None
    for s in range(1, len(traj)):
        if best is not None and s > best[0] + m_max:
            break
        for m in range(1, min(m_max, s) + 1):
            t = s - m
            if best is not None and t > best[0]:
                continue
            for c in _matches(traj[t], traj[s], m):
                key = (t, m, abs(int(c)), c > 0)
                if best is None or key < best[1]:
                    best = (t, key, int(c))
    if best is None:
        return None
    t, (_, m, _, _), c = best
    return t, m, c


def detect(
    w: LatticeWindow,
    f: ReactionFunction,
    delta: int,
    m_max: int = 60,
    t_max: int = 400,
) -> HigherOrderWave | None:
    """Evolve ``w`` and look for the first shift-periodic recurrence.

    States ``t`` and ``t+m`` are compared on the interior only, leaving out
    ``m`` cells at each edge where the fixed ghost cells can disagree with a
    moving pattern.  Evolution stops once no earlier match is possible.
    """
    delta = check_delta(delta)
    if m_max < 1 or t_max < m_max:
        raise InvalidParams(f"need 1 <= m_max <= t_max, got m_max={m_max}, t_max={t_max}")
    if w.capacity != f.capacity:
        raise InvalidParams("reaction and window capacities differ")
    L = len(w)
    if L - 2 * m_max < max(1, support_length(w)):
        raise WindowTooSmall(
            f"window of {L} cells leaves {L - 2 * m_max} interior cells for m_max={m_max}, "
            f"support is {support_length(w)}"
        )
    table = f.table
    traj = [w.array()]
    bounds = [(w.boundary_left, w.boundary_right)]
    best = None
    for s in range(1, t_max + 1):
        left, right = bounds[-1]
        traj.append(step_array(table, delta, traj[-1], left, right))
        bounds.append((int(table[left]), int(table[right])))
        if best is None:
            best = _scan_step(traj, s, m_max)
        elif s >= best[0] + m_max:
            break
    found = detect_trajectory(traj, m_max) if best is not None else None
    if found is None:
        return None
    t, m, c = found
    profiles = tuple(
        LatticeWindow(tuple(traj[i].tolist()), w.capacity, *bounds[i]) for i in range(t, t + m)
    )
    return HigherOrderWave(profiles, c, m, start=t)


def _scan_step(traj, s, m_max):
    for m in range(1, min(m_max, s) + 1):
        if len(_matches(traj[s - m], traj[s], m)):
            return (s - m, m)
    return None


def construct_pm12(a: int, K: int, delta: int, pad: int = 8) -> LatticeWindow | None:
    """Seed of a (-1, 2) wave (``a < K/2``) or a (+1, 2) wave (``a > K/2``)
    for the maximal reaction, or ``None`` when the flux conditions fail.

    Besides ``h(K, 0)`` matching the smaller threshold ``s = min(a, K-a)``,
    the two-step orbit needs ``h(K, s) > s // 2``.  That second condition
    fails exactly when ``K = 4m + 1`` and ``s = 2m``, where the seed relaxes
    to a pinned front instead.
    """
    _check_params(K, a)
    delta = check_delta(delta)
    s = min(a, K - a)
    if 2 * a == K or h_delta(delta, K, 0) != s or h_delta(delta, K, s) <= s // 2:
        return None
    if 1 < a and 2 * a < K:
        core = (a, K - a)
    elif 2 * a > K and a < K - 1:
        core = (K - a, a)
    else:
        return None
    return LatticeWindow((0,) * pad + core + (K,) * pad, K, 0, K)


class MaximalClass(enum.Enum):
    PINNED = "P"
    MOVING = "M"
    HIGHER_ORDER_12 = "Z"
    UNKNOWN = "U"


def characterize_maximal(a: int, K: int, delta: int) -> MaximalClass:
    """Case table for the maximal reaction, applied in order."""
    _check_params(K, a)
    delta = check_delta(delta)
    if delta <= min(a - 1, K - a - 1):
        return MaximalClass.PINNED
    if a in (K // 2, (K + 1) // 2):
        if delta >= min(a, K - a):
            return MaximalClass.HIGHER_ORDER_12 if K % 4 == 3 else MaximalClass.PINNED
        return MaximalClass.UNKNOWN
    if delta == min(a, K - a):
        return MaximalClass.HIGHER_ORDER_12
    if delta >= min(a + 1, K - a + 1):
        return MaximalClass.MOVING
    return MaximalClass.UNKNOWN


def characterize_generic(a: int, K: int, delta: int, m_max: int = 4) -> MaximalClass:
    """Classify the maximal-reaction cell with the general-purpose searchers.

    Moving if an existence witness is found, else pinned if the pinned search
    is nonempty, else higher-order when the (±1, 2) seed is confirmed by
    simulation.
    """
    f = maximal(a, K)
    if exists_left_tw(f, delta) is not None or exists_right_tw(f, delta) is not None:
        return MaximalClass.MOVING
    if search_pinned(f, delta):
        return MaximalClass.PINNED
    seed = construct_pm12(a, K, delta, pad=4 * m_max)
    if seed is not None:
        hit = detect(seed, f, delta, m_max=m_max, t_max=4 * m_max)
        if hit is not None and hit.m == 2 and abs(hit.c) == 1:
            return MaximalClass.HIGHER_ORDER_12
    return MaximalClass.UNKNOWN


def dumps_wave(wave: HigherOrderWave) -> str:
    g = wave.gamma
    lines = [f"{wave.c} {wave.m} {g.numerator} {g.denominator}"]
    lines += [p.to_line() for p in wave.profiles]
    return "\n".join(lines) + "\n"


def loads_wave(text: str, capacity: int) -> HigherOrderWave:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    c, m, num, den = (int(tok) for tok in lines[0].split())
    profiles = tuple(LatticeWindow.from_line(ln, capacity) for ln in lines[1:])
    wave = HigherOrderWave(profiles, c, m)
    if wave.gamma != Fraction(num, den):
        raise InvalidParams(f"speed {num}/{den} does not match c/m = {c}/{m}")
    return wave
