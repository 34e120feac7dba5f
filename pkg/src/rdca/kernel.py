"""Integer-exact diffusion kernel and the composed reaction-diffusion update.

The bi-infinite lattice is represented by a finite window of cells plus a
constant value on each side that extends to infinity.  Since the stencil has
radius one and ``F`` maps a constant tail ``b`` to the constant tail ``f(b)``,
a window evolves exactly like the bi-infinite configuration it stands for, as
long as the interesting part of the state stays inside it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .errors import CapacityMismatch, InvalidParams, InvariantViolation

if TYPE_CHECKING:
    from .reactions import ReactionFunction

__all__ = [
    "LatticeWindow",
    "check_delta",
    "h_delta",
    "h_delta_closed",
    "d_delta",
    "apply_F",
    "iterate",
    "step_array",
    "flux_array",
]


def check_delta(delta: int) -> int:
    if isinstance(delta, bool) or int(delta) != delta or delta < 1:
        raise InvalidParams(f"diffusion parameter must be a positive integer, got {delta!r}")
    return int(delta)


def h_delta(delta: int, m: int, n: int) -> int:
    """Flux from a cell in state ``m`` towards a neighbour in state ``n``.

    Literal transcription of the piecewise table: saturates at ``±delta``
    once the difference reaches ``2*delta`` and otherwise moves ``k`` units
    when the difference is ``2k`` or ``2k+1``.
    """
    diff = m - n
    if diff >= 2 * delta:
        return delta
    if diff <= -2 * delta:
        return -delta
    for k in range(delta - 1, 0, -1):
        if diff in (2 * k, 2 * k + 1):
            return k
        if -diff in (2 * k, 2 * k + 1):
            return -k
    return 0


def h_delta_closed(delta: int, m: int, n: int) -> int:
    diff = m - n
    mag = min(delta, abs(diff) // 2)
    return mag if diff >= 0 else -mag


def d_delta(delta: int, m: int, n: int, p: int) -> int:
    """Three-cell diffusion rule: centre ``n`` exchanges with ``m`` and ``p``."""
    return n + h_delta(delta, m, n) + h_delta(delta, p, n)


def flux_array(diff: np.ndarray, delta: int) -> np.ndarray:
    """Vectorised ``h_delta`` applied to an array of differences ``m - n``."""
    return np.sign(diff) * np.minimum(delta, np.abs(diff) // 2)


def step_array(table: np.ndarray, delta: int, cells: np.ndarray, left: int, right: int) -> np.ndarray:
    """One application of F to ``cells`` (last axis is space).

    ``left``/``right`` are the constant tails *before* the step; the ghost
    neighbours are their reaction images.  Works on batches: any leading axes
    are carried along.
    """
    fu = table[cells]
    shape = fu.shape[:-1] + (fu.shape[-1] + 2,)
    padded = np.empty(shape, dtype=np.int64)
    padded[..., 0] = table[left]
    padded[..., -1] = table[right]
    padded[..., 1:-1] = fu
    return fu + flux_array(padded[..., :-2] - fu, delta) + flux_array(padded[..., 2:] - fu, delta)


@dataclass(frozen=True)
class LatticeWindow:
    """Finite view of a configuration with constant extensions on both sides."""

    cells: tuple[int, ...]
    capacity: int
    boundary_left: int = 0
    boundary_right: int | None = None

    def __post_init__(self):
        cells = tuple(int(c) for c in self.cells)
        object.__setattr__(self, "cells", cells)
        if self.boundary_right is None:
            object.__setattr__(self, "boundary_right", self.capacity)
        K = self.capacity
        if K < 1:
            raise InvalidParams(f"capacity must be positive, got {K}")
        if not cells:
            raise InvalidParams("a window needs at least one cell")
        for name, value in (("boundary_left", self.boundary_left), ("boundary_right", self.boundary_right)):
            if not 0 <= value <= K:
                raise InvalidParams(f"{name}={value} outside [0, {K}]")
        bad = [c for c in cells if not 0 <= c <= K]
        if bad:
            raise InvalidParams(f"cell state {bad[0]} outside [0, {K}]")

    @classmethod
    def from_array(cls, cells: Sequence[int] | np.ndarray, capacity: int, left: int = 0, right: int | None = None):
        return cls(tuple(int(c) for c in cells), capacity, left, right)

    def __len__(self) -> int:
        return len(self.cells)

    def array(self) -> np.ndarray:
        return np.asarray(self.cells, dtype=np.int64)

    def shifted(self, c: int) -> "LatticeWindow":
        """Translate the configuration by ``c`` cells (``c < 0`` is leftward).

        Cells entering the window are taken from the constant tails, so the
        result is exact whenever the tails reach into the window edges.
        """
        n = len(self.cells)
        out = []
        for i in range(n):
            j = i - c
            if j < 0:
                out.append(self.boundary_left)
            elif j >= n:
                out.append(self.boundary_right)
            else:
                out.append(self.cells[j])
        return LatticeWindow(tuple(out), self.capacity, self.boundary_left, self.boundary_right)

    def reversed(self) -> "LatticeWindow":
        return LatticeWindow(self.cells[::-1], self.capacity, self.boundary_right, self.boundary_left)

    def to_line(self) -> str:
        return " ".join(str(v) for v in (self.boundary_left, self.boundary_right, *self.cells))

    @classmethod
    def from_line(cls, line: str, capacity: int) -> "LatticeWindow":
        values = [int(tok) for tok in line.split()]
        if len(values) < 3:
            raise InvalidParams("window line needs two boundary values and at least one cell")
        return cls(tuple(values[2:]), capacity, values[0], values[1])


def apply_F(f: "ReactionFunction", delta: int, w: LatticeWindow) -> LatticeWindow:
    if f.capacity != w.capacity:
        raise CapacityMismatch(f"reaction capacity {f.capacity} != window capacity {w.capacity}")
    delta = check_delta(delta)
    out = step_array(f.table, delta, w.array(), w.boundary_left, w.boundary_right)
    left = int(f.table[w.boundary_left])
    right = int(f.table[w.boundary_right])
    K = w.capacity
    if out.min() < 0 or out.max() > K:
        raise InvariantViolation(f"update left the state interval [0, {K}]")
    return LatticeWindow(tuple(out.tolist()), K, left, right)


def iterate(f: "ReactionFunction", delta: int, w: LatticeWindow, t: int) -> LatticeWindow:
    if t < 0:
        raise InvalidParams(f"step count must be nonnegative, got {t}")
    for _ in range(t):
        w = apply_F(f, delta, w)
    return w
