"""Pinned fronts (c = 0): telescoping-sum test and complete bounded search."""
from __future__ import annotations

from .kernel import check_delta, h_delta_closed as _h
from .reactions import ReactionFunction
from .waves import WaveProfile

__all__ = ["is_pinned", "search_pinned"]


def is_pinned(w: WaveProfile, f: ReactionFunction, delta: int) -> bool:
    """Flux between ``w_{n-1}`` and ``w_n`` must equal the accumulated
    reaction deficit ``sum_{i<n} (w_i - f(w_i))``.

    Checked for ``n = 1 .. N+1``; the ``N+1`` term forces the total deficit
    over the core to vanish, and every later index repeats it.
    """
    delta = check_delta(delta)
    if w.capacity != f.capacity:
        return False
    total = 0
    for n in range(1, w.N + 2):
        if _h(delta, f(w.value(n)), f(w.value(n - 1))) != total:
            return False
        total += w.value(n) - f(w.value(n)) if n < w.N else 0
    return True


def search_pinned(f: ReactionFunction, delta: int) -> list[WaveProfile]:
    """All pinned fronts for ``(f, delta)``, sorted by core.

    Cores are built strictly increasing, at most ``2*delta + 1`` long, and a
    prefix is dropped as soon as its deficit leaves ``[0, delta]``: the flux
    it must equal is a nonnegative ``h`` value between nondecreasing states.
    """
    delta = check_delta(delta)
    K = f.capacity
    max_len = 2 * delta + 1
    out: list[tuple[int, ...]] = []

    # (core, f of last core value, running deficit)
    stack: list[tuple[tuple[int, ...], int, int]] = [((), 0, 0)]
    while stack:
        core, f_last, deficit = stack.pop()
        start = core[-1] + 1 if core else 1
        if deficit == 0 and core and _h(delta, K, f_last) == 0:
            out.append(core)
        if len(core) >= max_len:
            continue
        for m in range(start, K):
            fm = f(m)
            if _h(delta, fm, f_last) != deficit:
                continue
            nxt = deficit + m - fm
            if 0 <= nxt <= delta:
                stack.append((core + (m,), fm, nxt))
    return [WaveProfile(core, K) for core in sorted(out)]
