from __future__ import annotations

import random
from itertools import combinations_with_replacement

import pytest
from hypothesis import given, strategies as st

from oracles import brute_force_fronts, random_reaction
from rdca.reactions import from_table, maximal
from rdca.waves import WaveProfile, verify_wave
from rdca.pinned import is_pinned, search_pinned


@st.composite
def reaction_and_delta(draw, max_K=12):
    K = draw(st.integers(4, max_K))
    a = draw(st.integers(2, K - 2))
    f = random_reaction(K, a, random.Random(draw(st.integers(0, 2**32))))
    return f, draw(st.integers(1, K))


class TestIsPinned:
    @given(reaction_and_delta())
    def test_weakest_diffusion(self, fd):
        f, _ = fd
        K = f.capacity
        assert is_pinned(WaveProfile((1, K - 1), K), f, 1)

    @pytest.mark.parametrize("K", range(5, 13))
    def test_maximal_two_point_core(self, K):
        for a in range(2, K - 1):
            f = maximal(a, K)
            for delta in range(1, min(a - 1, K - a - 1) + 1):
                assert is_pinned(WaveProfile((delta, K - delta), K), f, delta)

    def test_nonexistence_example(self):
        f = maximal(3, 7)
        for n in range(0, 5):
            for core in combinations_with_replacement(range(1, 7), n):
                assert not is_pinned(WaveProfile(core, 7), f, 3)

    def test_total_deficit_term(self):
        # flux matches at n = 1..N, but the core leaves a deficit of 1
        f = from_table(6, 2, (0, 0, 2, 4, 5, 6, 6))
        w = WaveProfile((1,), 6)
        assert not verify_wave(w, f, 1, 0)
        assert not is_pinned(w, f, 1)

    @given(reaction_and_delta(max_K=9), st.lists(st.integers(1, 8), max_size=6))
    def test_agrees_with_recurrence(self, fd, values):
        f, delta = fd
        K = f.capacity
        core = tuple(sorted(v for v in values if v < K))
        w = WaveProfile(core, K)
        assert is_pinned(w, f, delta) == verify_wave(w, f, delta, 0)

    def test_capacity_mismatch_is_false(self):
        assert not is_pinned(WaveProfile((1, 6), 7), maximal(3, 8), 1)


class TestSearch:
    @given(reaction_and_delta())
    def test_weakest_diffusion_contains_basic(self, fd):
        f, _ = fd
        K = f.capacity
        assert (1, K - 1) in {w.core for w in search_pinned(f, 1)}

    def test_nonexistence_example(self):
        assert search_pinned(maximal(3, 7), 3) == []

    @pytest.mark.parametrize("delta", range(4, 9))
    def test_three_point_core_even(self, delta):
        assert (2, 4, 6) in {w.core for w in search_pinned(maximal(4, 8), delta)}

    @pytest.mark.parametrize("a", [4, 5])
    @pytest.mark.parametrize("delta", range(4, 9))
    def test_three_point_core_odd(self, a, delta):
        assert (2, a, 7) in {w.core for w in search_pinned(maximal(a, 9), delta)}

    @pytest.mark.parametrize("K", range(4, 21, 2))
    def test_length_bound_is_attained(self, K):
        core = (1, K // 2, K - 1)
        f = maximal(K // 2, K)
        assert is_pinned(WaveProfile(core, K), f, 1)
        found = {w.core for w in search_pinned(f, 1)}
        assert core in found
        assert max(len(c) for c in found) == 3 == 2 * 1 + 1

    @given(reaction_and_delta())
    def test_structure(self, fd):
        f, delta = fd
        K, a = f.capacity, f.a
        out = search_pinned(f, delta)
        assert [w.core for w in out] == sorted(w.core for w in out)
        for w in out:
            core = w.core
            assert is_pinned(w, f, delta) and verify_wave(w, f, delta, 0)
            assert all(x < y for x, y in zip(core, core[1:]))
            assert w.N <= 2 * delta + 2
            assert f(core[0]) <= 1 <= core[0] < a < core[-1] <= K - 1 <= f(core[-1])

    @given(reaction_and_delta(max_K=7))
    def test_matches_brute_force(self, fd):
        f, delta = fd
        delta = min(delta, 4)
        want = brute_force_fronts(f, delta, 0, 2 * delta + 1)
        assert {w.core for w in search_pinned(f, delta)} == want
