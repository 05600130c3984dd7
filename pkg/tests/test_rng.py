from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import chisquare

from ldim.rng import XorShift64Star, derive_seed, splitmix64


def reference_stream(state, count):
    """xorshift64* in numpy uint64 arithmetic (wrapping), for cross-checking."""
    s = np.uint64(state)
    out = []
    with np.errstate(over="ignore"):
        for _ in range(count):
            s ^= s >> np.uint64(12)
            s ^= s << np.uint64(25)
            s ^= s >> np.uint64(27)
            out.append(int(s * np.uint64(0x2545F4914F6CDD1D)))
    return out


def test_splitmix64_known_vector():
    # first output of SplitMix64 started from state 0
    assert splitmix64(0) == 0xE220A8397B1DCDAF


@given(st.integers(0, 2**64 - 1))
def test_matches_numpy_reference(seed):
    g = XorShift64Star(seed)
    start = g.state
    assert [g.next_u64() for _ in range(5)] == reference_stream(start, 5)


def test_deterministic():
    a, b = XorShift64Star(42), XorShift64Star(42)
    assert [a.next_u64() for _ in range(10)] == [b.next_u64() for _ in range(10)]
    assert XorShift64Star(0).state != 0


def test_derive_seed_distinct():
    seeds = {derive_seed(7, i) for i in range(1000)}
    assert len(seeds) == 1000
    assert derive_seed(7, 3) != derive_seed(8, 3)


def test_below_range_and_uniformity():
    g = XorShift64Star(1)
    draws = [g.below(6) for _ in range(6000)]
    assert set(draws) == set(range(6))
    assert chisquare(list(Counter(draws).values())).pvalue > 0.001
    with pytest.raises(ValueError):
        g.below(0)


def test_coin_balance():
    g = XorShift64Star(9)
    heads = sum(g.coin() for _ in range(10000))
    assert chisquare([heads, 10000 - heads]).pvalue > 0.001


@given(st.integers(0, 2**32), st.integers(1, 12), st.data())
def test_k_subset_shape(seed, n, data):
    k = data.draw(st.integers(0, n))
    s = XorShift64Star(seed).k_subset(n, k)
    assert len(s) == k == len(set(s))
    assert s == sorted(s) and all(1 <= x <= n for x in s)


def test_k_subset_uniform():
    g = XorShift64Star(123)
    counts = Counter(tuple(g.k_subset(5, 2)) for _ in range(10000))
    assert len(counts) == 10
    assert chisquare(list(counts.values())).pvalue > 0.001
