import math

import numpy as np
import pytest
from _stats import within_rate
from hypothesis import given
from hypothesis import strategies as st

from cutquery import ParameterError, approximate_count, r_test_success_prob, sample_hitting_set
from cutquery.counting import (StringOrOracle, hitting_set_size, is_good_estimate, or_query_count,
                               repetitions)


def test_r_test_examples():
    assert r_test_success_prob(4, 8, 2) == pytest.approx(0.75)
    assert r_test_success_prob(0, 8, 3) == 0
    assert r_test_success_prob(8, 8, 3) == 1


def test_r_test_monte_carlo():
    rng = np.random.default_rng(0)
    x = np.zeros(20, dtype=bool)
    x[:5] = True
    hits = x[rng.integers(0, 20, size=(20000, 3))].any(axis=1).mean()
    assert hits == pytest.approx(r_test_success_prob(5, 20, 3), abs=0.02)


def test_all_ones_estimates_full_length():
    X = np.ones((3, 8), dtype=int)
    assert list(approximate_count(StringOrOracle(X), 3, 8, 0.1, rng=0)) == [8, 8, 8]


def test_zero_strings_estimate_zero():
    X = np.zeros((2, 16), dtype=int)
    assert list(approximate_count(StringOrOracle(X), 2, 16, 0.1, rng=0)) == [0, 0]


def test_k1_l16_weight4():
    X = np.zeros((1, 16), dtype=int)
    X[0, [1, 5, 9, 12]] = 1
    bad = 0
    for seed in range(1000):
        b = approximate_count(StringOrOracle(X), 1, 16, 0.1, rng=seed)[0]
        bad += not 2 <= b <= 16
    assert within_rate(bad, 1000, 0.1)


@given(st.integers(1, 8), st.integers(1, 256), st.sampled_from([0.05, 0.1, 0.3]),
       st.sampled_from(["paper", "desk"]), st.integers(0, 10 ** 6))
def test_query_count_closed_form(k, l, delta, profile, seed):
    rng = np.random.default_rng(seed)
    X = (rng.random((k, l)) < rng.random()).astype(int)
    o = StringOrOracle(X)
    approximate_count(o, k, l, delta, profile=profile, rng=seed)
    a = repetitions(k, l, delta, profile)
    assert o.queries == a * (math.ceil(math.log2(l)) + 1) == or_query_count(k, l, delta, profile)


def test_repetitions_formula():
    assert repetitions(4, 256, 0.1, "paper") == 200 * math.ceil(math.log2(4 * 9 / 0.1))
    assert repetitions(4, 256, 0.1, "desk") == 20 * math.ceil(math.log2(4 * 9 / 0.1))


def test_batch_and_scalar_oracles_agree():
    X = (np.random.default_rng(3).random((4, 40)) < 0.2).astype(int)
    o = StringOrOracle(X)

    def scalar(S):
        return o(S)

    a = approximate_count(o, 4, 40, 0.2, profile="desk", rng=11)
    b = approximate_count(scalar, 4, 40, 0.2, profile="desk", rng=11)
    assert (a == b).all()


def test_good_estimate():
    assert list(is_good_estimate([4, 4, 4, 0], [1, 8, 9, 0])) == [True, True, False, True]


def test_hitting_set_example():
    assert hitting_set_size(64, 8, 4, 0.5) == 134


def test_hitting_set_full_weight():
    R = sample_hitting_set(16, 16, 1, 0.5, seed=0)
    assert R.size >= 1 and np.all(np.ones(16)[R] == 1)


def test_hitting_set_monte_carlo():
    l, t, k, delta = 128, 16, 4, 0.1
    rng = np.random.default_rng(1)
    misses = 0
    for trial in range(500):
        w = rng.integers(t // 8, 2 * t + 1, size=k)
        X = np.zeros((k, l), dtype=bool)
        for i in range(k):
            X[i, rng.choice(l, size=w[i], replace=False)] = True
        R = sample_hitting_set(l, t, k, delta, seed=rng)
        misses += not X[:, R].any(axis=1).all()
    assert within_rate(misses, 500, delta)


def test_hitting_set_rejects_t0():
    with pytest.raises(ParameterError):
        hitting_set_size(10, 0, 1, 0.1)
