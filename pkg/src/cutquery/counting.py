"""OR-query tests, majority-vote approximate counting, and hitting-set sampling."""

from __future__ import annotations

import math

import numpy as np

from ._util import as_generator, ceil_log2, ceil_log2_real, check_probability
from .exceptions import ParameterError
from .profiles import get_profile


def r_test_success_prob(t: int, length: int, r: int) -> float:
    """Probability that r uniform draws with replacement hit a weight-t string."""
    if not 0 <= t <= length or length < 1 or r < 1:
        raise ParameterError("need 0 <= t <= length and r >= 1")
    return 1.0 - (1.0 - t / length) ** r


def repetitions(k: int, length: int, delta: float, profile="paper") -> int:
    """Majority-vote size a = C * ceil(log2(k (ceil(log2 l) + 1) / delta))."""
    delta = check_probability(delta)
    levels = ceil_log2(length) + 1
    return get_profile(profile).repetition * ceil_log2_real(k * levels / delta)


def or_query_count(k: int, length: int, delta: float, profile="paper") -> int:
    """Number of k-OR queries made by ``approximate_count``."""
    if k == 0 or length == 0:
        return 0
    return repetitions(k, length, delta, profile) * (ceil_log2(length) + 1)


class StringOrOracle:
    """k-OR oracle over explicit bit strings (rows of X), counting queries."""

    def __init__(self, X):
        self.X = np.asarray(X, dtype=np.int64)
        if self.X.ndim != 2:
            raise ParameterError("X must be a k x l array")
        self.queries = 0

    @property
    def shape(self):
        return self.X.shape

    def __call__(self, S):
        self.queries += 1
        S = np.asarray(S, dtype=np.int64)
        return self.X[:, S].sum(axis=1) > 0

    def batch(self, samples):
        """Answers for every row of ``samples`` (index arrays), shape (Q, k)."""
        ind = _indicators(samples, self.X.shape[1])
        self.queries += ind.shape[0]
        return (ind @ (self.X > 0).T.astype(np.float64)) > 0


def _indicators(samples, length):
    samples = np.asarray(samples, dtype=np.int64)
    ind = np.zeros((samples.shape[0], length), dtype=np.float64)
    if samples.size:
        ind[np.arange(samples.shape[0])[:, None], samples] = 1.0
    return ind


def approximate_count(or_oracle, k: int, length: int, delta: float, *, profile="paper",
                      rng=None) -> np.ndarray:
    """Estimate the Hamming weights of k hidden strings from k-OR queries.

    For each level j = 0..ceil(log2 l), runs ``a`` tests that OR over
    min(2^j, l) indices sampled with replacement. A string's estimate is l/2^s
    for the first level s at which a majority of its tests fire, or 0 if no
    level has a majority.

    Parameters
    ----------
    or_oracle : callable
        ``S -> bool array of length k``. If it has a ``batch`` method, all
        tests of one level are sent together.
    k, length : int
    delta : float
        Failure budget.
    profile : str or Profile
        Selects the repetition constant.
    rng : Generator or int, optional

    Returns
    -------
    numpy.ndarray
        Estimates b of shape (k,).
    """
    rng = as_generator(rng)
    b = np.zeros(k, dtype=np.float64)
    if k == 0 or length == 0:
        return b
    a = repetitions(k, length, delta, profile)
    need = -(-a // 2)
    done = np.zeros(k, dtype=bool)
    for j in range(ceil_log2(length) + 1):
        size = min(2 ** j, length)
        samples = rng.integers(0, length, size=(a, size))
        if hasattr(or_oracle, "batch"):
            hits = np.asarray(or_oracle.batch(samples), dtype=bool)
        else:
            hits = np.array([or_oracle(s) for s in samples], dtype=bool)
        majority = hits.sum(axis=0) >= need
        fresh = majority & ~done
        b[fresh] = length / 2 ** j
        done |= majority
    return b


def is_good_estimate(b, c) -> np.ndarray:
    """Componentwise b/4 <= c <= 2b."""
    b, c = np.asarray(b, dtype=float), np.asarray(c, dtype=float)
    return (b / 4 <= c) & (c <= 2 * b)


def hitting_set_size(length: int, t: float, k: int, delta: float) -> int:
    if t <= 0:
        raise ParameterError("t must be positive")
    check_probability(delta)
    return math.ceil(8 * length * math.log(k / delta) / t - 1e-12)


def sample_hitting_set(length: int, t: float, k: int, delta: float, seed=None) -> np.ndarray:
    """Indices drawn uniformly with replacement, ceil(8 l ln(k/delta) / t) of them."""
    size = hitting_set_size(length, t, k, delta)
    return as_generator(seed).integers(0, length, size=size)
