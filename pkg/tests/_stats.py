"""Small exact binomial helpers for statistical assertions."""

import math


def binom_sf(k, n, p):
    """P[X >= k] for X ~ Binomial(n, p)."""
    return sum(math.comb(n, i) * p ** i * (1 - p) ** (n - i) for i in range(k, n + 1))


def within_rate(failures, trials, rate, alpha=0.01):
    """True unless ``failures`` is implausibly high for a true failure rate ``rate``."""
    return binom_sf(failures, trials, rate) > alpha
