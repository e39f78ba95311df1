"""Learning hidden integer matrices from matrix cut queries."""

from __future__ import annotations

import math

import numpy as np

from ._util import as_generator, ceil_log2, ceil_log2_ratio, ceil_log2_real, check_modulus, check_probability
from .counting import approximate_count
from .oracles import MatrixOracle
from .profiles import get_profile
from .quantum import compute_AY_mod, compute_Ay_mod
from .sketch import DECODE_CAPACITY, Sketch, SketchSpec, candidate_count, decode_rows


def sparse_columns(cols: int, M: int, d: int, delta: float) -> int:
    """Sketch width q = 4d ceil(log2(M l / d)) + ceil(log2(1/delta))."""
    return 4 * d * ceil_log2_ratio(M * cols, d) + ceil_log2_real(1 / delta)


def learn_dense(oracle: MatrixOracle, M: int) -> np.ndarray:
    """Read the whole matrix column by column (or row by row when wider).

    Costs min(k, l) * ceil(log2 M) matrix cut queries.
    """
    M = check_modulus(M)
    k, l = oracle.shape
    if k == 0 or l == 0:
        return np.zeros((k, l), dtype=np.int64)
    B = oracle if l <= k else oracle.T
    c = B.shape[1]
    with oracle.ledger.traced("dense", rows=k, cols=l, modulus=M, **oracle.cost_params()):
        out = compute_AY_mod(B, np.eye(c, dtype=np.int64), M)
    return out if l <= k else out.T


def learn_sparse_rows(oracle: MatrixOracle, M: int, d, delta: float, *, rng=None,
                      decoder="auto") -> np.ndarray:
    """Learn a matrix whose rows have at most d nonzeros.

    Parameters
    ----------
    oracle : MatrixOracle
    M : int
        Entries lie in [M].
    d : int or float
        Row sparsity bound; a real bound is floored.
    delta : float
        Failure budget of the sketch.
    rng : Generator or int, optional
        Draws the sketch.
    decoder : {"auto", "exhaustive", "trusted"}
        ``auto`` enumerates candidates when there are at most 10**7 of them
        and otherwise uses the hidden rows, checked against their signatures.

    Raises
    ------
    RecoveryFailure
        Decoding failed (ambiguous signature or a row violating the bound).
    """
    M = check_modulus(M)
    delta = check_probability(delta)
    k, l = oracle.shape
    d = int(math.floor(d))
    if k == 0 or l == 0 or d <= 0:
        return np.zeros((k, l), dtype=np.int64)
    if 2 * d >= l:
        return learn_dense(oracle, M)
    rng = as_generator(rng)
    q = sparse_columns(l, M, d, delta)
    Z = rng.integers(0, 2, size=(l, q), dtype=np.int64)
    with oracle.ledger.traced("sparse", rows=k, cols=l, modulus=M, d=d, delta=delta,
                              **oracle.cost_params()):
        S = compute_AY_mod(oracle, Z, M)
    if decoder == "auto":
        decoder = "exhaustive" if candidate_count(l, M, d) <= DECODE_CAPACITY else "trusted"
    sk = Sketch(SketchSpec(l, M, d, delta), Z)
    hidden = oracle.hidden() if decoder == "trusted" else None
    return decode_rows(S, sk, decoder, hidden)


class MatrixOrOracle:
    """k-OR oracle on the nonzero pattern of a hidden matrix.

    A query on column set S learns A chi_S mod ``modulus`` (one simulated
    subset-sum call) and thresholds each entry at 1. ``modulus`` must exceed
    every row sum so the modular reduction is harmless.
    """

    def __init__(self, oracle: MatrixOracle, modulus: int):
        self.oracle = oracle
        self.modulus = check_modulus(modulus)

    def __call__(self, S):
        y = np.zeros(self.oracle.shape[1], dtype=np.int64)
        y[np.asarray(S, dtype=np.int64)] = 1
        return compute_Ay_mod(self.oracle, y, self.modulus) > 0

    def batch(self, samples):
        samples = np.asarray(samples, dtype=np.int64)
        Y = np.zeros((samples.shape[0], self.oracle.shape[1]), dtype=np.float64)
        Y[np.arange(samples.shape[0])[:, None], samples] = 1.0
        vals = compute_AY_mod(self.oracle, Y.T, self.modulus, audit_columns=self.oracle.audit_checks,
                              binary=True)
        return (vals > 0).T


def approx_degrees(oracle: MatrixOracle, modulus: int, delta: float, *, profile="paper", rng=None):
    """Good estimate of the row degrees, served through ``MatrixOrOracle``."""
    profile = get_profile(profile)
    k, l = oracle.shape
    if k == 0 or l == 0:
        return np.zeros(k)
    with oracle.ledger.traced("approx_count", rows=k, cols=l, delta=delta, modulus=modulus,
                              repetition=profile.repetition, **oracle.cost_params()):
        return approximate_count(MatrixOrOracle(oracle, modulus), k, l, delta,
                                 profile=profile, rng=as_generator(rng))


def degree_sequence(oracle: MatrixOracle, M: int, delta: float, *, profile="paper", rng=None):
    """Row degrees of the hidden matrix.

    Exact for M = 2 (A 1 read modulo l + 1); otherwise a good estimate from
    approximate counting with modulus l (M - 1) + 1.
    """
    M = check_modulus(M)
    k, l = oracle.shape
    if k == 0 or l == 0:
        return np.zeros(k)
    if M == 2:
        with oracle.ledger.traced("exact_degree", rows=k, cols=l, modulus=l + 1,
                                  **oracle.cost_params()):
            return compute_Ay_mod(oracle, np.ones(l, dtype=np.int64), l + 1).astype(float)
    return approx_degrees(oracle, l * (M - 1) + 1, delta, profile=profile, rng=rng)


def learn_m_nonzeros(oracle: MatrixOracle, M: int, delta: float, *, profile="paper", rng=None,
                     return_info=False):
    """Learn a matrix whose nonzero count m is unknown.

    The degree estimate g gives the surrogate m_hat = sum(min(2 g, l)); rows
    with 0 < g <= d, d = sqrt(m_hat / log2(M l)), are learned as 2d-sparse rows,
    rows with g > d densely, rows with g = 0 are known to be zero.
    """
    M = check_modulus(M)
    delta = check_probability(delta)
    rng = as_generator(rng)
    k, l = oracle.shape
    A = np.zeros((k, l), dtype=np.int64)
    g = degree_sequence(oracle, M, delta / 2, profile=profile, rng=rng)
    m_hat = float(np.minimum(2 * g, l).sum())
    d = max(1, int(math.floor(math.sqrt(m_hat / max(math.log2(M * l), 1.0))))) if l else 1
    low = np.flatnonzero((g > 0) & (g <= d))
    high = np.flatnonzero(g > d)
    if low.size:
        A[low] = learn_sparse_rows(oracle.restrict(rows=low), M, 2 * d, delta / 2, rng=rng)
    if high.size:
        A[high] = learn_dense(oracle.restrict(rows=high), M)
    if return_info:
        return A, {"g": g, "m_hat": m_hat, "d": d, "low": low, "high": high}
    return A
