"""Reconstructing hidden graphs from additive or cut queries."""

from __future__ import annotations

import numpy as np

from ._util import as_generator, check_modulus, check_probability, spawn
from .exceptions import ModeError, RecoveryFailure, SimulationIntegrityError
from .graph import WeightedGraph, label_splits
from .matrix_learn import learn_dense, learn_m_nonzeros, learn_sparse_rows
from .oracles import AdjacencyOracle, BiadjacencyOracle, OracleHandle


def _graph_from_matrix(A, M):
    A = np.asarray(A)
    if np.any(A != A.T) or np.any(np.diag(A) != 0):
        raise RecoveryFailure("learned adjacency is not a symmetric loop-free matrix")
    return WeightedGraph.from_adjacency(A, M=M)


def learn_graph_additive(h: OracleHandle, M: int, *, degree=None, delta=0.1, profile="paper",
                         rng=None) -> WeightedGraph:
    """Learn the hidden graph through matrix cut queries on its adjacency matrix.

    With ``degree`` set, rows are learned as ``degree``-sparse vectors;
    otherwise the nonzero count is discovered from a degree estimate. Each
    matrix cut query costs five additive queries (one on a matrix handle).
    """
    M = check_modulus(M)
    delta = check_probability(delta)
    rng = as_generator(rng)
    A = AdjacencyOracle(h)
    if degree is not None:
        B = learn_sparse_rows(A, M, degree, delta, rng=rng)
    else:
        B = learn_m_nonzeros(A, M, delta, profile=profile, rng=rng)
    return _graph_from_matrix(B, M)


def learn_graph_cut_full(h: OracleHandle, M: int) -> WeightedGraph:
    """Learn every row of the adjacency matrix with 3 ceil(log2 M) cut queries each."""
    M = check_modulus(M)
    if h.mode != "cut":
        raise ModeError("learn_graph_cut_full needs a cut-mode handle")
    n = h.n
    A = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        others = [j for j in range(n) if j != i]
        row = learn_dense(BiadjacencyOracle(h, [{i}], [{j} for j in others]), M)
        A[i, others] = row[0]
    return _graph_from_matrix(A, M)


def learn_bipartite_cut(h: OracleHandle, left, right, M: int, *, degree=None, delta=0.1,
                        profile="paper", rng=None) -> np.ndarray:
    """Biadjacency between vertex lists ``left`` and ``right``.

    Every matrix cut query is answered with three cut queries.
    """
    M = check_modulus(M)
    delta = check_probability(delta)
    left, right = sorted(left), sorted(right)
    B = BiadjacencyOracle(h, [{u} for u in left], [{v} for v in right])
    if degree is not None:
        return learn_sparse_rows(B, M, degree, delta, rng=rng)
    return learn_m_nonzeros(B, M, delta, profile=profile, rng=rng)


def learn_graph_cut(h: OracleHandle, M: int, *, degree=None, delta=0.1, profile="paper",
                    rng=None) -> WeightedGraph:
    """Learn the graph as the union of its ceil(log2 n) label-bit bipartite graphs.

    Each split gets failure budget delta / r. A pair crossing several splits
    must be learned with the same weight in each of them.
    """
    M = check_modulus(M)
    delta = check_probability(delta)
    if h.mode != "cut":
        raise ModeError("learn_graph_cut needs a cut-mode handle")
    rng = as_generator(rng)
    n = h.n
    splits = label_splits(n)
    W = np.full((n, n), -1, dtype=np.int64)
    np.fill_diagonal(W, 0)
    for sp in splits:
        left, right = sorted(sp.left), sorted(sp.right)
        if not left or not right:
            continue
        B = learn_bipartite_cut(h, left, right, M, degree=degree, delta=delta / len(splits),
                                profile=profile, rng=spawn(rng, f"split-{sp.bit_index}"))
        block = W[np.ix_(left, right)]
        clash = (block >= 0) & (block != B)
        if np.any(clash):
            i, j = map(int, np.argwhere(clash)[0])
            raise SimulationIntegrityError(
                f"pair ({left[i]}, {right[j]}) learned with weights {block[i, j]} and {B[i, j]}")
        W[np.ix_(left, right)] = B
        W[np.ix_(right, left)] = B.T
    if np.any(W < 0):
        raise SimulationIntegrityError("some vertex pair is covered by no split")
    return _graph_from_matrix(W, M)
