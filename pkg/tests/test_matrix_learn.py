import math

import numpy as np
import pytest
from _stats import within_rate
from conftest import K, P
from hypothesis import given
from hypothesis import strategies as st

from cutquery import (AdjacencyOracle, DecodingAmbiguity, ExplicitMatrixOracle, OracleHandle,
                      RecoveryFailure, degree_sequence, learn_dense, learn_m_nonzeros,
                      learn_sparse_rows, verify_ledger)
from cutquery.counting import is_good_estimate
from cutquery.matrix_learn import approx_degrees, sparse_columns


def test_dense_zero():
    o = ExplicitMatrixOracle(np.zeros((3, 3), dtype=int))
    assert not learn_dense(o, 2).any()
    assert o.ledger.matrix_cut == 3


def test_dense_path_adjacency():
    o = AdjacencyOracle(OracleHandle(P(3), "matrix"))
    assert (learn_dense(o, 2) == P(3).adjacency()).all()
    assert o.ledger.matrix_cut == 3


def test_dense_wide_charge():
    A = np.random.default_rng(0).integers(0, 4, size=(4, 7))
    o = ExplicitMatrixOracle(A)
    assert (learn_dense(o, 4) == A).all()
    assert o.ledger.matrix_cut == 8
    assert verify_ledger(o.ledger).ok


@given(st.integers(1, 8), st.integers(1, 8), st.integers(2, 10), st.integers(0, 10 ** 6))
def test_dense_exact(k, l, M, seed):
    A = np.random.default_rng(seed).integers(0, M, size=(k, l))
    o = ExplicitMatrixOracle(A, audit_seed=seed)
    assert (learn_dense(o, M) == A).all()
    assert o.ledger.matrix_cut == min(k, l) * math.ceil(math.log2(M))


def test_sparse_columns_formula():
    assert sparse_columns(8, 2, 1, 0.25) == 4 * 4 + 2
    assert sparse_columns(128, 2, 2, 0.1) == 8 * 7 + 4


def test_sparse_permutation_rate():
    fails = 0
    for seed in range(400):
        rng = np.random.default_rng(seed)
        A = np.eye(8, dtype=int)[rng.permutation(8)]
        o = ExplicitMatrixOracle(A, audit_seed=seed)
        try:
            ok = (learn_sparse_rows(o, 2, 1, 0.25, rng=seed, decoder="exhaustive") == A).all()
        except DecodingAmbiguity:
            ok = False
        fails += not ok
        assert o.ledger.matrix_cut == sparse_columns(8, 2, 1, 0.25)
    assert within_rate(fails, 400, 0.25)


def test_sparse_falls_back_to_dense():
    A = np.random.default_rng(2).integers(0, 2, size=(5, 6))
    o1, o2 = ExplicitMatrixOracle(A), ExplicitMatrixOracle(A)
    assert (learn_sparse_rows(o1, 2, 3, 0.1, rng=0) == learn_dense(o2, 2)).all()
    assert o1.ledger.to_dict() == o2.ledger.to_dict()


def test_sparse_zero_budget():
    o = ExplicitMatrixOracle(np.zeros((3, 5), dtype=int))
    assert not learn_sparse_rows(o, 2, 0, 0.1).any()
    assert o.ledger.matrix_cut == 0


def test_sparse_violated_promise_is_a_failure():
    A = np.zeros((2, 40), dtype=int)
    A[0, :6] = 1
    with pytest.raises(RecoveryFailure):
        learn_sparse_rows(ExplicitMatrixOracle(A), 2, 1, 0.1, rng=0)


def test_degree_sequence_exact_binary():
    o = AdjacencyOracle(OracleHandle(K(3), "matrix"))
    assert list(degree_sequence(o, 2, 0.1)) == [2, 2, 2]
    assert o.ledger.matrix_cut == 2


def test_degree_sequence_zero():
    o = ExplicitMatrixOracle(np.zeros((4, 5), dtype=int))
    assert not degree_sequence(o, 3, 0.1, rng=0).any()


def test_degree_estimate_rate():
    bad = 0
    for seed in range(500):
        rng = np.random.default_rng(seed)
        A = rng.integers(0, 3, size=(4, 8))
        g = degree_sequence(ExplicitMatrixOracle(A, audit_seed=seed), 3, 0.1, profile="desk", rng=seed)
        bad += not is_good_estimate(g, np.count_nonzero(A, axis=1)).all()
    assert bad <= 50


def test_approx_degrees_ledger():
    A = np.random.default_rng(1).integers(0, 2, size=(6, 20))
    o = ExplicitMatrixOracle(A)
    approx_degrees(o, 21, 0.1, profile="desk", rng=0)
    assert verify_ledger(o.ledger).ok


def test_m_nonzeros_single_entry():
    A = np.zeros((6, 9), dtype=int)
    A[2, 7] = 1
    o = ExplicitMatrixOracle(A)
    got, info = learn_m_nonzeros(o, 2, 0.1, rng=0, return_info=True)
    assert (got == A).all()
    assert info["high"].size == 0
    assert verify_ledger(o.ledger).ok
    A[2, 7] = 3
    o = ExplicitMatrixOracle(A)
    assert (learn_m_nonzeros(o, 4, 0.1, profile="desk", rng=0) == A).all()
    assert verify_ledger(o.ledger).ok


def test_m_nonzeros_zero_matrix():
    o = ExplicitMatrixOracle(np.zeros((5, 5), dtype=int))
    assert not learn_m_nonzeros(o, 2, 0.1, rng=0).any()
    assert o.ledger.matrix_cut == math.ceil(math.log2(5 + 1))  # only the degree read


def test_m_nonzeros_rate():
    fails = 0
    for seed in range(300):
        rng = np.random.default_rng(seed)
        A = np.zeros(256, dtype=int)
        A[rng.choice(256, size=8, replace=False)] = 1
        A = A.reshape(16, 16)
        o = ExplicitMatrixOracle(A, audit_seed=seed)
        try:
            ok = (learn_m_nonzeros(o, 2, 0.1, rng=seed) == A).all()
        except RecoveryFailure:
            ok = False
        fails += not ok
        assert verify_ledger(o.ledger).ok
    assert within_rate(fails, 300, 0.1)


def test_high_rows_bound():
    rng = np.random.default_rng(5)
    A = (rng.random((20, 30)) < 0.15).astype(int)
    m = int(A.sum())
    _, info = learn_m_nonzeros(ExplicitMatrixOracle(A), 2, 0.1, rng=1, return_info=True)
    assert info["high"].size <= 4 * m / info["d"]
