import math

import numpy as np
import pytest
from conftest import K, P
from hypothesis import given
from hypothesis import strategies as st

from cutquery import (AdjacencyOracle, CapacityError, ExplicitMatrixOracle, OracleHandle,
                      QueryLedger, SimulationIntegrityError, compute_Ay_mod,
                      qft_learn_subset_sums, statevector_validate)
from cutquery.quantum import compute_AY_mod


def subset_oracle(x, M):
    x = np.asarray(x)
    return lambda S: int(x[list(S)].sum()) % M


@pytest.mark.parametrize("M,charge", [(2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4), (1024, 10)])
def test_charge_is_ceil_log2(M, charge):
    led = QueryLedger()
    x = np.zeros(4, dtype=int)
    assert (qft_learn_subset_sums(subset_oracle(x, M), 4, M, led) == 0).all()
    assert led.quantum_charged == charge


def test_recovers_example():
    led = QueryLedger()
    x = qft_learn_subset_sums(subset_oracle([1, 2, 0], 3), 3, 3, led)
    assert list(x) == [1, 2, 0]
    assert led.quantum_charged == 2 and led.cut == 0


@given(st.integers(2, 9), st.lists(st.integers(0, 100), min_size=0, max_size=10), st.integers(0, 99))
def test_recovers_any_vector(M, raw, seed):
    x = np.array(raw, dtype=int) % M
    led = QueryLedger()
    got = qft_learn_subset_sums(subset_oracle(x, M), len(x), M, led, rng=seed)
    assert (got == x).all()
    assert led.quantum_charged == math.ceil(math.log2(M))


def test_inconsistent_oracle_detected():
    calls = {"n": 0}

    def liar(S):
        calls["n"] += 1
        return 1 if len(S) > 1 else 0

    with pytest.raises(SimulationIntegrityError):
        qft_learn_subset_sums(liar, 6, 2, QueryLedger(), audit_checks=20, rng=0)


def test_Ay_examples():
    h = OracleHandle(P(3), "matrix")
    A = AdjacencyOracle(h)
    assert list(compute_Ay_mod(A, [0, 1, 0], 4)) == [1, 0, 1]
    assert list(compute_Ay_mod(A, [1, 0, 0], 4)) == [0, 1, 0]
    assert list(compute_Ay_mod(A, [0, 0, 0], 4)) == [0, 0, 0]
    K3 = AdjacencyOracle(OracleHandle(K(3), "matrix"))
    assert list(compute_Ay_mod(K3, [1, 1, 1], 8)) == [2, 2, 2]
    assert K3.ledger.quantum_charged == 3 and K3.ledger.matrix_cut == 3


def test_Ay_plain_function():
    A = np.array([[1, 2], [3, 0], [0, 1]])
    led = QueryLedger()
    got = compute_Ay_mod(lambda x, y: int(x @ A @ y), [1, 1], 4, led, k=3)
    assert list(got) == [3, 3, 1]
    assert led.quantum_charged == 2


@given(st.integers(1, 6), st.integers(1, 6), st.integers(2, 9), st.integers(0, 10 ** 6))
def test_AY_matches_matmul(k, l, M, seed):
    rng = np.random.default_rng(seed)
    A = rng.integers(0, M, size=(k, l))
    Y = rng.integers(0, 2, size=(l, 3))
    o = ExplicitMatrixOracle(A, audit_seed=seed)
    got = compute_AY_mod(o, Y, M)
    assert (got == (A @ Y) % M).all()
    assert o.ledger.matrix_cut == 3 * math.ceil(math.log2(M))
    assert o.ledger.quantum_charged == 3 * math.ceil(math.log2(M))


class _Corrupt(ExplicitMatrixOracle):
    def hidden(self):
        return self._A + 1


def test_AY_detects_corrupted_shortcut():
    o = _Corrupt(np.zeros((4, 4), dtype=int), audit_checks=4)
    with pytest.raises(SimulationIntegrityError):
        compute_AY_mod(o, np.eye(4, dtype=int), 2)


@pytest.mark.parametrize("x,M", [([1], 2), ([1, 0, 1], 2), ([2, 1], 3), ([3, 0, 2, 1], 4),
                                 ([0, 0, 0, 0, 0, 0], 2)])
def test_statevector_examples(x, M):
    assert statevector_validate(x, M)


@given(st.integers(1, 4), st.sampled_from([2, 3, 4]), st.data())
def test_statevector_random(k, M, data):
    x = data.draw(st.lists(st.integers(0, M - 1), min_size=k, max_size=k))
    assert statevector_validate(x, M)


def test_statevector_capacity():
    with pytest.raises(CapacityError):
        statevector_validate([0] * 7, 2)
    with pytest.raises(CapacityError):
        statevector_validate([0], 5)
