import itertools
import json

import numpy as np
import pytest
from conftest import K, P, graph_and_subset, graphs
from hypothesis import given
from hypothesis import strategies as st

from cutquery import (AdjacencyOracle, BiadjacencyOracle, DisjointnessError, ExplicitMatrixOracle,
                      ModeError, OracleHandle, QueryLedger, SimulationIntegrityError,
                      WeightedGraph, biadjacency_cut_query, cut_via_additive,
                      disjoint_matrix_cut_via_cut, matrix_cut_via_additive)
from cutquery.oracles import disjoint_matrix_cut_via_additive


def test_cut_query_charges():
    h = OracleHandle(P(3))
    assert h.cut_query({1}) == 2
    assert h.ledger.cut == 1
    assert h.cut_query({0, 1, 2}) == 0


def test_cut_query_weighted_triangle():
    assert OracleHandle(K(3, 5)).cut_query({0}) == 10


def test_mode_errors():
    with pytest.raises(ModeError):
        OracleHandle(P(3), "cut").additive_query({0})
    with pytest.raises(ModeError):
        OracleHandle(P(3), "additive").cut_query({0})
    with pytest.raises(ModeError):
        OracleHandle(P(3), "cut").matrix_cut_query({0}, {1})


def test_additive_and_matrix_queries():
    h = OracleHandle(K(3), "additive")
    assert h.additive_query({0, 1, 2}) == 3 and h.ledger.additive == 1
    m = OracleHandle(P(3), "matrix")
    assert m.matrix_cut_query({0}, {1}) == 1 and m.ledger.matrix_cut == 1


def test_disjoint_via_cut_examples():
    h = OracleHandle(P(3))
    assert disjoint_matrix_cut_via_cut(h, {0}, {2}) == 0
    assert disjoint_matrix_cut_via_cut(h, {0}, {1}) == 1
    assert disjoint_matrix_cut_via_cut(h, set(), {1}) == 0
    assert h.ledger.cut == 9 and h.ledger.disjoint_matrix_cut == 3
    with pytest.raises(DisjointnessError):
        disjoint_matrix_cut_via_cut(h, {0, 1}, {1})


def test_matrix_cut_via_additive_examples():
    h = OracleHandle(K(3), "additive")
    assert matrix_cut_via_additive(h, {0, 1}, {1, 2}) == 3
    assert matrix_cut_via_additive(h, set(), set()) == 0
    h = OracleHandle(P(3), "additive")
    assert matrix_cut_via_additive(h, {0, 1, 2}, {0, 1, 2}) == 4
    assert h.ledger.additive == 5


def test_cut_via_additive_examples():
    assert cut_via_additive(OracleHandle(K(3), "additive"), {0}) == 2
    assert cut_via_additive(OracleHandle(K(3), "additive"), set()) == 0
    assert cut_via_additive(OracleHandle(P(3), "additive"), {1}) == 2


def test_biadjacency_examples():
    h = OracleHandle(P(3))
    assert biadjacency_cut_query(h, [{0}], [{1}, {2}], [1], [1, 1]) == 1
    assert biadjacency_cut_query(h, [{0}], [{1}, {2}], [0], [1, 1]) == 0
    h4 = OracleHandle(P(4))
    assert biadjacency_cut_query(h4, [{0, 1}], [{2, 3}], [1], [1]) == 1


@given(graph_and_subset(max_n=6), st.data())
def test_reductions_exact(gs, data):
    G, X = gs
    A = G.adjacency()
    Y = set(data.draw(st.sets(st.integers(0, G.n - 1))))
    x = np.isin(np.arange(G.n), list(X)).astype(int)
    y = np.isin(np.arange(G.n), list(Y)).astype(int)
    ha = OracleHandle(G, "additive")
    assert matrix_cut_via_additive(ha, X, Y) == int(x @ A @ y)
    assert ha.ledger.additive == 5
    assert cut_via_additive(ha, X) == G.cut(X)
    assert ha.ledger.additive == 8
    Yd = Y - X
    hc = OracleHandle(G, "cut")
    assert disjoint_matrix_cut_via_cut(hc, X, Yd) == G.between(X, Yd)
    assert hc.ledger.cut == 3 and hc.ledger.disjoint_matrix_cut == 1
    ha2 = OracleHandle(G, "additive")
    assert disjoint_matrix_cut_via_additive(ha2, X, Yd) == G.between(X, Yd)
    assert ha2.ledger.additive == 3


@given(graphs(max_n=6), st.integers(0, 2 ** 16))
def test_biadjacency_oracle_matches_hidden(G, seed):
    rng = np.random.default_rng(seed)
    perm = rng.permutation(G.n)
    cut = rng.integers(0, G.n + 1)
    left = [{int(v)} for v in perm[:cut]]
    right = [{int(v)} for v in perm[cut:]]
    for mode, kind, unit in [("cut", "cut", 3), ("additive", "additive", 3), ("matrix", "matrix_cut", 1)]:
        h = OracleHandle(G, mode)
        B = BiadjacencyOracle(h, left, right)
        assert (kind, unit) == (B.kind, B.unit)
        x = rng.integers(0, 2, len(left))
        y = rng.integers(0, 2, len(right))
        want = sum(G.weight(min(u, v), max(u, v))
                   for (a,), bx in zip(left, x) if bx for (b,), by in zip(right, y) if by
                   for u, v in [(a, b)])
        assert B.query(x, y) == want
        assert h.ledger[kind] == unit
        assert B.hidden().shape == (len(left), len(right))


@given(graphs(max_n=6))
def test_adjacency_oracle(G):
    ha = OracleHandle(G, "additive")
    A = AdjacencyOracle(ha)
    assert A.unit == 5 and A.kind == "additive"
    x = np.ones(G.n, dtype=int)
    assert A.query(x, x) == 2 * G.total_weight
    assert ha.ledger.additive == 5
    assert (A.hidden() == G.adjacency()).all()
    with pytest.raises(ModeError):
        AdjacencyOracle(OracleHandle(G, "cut"))


def test_biadjacency_rejects_overlap():
    with pytest.raises(DisjointnessError):
        BiadjacencyOracle(OracleHandle(P(3)), [{0, 1}], [{1, 2}])


def test_explicit_oracle_and_restrict():
    A = np.arange(12).reshape(3, 4) % 3
    o = ExplicitMatrixOracle(A)
    assert o.query(np.array([1, 0, 1]), np.array([0, 1, 1, 0])) == int(A[[0, 2]][:, [1, 2]].sum())
    assert o.ledger.matrix_cut == 1
    sub = o.restrict(rows=[2], cols=[0, 3])
    assert (sub.hidden() == A[[2]][:, [0, 3]]).all()
    assert (o.T.hidden() == A.T).all()


def test_ledger_json_and_trace():
    led = QueryLedger()
    with led.traced("dense", rows=2):
        led.charge("cut", 6)
        led.charge("audit", 1)
    d = json.loads(led.to_json())
    assert set(d) == {"cut", "additive", "matrix_cut", "disjoint_matrix_cut", "quantum_charged", "audit"}
    assert d["cut"] == 6
    assert led.records[0].op == "dense" and led.records[0].observed["cut"] == 6
    assert "audit" not in led.records[0].observed or led.records[0].observed["audit"] == 0


def test_nested_traces_rejected():
    led = QueryLedger()
    with pytest.raises(SimulationIntegrityError):
        with led.traced("a"):
            with led.traced("b"):
                pass


def test_ledger_rejects_bad_charges():
    led = QueryLedger()
    with pytest.raises(Exception):
        led.charge("bogus")
    with pytest.raises(Exception):
        led.charge("cut", -1)


def test_audit_probes_are_uncharged():
    G = WeightedGraph(4, {(0, 1): 2, (1, 2): 1, (2, 3): 3})
    h = OracleHandle(G)
    X = np.array([[1, 0, 0, 0], [0, 1, 1, 0]])
    assert list(h.audit_cuts(X)) == [G.cut({0}), G.cut({1, 2})]
    Y = np.array([[0, 1, 0, 0], [0, 0, 0, 1]])
    assert list(h.audit_disjoint(X, Y)) == [2, 3]
    assert h.ledger.cut == 0 and h.ledger.audit > 0
