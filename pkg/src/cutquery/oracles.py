"""Charged oracle access to a hidden graph, reductions, and the query ledger."""

from __future__ import annotations

import json
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from ._util import as_generator, check_vertex_set, exact_matmul
from .exceptions import DisjointnessError, ModeError, ParameterError, SimulationIntegrityError

KINDS = ("cut", "additive", "matrix_cut", "disjoint_matrix_cut", "quantum_charged", "audit")
CHARGED = KINDS[:-1]
MODES = ("cut", "additive", "matrix")


@dataclass
class TraceRecord:
    """Counter deltas observed around one traced subroutine call."""

    op: str
    params: dict
    observed: dict = field(default_factory=dict)

    def to_dict(self):
        return {"op": self.op, "params": dict(self.params), "observed": dict(self.observed)}


class QueryLedger:
    """Per-run counters of charged queries plus uncharged audit probes.

    Subroutines with a closed-form cost wrap their queries in ``traced`` so the
    observed deltas can later be compared with the formula.
    """

    def __init__(self):
        self.counts = dict.fromkeys(KINDS, 0)
        self.records: list[TraceRecord] = []
        self._open = False

    def charge(self, kind: str, amount: int = 1) -> None:
        if kind not in self.counts:
            raise ParameterError(f"unknown counter {kind!r}")
        amount = int(amount)
        if amount < 0:
            raise ParameterError("counters never decrease")
        self.counts[kind] += amount

    def __getitem__(self, kind):
        return self.counts[kind]

    @property
    def cut(self):
        return self.counts["cut"]

    @property
    def additive(self):
        return self.counts["additive"]

    @property
    def matrix_cut(self):
        return self.counts["matrix_cut"]

    @property
    def disjoint_matrix_cut(self):
        return self.counts["disjoint_matrix_cut"]

    @property
    def quantum_charged(self):
        return self.counts["quantum_charged"]

    @property
    def audit(self):
        return self.counts["audit"]

    def snapshot(self) -> dict:
        return dict(self.counts)

    @contextmanager
    def traced(self, op: str, **params):
        """Record charged-counter deltas of the enclosed block under ``op``."""
        if self._open:
            raise SimulationIntegrityError(f"trace {op!r} opened inside another trace")
        before = self.snapshot()
        self._open = True
        try:
            yield
        finally:
            self._open = False
            delta = {k: self.counts[k] - before[k] for k in CHARGED if self.counts[k] != before[k]}
            self.records.append(TraceRecord(op, params, delta))

    def to_dict(self) -> dict:
        return dict(self.counts)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class OracleHandle:
    """Gatekeeper to a hidden graph.

    Parameters
    ----------
    graph : WeightedGraph
        Hidden instance. Any object exposing ``n``, ``cut``, ``additive`` and
        ``between`` works, which lets tests evaluate many graphs at once.
    mode : {"cut", "additive", "matrix"}
    ledger : QueryLedger, optional
    audit : bool
        When False no audit probe is ever issued.
    audit_checks : int
        Random consistency probes per simulated quantum call.
    audit_seed : int, optional
        Seed of the audit stream. Audits use their own stream so that turning
        them off never changes the algorithm's random choices.
    """

    def __init__(self, graph, mode="cut", ledger=None, *, audit=True, audit_checks=2, audit_seed=0):
        if mode not in MODES:
            raise ParameterError(f"mode must be one of {MODES}, got {mode!r}")
        self._graph = graph
        self.mode = mode
        self.ledger = QueryLedger() if ledger is None else ledger
        self.audit = bool(audit)
        self.audit_checks = int(audit_checks) if audit else 0
        self.audit_rng = as_generator(audit_seed)

    @property
    def n(self) -> int:
        return self._graph.n

    def _need(self, mode):
        if self.mode != mode:
            raise ModeError(f"{mode} query on a {self.mode}-mode handle")

    def cut_query(self, S) -> int:
        self._need("cut")
        S = check_vertex_set(S, self.n)
        self.ledger.charge("cut")
        return self._graph.cut(S)

    def additive_query(self, S) -> int:
        self._need("additive")
        S = check_vertex_set(S, self.n)
        self.ledger.charge("additive")
        return self._graph.additive(S)

    def matrix_cut_query(self, X, Y) -> int:
        self._need("matrix")
        X, Y = check_vertex_set(X, self.n), check_vertex_set(Y, self.n)
        self.ledger.charge("matrix_cut")
        return self._graph.between(X, Y)

    # -- privileged access for the simulator and for audits

    def privileged_graph(self):
        """The hidden instance. Only simulator shortcuts and audits may use it."""
        return self._graph

    def audit_cuts(self, X: np.ndarray) -> np.ndarray:
        """Uncharged cut values for each 0/1 row of ``X`` (shape Q x n)."""
        X = np.atleast_2d(X)
        self.ledger.charge("audit", X.shape[0])
        A = self._graph.adjacency()
        return np.sum(exact_matmul(X, A) * (1 - X), axis=1)

    def audit_disjoint(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Uncharged w(X, Y) for row pairs, evaluated through three cut values."""
        X, Y = np.atleast_2d(X), np.atleast_2d(Y)
        if np.any(X * Y):
            raise DisjointnessError("audit probe with overlapping sets")
        c = self.audit_cuts(np.vstack([X, Y, X + Y]))
        q = X.shape[0]
        return (c[:q] + c[q:2 * q] - c[2 * q:]) // 2

    def audit_bilinear(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Uncharged chi_x^T A chi_y for row pairs."""
        X, Y = np.atleast_2d(X), np.atleast_2d(Y)
        self.ledger.charge("audit", X.shape[0])
        return np.sum(exact_matmul(X, self._graph.adjacency()) * Y, axis=1)


# ---------------------------------------------------------------- reductions

def _pair(h, X, Y):
    return check_vertex_set(X, h.n), check_vertex_set(Y, h.n)


def disjoint_matrix_cut_via_cut(h: OracleHandle, X, Y) -> int:
    """w(X, Y) for disjoint X, Y from three cut queries."""
    X, Y = _pair(h, X, Y)
    if X & Y:
        raise DisjointnessError("X and Y must be disjoint")
    cx = h.cut_query(X)
    cy = h.cut_query(Y)
    cxy = h.cut_query(X | Y)
    h.ledger.charge("disjoint_matrix_cut")
    return (cx + cy - cxy) // 2


def disjoint_matrix_cut_via_additive(h: OracleHandle, X, Y) -> int:
    """w(X, Y) for disjoint X, Y from three additive queries."""
    X, Y = _pair(h, X, Y)
    if X & Y:
        raise DisjointnessError("X and Y must be disjoint")
    return h.additive_query(X | Y) - h.additive_query(X) - h.additive_query(Y)


def matrix_cut_via_additive(h: OracleHandle, X, Y) -> int:
    """chi_X^T A chi_Y for arbitrary X, Y from five additive queries."""
    X, Y = _pair(h, X, Y)
    xm, ym = X - Y, Y - X
    a_sym = h.additive_query(xm | ym)
    a_x = h.additive_query(X)
    a_y = h.additive_query(Y)
    a_xm = h.additive_query(xm)
    a_ym = h.additive_query(ym)
    return a_sym + a_x + a_y - 2 * a_xm - 2 * a_ym


def cut_via_additive(h: OracleHandle, S) -> int:
    """c(S) from three additive queries."""
    S = check_vertex_set(S, h.n)
    rest = frozenset(range(h.n)) - S
    return h.additive_query(range(h.n)) - h.additive_query(S) - h.additive_query(rest)


def _groups(groups, n):
    return [check_vertex_set(g, n) for g in groups]


def biadjacency_cut_query(h: OracleHandle, left, right, x, y) -> int:
    """x^T B y for the biadjacency B between the groups in ``left`` and ``right``.

    ``left`` and ``right`` are lists of vertex sets (singletons for plain
    vertices). Costs three cut queries.
    """
    left, right = _groups(left, h.n), _groups(right, h.n)
    L = frozenset().union(*left) if left else frozenset()
    R = frozenset().union(*right) if right else frozenset()
    if L & R:
        raise DisjointnessError("left and right groups overlap")
    x, y = np.asarray(x), np.asarray(y)
    if x.shape != (len(left),) or y.shape != (len(right),):
        raise ParameterError("x and y must index the left and right groups")
    X = frozenset().union(*(g for g, b in zip(left, x) if b))
    Y = frozenset().union(*(g for g, b in zip(right, y) if b))
    return disjoint_matrix_cut_via_cut(h, X, Y)


# ---------------------------------------------------------------- matrix oracles

class MatrixOracle:
    """Bilinear access to a hidden integer matrix.

    Subclasses fix the ledger counter (``kind``) and the number of primitive
    queries one matrix cut query costs (``unit``).
    """

    kind = "matrix_cut"
    unit = 1
    disjoint = False

    def __init__(self, shape, ledger, audit_rng, audit_checks):
        self.shape = (int(shape[0]), int(shape[1]))
        self.ledger = ledger
        self.audit_rng = audit_rng
        self.audit_checks = audit_checks

    def charge(self, count: int) -> None:
        """Bill ``count`` matrix cut queries made by a simulated quantum routine."""
        self.ledger.charge(self.kind, self.unit * count)
        if self.disjoint:
            self.ledger.charge("disjoint_matrix_cut", count)

    def query(self, x, y) -> int:
        raise NotImplementedError

    def hidden(self) -> np.ndarray:
        raise NotImplementedError

    def audit_many(self, X, Y) -> np.ndarray:
        raise NotImplementedError

    def cost_params(self):
        return {"kind": self.kind, "unit": self.unit}

    @property
    def T(self):
        return TransposedOracle(self)

    def restrict(self, rows=None, cols=None):
        return SubmatrixOracle(self, rows, cols)


class ExplicitMatrixOracle(MatrixOracle):
    """Matrix given in the clear, one matrix_cut charge per query."""

    def __init__(self, A, ledger=None, *, audit_checks=2, audit_seed=0):
        A = np.asarray(A, dtype=np.int64)
        if A.ndim != 2 or np.any(A < 0):
            raise ParameterError("A must be a non-negative integer matrix")
        super().__init__(A.shape, QueryLedger() if ledger is None else ledger,
                         as_generator(audit_seed), audit_checks)
        self._A = A

    def query(self, x, y) -> int:
        self.ledger.charge("matrix_cut")
        return int(exact_matmul(exact_matmul(np.asarray(x)[None, :], self._A), np.asarray(y))[0])

    def hidden(self):
        return self._A

    def audit_many(self, X, Y):
        X, Y = np.atleast_2d(X), np.atleast_2d(Y)
        self.ledger.charge("audit", X.shape[0])
        return np.sum(exact_matmul(X, self._A) * Y, axis=1)


class AdjacencyOracle(MatrixOracle):
    """The adjacency matrix of the hidden graph.

    On an additive handle each matrix cut query costs five additive queries;
    on a matrix handle it is a primitive.
    """

    def __init__(self, h: OracleHandle):
        if h.mode == "cut":
            raise ModeError("general matrix cut queries on A_G need an additive or matrix handle")
        super().__init__((h.n, h.n), h.ledger, h.audit_rng, h.audit_checks)
        self.handle = h
        if h.mode == "additive":
            self.kind, self.unit = "additive", 5

    def query(self, x, y) -> int:
        X = np.flatnonzero(np.asarray(x))
        Y = np.flatnonzero(np.asarray(y))
        if self.handle.mode == "additive":
            return matrix_cut_via_additive(self.handle, X, Y)
        return self.handle.matrix_cut_query(X, Y)

    def hidden(self):
        return self.handle.privileged_graph().adjacency()

    def audit_many(self, X, Y):
        return self.handle.audit_bilinear(X, Y)


class BiadjacencyOracle(MatrixOracle):
    """Biadjacency between disjoint groups of vertices (supervertices).

    Entry (i, j) is the total weight between ``left[i]`` and ``right[j]``.
    """

    def __init__(self, h: OracleHandle, left, right):
        left, right = _groups(left, h.n), _groups(right, h.n)
        L = frozenset().union(*left) if left else frozenset()
        R = frozenset().union(*right) if right else frozenset()
        if L & R or sum(map(len, left)) != len(L) or sum(map(len, right)) != len(R):
            raise DisjointnessError("biadjacency groups must be pairwise disjoint")
        super().__init__((len(left), len(right)), h.ledger, h.audit_rng, h.audit_checks)
        self.handle = h
        self.left, self.right = left, right
        self.kind, self.unit = {"cut": ("cut", 3), "additive": ("additive", 3),
                                "matrix": ("matrix_cut", 1)}[h.mode]
        self.disjoint = h.mode == "cut"
        self._PL = self._membership(left)
        self._PR = self._membership(right)
        self._B = None

    def _membership(self, groups):
        P = np.zeros((self.handle.n, len(groups)), dtype=np.int64)
        for i, g in enumerate(groups):
            if g:
                P[list(g), i] = 1
        return P

    def query(self, x, y) -> int:
        x, y = np.asarray(x), np.asarray(y)
        X = frozenset().union(*(g for g, b in zip(self.left, x) if b))
        Y = frozenset().union(*(g for g, b in zip(self.right, y) if b))
        if self.handle.mode == "cut":
            return disjoint_matrix_cut_via_cut(self.handle, X, Y)
        if self.handle.mode == "additive":
            return disjoint_matrix_cut_via_additive(self.handle, X, Y)
        return self.handle.matrix_cut_query(X, Y)

    def hidden(self):
        if self._B is None:
            A = self.handle.privileged_graph().adjacency()
            self._B = exact_matmul(exact_matmul(self._PL.T, A), self._PR)
            self._B.setflags(write=False)
        return self._B

    def audit_many(self, X, Y):
        X, Y = np.atleast_2d(X), np.atleast_2d(Y)
        return self.handle.audit_disjoint(exact_matmul(X, self._PL.T), exact_matmul(Y, self._PR.T))


class TransposedOracle(MatrixOracle):
    def __init__(self, parent: MatrixOracle):
        super().__init__(parent.shape[::-1], parent.ledger, parent.audit_rng, parent.audit_checks)
        self.parent = parent

    def charge(self, count):
        self.parent.charge(count)

    def cost_params(self):
        return self.parent.cost_params()

    def query(self, x, y):
        return self.parent.query(y, x)

    def hidden(self):
        return self.parent.hidden().T

    def audit_many(self, X, Y):
        return self.parent.audit_many(Y, X)


class SubmatrixOracle(MatrixOracle):
    """Rows and columns of a parent oracle, selected by index arrays."""

    def __init__(self, parent: MatrixOracle, rows=None, cols=None):
        k, l = parent.shape
        self.rows = np.arange(k) if rows is None else np.asarray(rows, dtype=np.int64)
        self.cols = np.arange(l) if cols is None else np.asarray(cols, dtype=np.int64)
        super().__init__((self.rows.size, self.cols.size), parent.ledger,
                         parent.audit_rng, parent.audit_checks)
        self.parent = parent

    def charge(self, count):
        self.parent.charge(count)

    def cost_params(self):
        return self.parent.cost_params()

    def _lift(self, x, idx, size):
        x = np.atleast_2d(x)
        out = np.zeros((x.shape[0], size), dtype=np.int64)
        out[:, idx] = x
        return out

    def query(self, x, y):
        X = self._lift(x, self.rows, self.parent.shape[0])[0]
        Y = self._lift(y, self.cols, self.parent.shape[1])[0]
        return self.parent.query(X, Y)

    def hidden(self):
        return self.parent.hidden()[np.ix_(self.rows, self.cols)]

    def audit_many(self, X, Y):
        return self.parent.audit_many(self._lift(X, self.rows, self.parent.shape[0]),
                                      self._lift(Y, self.cols, self.parent.shape[1]))
