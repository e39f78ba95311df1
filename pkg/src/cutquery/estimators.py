"""scikit-learn style wrappers around the query algorithms.

Each estimator takes its hidden object in ``fit`` (a ``WeightedGraph``, an
``OracleHandle``, a matrix or a bit matrix), runs the charged algorithm and
exposes results and the ledger as trailing-underscore attributes.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._util import derive_rng
from .connectivity import connected_components
from .counting import StringOrOracle, approximate_count
from .forest import bipartite_from_forest, spanning_forest, test_acyclic
from .graph import WeightedGraph
from .graph_learn import learn_graph_additive, learn_graph_cut, learn_graph_cut_full
from .matrix_learn import learn_dense, learn_m_nonzeros, learn_sparse_rows
from .oracles import ExplicitMatrixOracle, OracleHandle
from .sketch import Sketch, SketchSpec, decode_rows, signature


def _seed(random_state, label):
    return derive_rng(0 if random_state is None else random_state, label)


def _handle(X, oracle, audit, random_state):
    if isinstance(X, OracleHandle):
        return X
    if not isinstance(X, WeightedGraph):
        X = WeightedGraph.from_adjacency(np.asarray(X))
    return OracleHandle(X, oracle, audit=audit, audit_seed=_seed(random_state, "audit"))


class ConnectedComponents(BaseEstimator):
    """Connected components of a hidden graph through cut queries.

    Attributes
    ----------
    components_ : list of list of int
    labels_ : ndarray of shape (n,)
        Index of each vertex's component.
    rounds_ : int
    ledger_ : QueryLedger
    """

    def __init__(self, profile="paper", oracle="cut", audit=True, random_state=None):
        self.profile = profile
        self.oracle = oracle
        self.audit = audit
        self.random_state = random_state

    def fit(self, X, y=None):
        h = _handle(X, self.oracle, self.audit, self.random_state)
        res = connected_components(h, profile=self.profile,
                                   rng=_seed(self.random_state, "algorithm:components"))
        self.components_ = res.components
        self.labels_ = np.empty(h.n, dtype=np.int64)
        for i, comp in enumerate(res.components):
            self.labels_[comp] = i
        self.rounds_ = res.rounds
        self.violations_ = res.violations
        self.ledger_ = h.ledger
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_


class SpanningForestFinder(BaseEstimator):
    """Spanning forest of a hidden graph, plus the bipartite and acyclic answers it implies.

    Attributes
    ----------
    forest_ : SpanningForest
    rounds_ : int
    ledger_ : QueryLedger
    """

    def __init__(self, profile="paper", oracle="cut", audit=True, random_state=None):
        self.profile = profile
        self.oracle = oracle
        self.audit = audit
        self.random_state = random_state

    def fit(self, X, y=None):
        h = _handle(X, self.oracle, self.audit, self.random_state)
        res = spanning_forest(h, profile=self.profile,
                              rng=_seed(self.random_state, "algorithm:forest"))
        self.forest_ = res.forest
        self.rounds_ = res.rounds
        self.ledger_ = h.ledger
        self._h = h
        return self

    def is_bipartite(self) -> bool:
        check_is_fitted(self, "forest_")
        return bipartite_from_forest(self._h, self.forest_)[0]

    def is_acyclic(self) -> bool:
        check_is_fitted(self, "forest_")
        return test_acyclic(self._h, forest=self.forest_)


class GraphLearner(BaseEstimator):
    """Recover every edge weight of a hidden graph.

    Parameters
    ----------
    method : {"full", "degree", "edges"}
        ``full`` reads each vertex row densely (cut oracle only); ``degree``
        uses a known max degree; ``edges`` adapts to the edge count.
    M : int, optional
        Exclusive weight bound; defaults to the graph's own bound.
    """

    def __init__(self, method="full", M=None, degree=None, delta=0.1, oracle="cut",
                 profile="paper", audit=True, random_state=None):
        self.method = method
        self.M = M
        self.degree = degree
        self.delta = delta
        self.oracle = oracle
        self.profile = profile
        self.audit = audit
        self.random_state = random_state

    def fit(self, X, y=None):
        h = _handle(X, self.oracle, self.audit, self.random_state)
        M = h.privileged_graph().M if self.M is None else self.M
        rng = _seed(self.random_state, "algorithm:learn")
        degree = self.degree if self.method == "degree" else None
        if h.mode == "cut" and self.method == "full":
            G = learn_graph_cut_full(h, M)
        elif h.mode == "cut":
            G = learn_graph_cut(h, M, degree=degree, delta=self.delta, profile=self.profile, rng=rng)
        else:
            G = learn_graph_additive(h, M, degree=degree, delta=self.delta, profile=self.profile,
                                     rng=rng)
        self.graph_ = G
        self.adjacency_ = G.adjacency()
        self.ledger_ = h.ledger
        return self

    def predict(self, pairs):
        """Learned weight of each (u, v) pair."""
        check_is_fitted(self, "graph_")
        return np.array([self.graph_.weight(int(u), int(v)) for u, v in pairs], dtype=np.int64)


class MatrixLearner(BaseEstimator):
    """Recover a hidden non-negative integer matrix with entries below M.

    Parameters
    ----------
    method : {"dense", "sparse", "adaptive"}
        ``sparse`` needs ``d``, a bound on nonzeros per row; ``adaptive``
        learns degrees first.
    """

    def __init__(self, M=2, method="adaptive", d=None, delta=0.1, profile="paper",
                 random_state=None):
        self.M = M
        self.method = method
        self.d = d
        self.delta = delta
        self.profile = profile
        self.random_state = random_state

    def fit(self, X, y=None):
        oracle = ExplicitMatrixOracle(X, audit_seed=_seed(self.random_state, "audit"))
        rng = _seed(self.random_state, "algorithm:matrix")
        if self.method == "dense":
            A = learn_dense(oracle, self.M)
        elif self.method == "sparse":
            if self.d is None:
                raise ValueError("method='sparse' needs d")
            A = learn_sparse_rows(oracle, self.M, self.d, self.delta, rng=rng)
        elif self.method == "adaptive":
            A = learn_m_nonzeros(oracle, self.M, self.delta, profile=self.profile, rng=rng)
        else:
            raise ValueError(f"unknown method {self.method!r}")
        self.matrix_ = np.asarray(A, dtype=np.int64)
        self.ledger_ = oracle.ledger
        return self


class ApproximateCounter(BaseEstimator, TransformerMixin):
    """Constant-factor Hamming weight estimates of the rows of a bit matrix.

    Attributes
    ----------
    estimates_ : ndarray of shape (k,)
    n_queries_ : int
        k-OR queries used.
    """

    def __init__(self, delta=0.1, profile="paper", random_state=None):
        self.delta = delta
        self.profile = profile
        self.random_state = random_state

    def fit(self, X, y=None):
        X = np.atleast_2d(np.asarray(X))
        oracle = StringOrOracle(X)
        self.estimates_ = approximate_count(oracle, X.shape[0], X.shape[1], self.delta,
                                            profile=self.profile,
                                            rng=_seed(self.random_state, "algorithm:count"))
        self.n_queries_ = oracle.queries
        return self

    def transform(self, X):
        return self.fit(X).estimates_


class SparseSketch(BaseEstimator, TransformerMixin):
    """Random 0/1 sketch mod M that identifies d-sparse vectors.

    ``transform`` maps rows to signatures; ``inverse_transform`` decodes them.
    """

    def __init__(self, M=2, d=1, delta=0.1, random_state=None):
        self.M = M
        self.d = d
        self.delta = delta
        self.random_state = random_state

    def fit(self, X, y=None):
        X = np.atleast_2d(np.asarray(X))
        spec = SketchSpec(X.shape[1], self.M, self.d, self.delta)
        self.sketch_ = Sketch.draw(spec, _seed(self.random_state, "sketch"))
        return self

    def transform(self, X):
        check_is_fitted(self, "sketch_")
        return signature(np.atleast_2d(np.asarray(X)), self.sketch_)

    def inverse_transform(self, S):
        check_is_fitted(self, "sketch_")
        return decode_rows(np.atleast_2d(np.asarray(S)), self.sketch_, "exhaustive")
