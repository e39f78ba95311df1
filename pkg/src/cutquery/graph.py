"""Weighted graphs, instance generators, reference answers and file IO."""

from __future__ import annotations

import io
import math
import os
from collections import deque
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from ._util import as_generator, bit, ceil_log2, check_vertex_set
from .exceptions import ParameterError

DENSE_LIMIT = 4096


class WeightedGraph:
    """Undirected graph on vertices 0..n-1 with positive integer weights.

    Parameters
    ----------
    n : int
        Number of vertices.
    weights : mapping or iterable, optional
        ``{(u, v): w}`` or an iterable of ``(u, v, w)`` triples. Zero weights
        are dropped, pairs are unordered.
    M : int, optional
        Exclusive weight bound. Defaults to ``max(2, max_weight + 1)``.
    """

    __slots__ = ("_n", "_M", "_weights", "_dense")

    def __init__(self, n, weights=None, M=None):
        if isinstance(n, bool) or int(n) != n or int(n) < 1:
            raise ParameterError(f"n must be a positive integer, got {n!r}")
        n = int(n)
        items = weights.items() if hasattr(weights, "items") else (
            (((t[0], t[1]), t[2]) for t in weights) if weights is not None else ())
        table = {}
        for (u, v), w in items:
            u, v, w = int(u), int(v), int(w)
            if u == v:
                raise ParameterError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"pair ({u}, {v}) outside 0..{n - 1}")
            if w < 0:
                raise ParameterError(f"negative weight {w} on ({u}, {v})")
            key = (u, v) if u < v else (v, u)
            if key in table:
                raise ParameterError(f"pair {key} given twice")
            if w:
                table[key] = w
        top = max(table.values(), default=0)
        if M is None:
            M = max(2, top + 1)
        elif int(M) < 2 or top > int(M) - 1:
            raise ParameterError(f"weights must lie in 1..M-1 with M >= 2 (M={M}, max={top})")
        self._n = n
        self._M = int(M)
        self._weights = dict(sorted(table.items()))
        self._dense = None

    @property
    def n(self) -> int:
        return self._n

    @property
    def M(self) -> int:
        return self._M

    @property
    def weights(self):
        return MappingProxyType(self._weights)

    @property
    def num_edges(self) -> int:
        return len(self._weights)

    @property
    def total_weight(self) -> int:
        return sum(self._weights.values())

    def edges(self):
        return list(self._weights)

    def weight(self, u, v) -> int:
        return self._weights.get((u, v) if u < v else (v, u), 0)

    def neighbors(self, v):
        return sorted({b if a == v else a for a, b in self._weights if v in (a, b)})

    def adjacency_lists(self):
        adj = [[] for _ in range(self._n)]
        for u, v in self._weights:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def adjacency(self) -> np.ndarray:
        """Dense symmetric adjacency matrix (cached, read-only)."""
        if self._dense is None:
            if self._n > DENSE_LIMIT:
                raise ParameterError(f"dense view limited to n <= {DENSE_LIMIT}")
            exact = (self._M - 1) * self._n * self._n < 2**62
            A = np.zeros((self._n, self._n), dtype=np.int64 if exact else object)
            for (u, v), w in self._weights.items():
                A[u, v] = A[v, u] = w
            A.setflags(write=False)
            self._dense = A
        return self._dense

    def cut(self, S) -> int:
        """Total weight of edges with exactly one endpoint in S."""
        S = S if isinstance(S, (set, frozenset)) else set(S)
        return sum(w for (u, v), w in self._weights.items() if (u in S) != (v in S))

    def additive(self, S) -> int:
        """Total weight of edges with both endpoints in S."""
        S = S if isinstance(S, (set, frozenset)) else set(S)
        return sum(w for (u, v), w in self._weights.items() if u in S and v in S)

    def between(self, X, Y) -> int:
        """Bilinear form chi_X^T A chi_Y (counts overlap pairs twice)."""
        X = X if isinstance(X, (set, frozenset)) else set(X)
        Y = Y if isinstance(Y, (set, frozenset)) else set(Y)
        tot = 0
        for (u, v), w in self._weights.items():
            tot += w * ((u in X and v in Y) + (v in X and u in Y))
        return tot

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self._n == other._n and self._weights == other._weights

    def __hash__(self):
        return hash((self._n, tuple(self._weights.items())))

    def __repr__(self):
        return f"WeightedGraph(n={self._n}, edges={len(self._weights)}, M={self._M})"

    @classmethod
    def from_adjacency(cls, A, M=None):
        A = np.asarray(A)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ParameterError("adjacency must be square")
        if np.any(A != A.T) or np.any(np.diag(A) != 0):
            raise ParameterError("adjacency must be symmetric with zero diagonal")
        us, vs = np.nonzero(np.triu(A, 1))
        return cls(A.shape[0], {(int(u), int(v)): int(A[u, v]) for u, v in zip(us, vs)}, M=M)


def cut_value(G: WeightedGraph, S) -> int:
    """Reference cut weight w(S, V \\ S); not a charged query."""
    return G.cut(check_vertex_set(S, G.n))


def additive_value(G: WeightedGraph, S) -> int:
    """Reference weight of edges inside S; not a charged query."""
    return G.additive(check_vertex_set(S, G.n))


# ---------------------------------------------------------------- generators

FAMILIES = ("empty", "path", "cycle", "matching", "complete", "two_cliques",
            "erdos_renyi", "d_regular", "weighted_random")


def generate(kind: str, n: int, seed=None, *, p=None, d=None, M=None) -> WeightedGraph:
    """Build an instance of a named family.

    Parameters
    ----------
    kind : str
        One of ``FAMILIES``.
    n : int
        Vertex count.
    seed : int or Generator, optional
        Only the random families consume randomness.
    p : float, optional
        Edge probability for ``erdos_renyi`` (default ``min(1, 2 ln n / n)``)
        and ``weighted_random`` (default 0.5).
    d : int, optional
        Degree for ``d_regular``.
    M : int, optional
        Exclusive weight bound for ``weighted_random``.
    """
    if isinstance(n, bool) or int(n) != n or int(n) < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    if p is not None and not 0.0 <= float(p) <= 1.0:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    E = {}
    if kind == "empty":
        pass
    elif kind == "path":
        E = {(i, i + 1): 1 for i in range(n - 1)}
    elif kind == "cycle":
        if n < 3:
            raise ParameterError("cycle needs n >= 3")
        E = {(i, i + 1): 1 for i in range(n - 1)}
        E[(0, n - 1)] = 1
    elif kind == "matching":
        E = {(i, i + 1): 1 for i in range(0, n - 1, 2)}
    elif kind == "complete":
        E = {(u, v): 1 for u in range(n) for v in range(u + 1, n)}
    elif kind == "two_cliques":
        if n < 2:
            raise ParameterError("two_cliques needs n >= 2")
        h = (n + 1) // 2
        E = {(u, v): 1 for u in range(n) for v in range(u + 1, n) if (u < h) == (v < h)}
    elif kind == "erdos_renyi":
        rng = as_generator(seed)
        p = min(1.0, 2 * math.log(n) / n) if p is None else float(p)
        iu, iv = np.triu_indices(n, 1)
        keep = rng.random(iu.size) < p
        E = {(int(u), int(v)): 1 for u, v in zip(iu[keep], iv[keep])}
    elif kind == "d_regular":
        if d is None or int(d) < 0 or int(d) >= max(n, 1) or (int(d) * n) % 2:
            raise ParameterError(f"d_regular needs 0 <= d < n with d*n even (d={d}, n={n})")
        import networkx as nx
        rng = as_generator(seed)
        H = nx.random_regular_graph(int(d), n, seed=int(rng.integers(0, 2**31)))
        E = {(min(u, v), max(u, v)): 1 for u, v in H.edges()}
    elif kind == "weighted_random":
        if M is None or int(M) < 2:
            raise ParameterError(f"weighted_random needs M >= 2, got {M}")
        rng = as_generator(seed)
        p = 0.5 if p is None else float(p)
        iu, iv = np.triu_indices(n, 1)
        keep = rng.random(iu.size) < p
        w = rng.integers(1, int(M), size=iu.size)
        E = {(int(u), int(v)): int(x) for u, v, x in zip(iu[keep], iv[keep], w[keep])}
        return WeightedGraph(n, E, M=int(M))
    else:
        raise ParameterError(f"unknown family {kind!r}; choose from {FAMILIES}")
    return WeightedGraph(n, E)


# ---------------------------------------------------------------- references

def reference_components(G: WeightedGraph):
    """Connected components by breadth-first search, sorted by least vertex."""
    adj = G.adjacency_lists()
    seen = [False] * G.n
    comps = []
    for s in range(G.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [s], deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


def _two_coloring(G):
    adj = G.adjacency_lists()
    color = [-1] * G.n
    for s in range(G.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return None
    return color


def reference_is_bipartite(G: WeightedGraph) -> bool:
    return _two_coloring(G) is not None


def reference_is_acyclic(G: WeightedGraph) -> bool:
    return G.num_edges == G.n - len(reference_components(G))


def canonical_partition(sets):
    """Sorted list of sorted vertex lists; the comparison form for partitions."""
    return sorted(sorted(int(v) for v in s) for s in sets)


# ---------------------------------------------------------------- splits, forests

@dataclass(frozen=True)
class BipartiteSplit:
    """Partition of a vertex universe by one bit of the vertex label."""

    bit_index: int
    left: frozenset
    right: frozenset

    @classmethod
    def from_labels(cls, j, universe):
        if j < 1:
            raise ParameterError("bit index starts at 1")
        universe = frozenset(universe)
        left = frozenset(v for v in universe if bit(v, j) == 0)
        return cls(j, left, universe - left)


def label_splits(n, universe=None):
    """All ceil(log2 n) label-bit splits of ``universe`` (default V)."""
    universe = range(n) if universe is None else universe
    return [BipartiteSplit.from_labels(j, universe) for j in range(1, ceil_log2(n) + 1)]


@dataclass
class SpanningForest:
    """One tree per component: its vertex set and its edge set."""

    trees: list = field(default_factory=list)

    @classmethod
    def from_pairs(cls, pairs):
        """Build from ``[(vertices, edges), ...]``, normalizing edge order."""
        trees = []
        for verts, edges in pairs:
            es = sorted((min(u, v), max(u, v)) for u, v in edges)
            trees.append((tuple(sorted(verts)), tuple(es)))
        trees.sort()
        return cls(trees)

    def edges(self):
        return sorted(e for _, es in self.trees for e in es)

    def components(self):
        return [list(v) for v, _ in self.trees]

    def to_dict(self):
        return {"trees": [[[int(u), int(v)] for u, v in es] for _, es in self.trees],
                "vertices": [[int(v) for v in vs] for vs, _ in self.trees]}


def check_forest(G: WeightedGraph, forest: SpanningForest):
    """List every violated forest-validity invariant (empty when valid)."""
    problems = []
    seen = set()
    for verts, edges in forest.trees:
        vs = set(verts)
        if vs & seen:
            problems.append(f"tree on {sorted(vs)[:4]}... overlaps another tree")
        seen |= vs
        for u, v in edges:
            if G.weight(u, v) <= 0:
                problems.append(f"edge ({u}, {v}) absent from the graph")
            if u not in vs or v not in vs:
                problems.append(f"edge ({u}, {v}) leaves its tree")
        if len(edges) != len(vs) - 1:
            problems.append(f"tree with {len(vs)} vertices has {len(edges)} edges")
        parent = {v: v for v in vs}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in edges:
            if u in parent and v in parent:
                ru, rv = find(u), find(v)
                if ru == rv:
                    problems.append(f"edge ({u}, {v}) closes a cycle")
                parent[ru] = rv
    if seen != set(range(G.n)):
        problems.append("trees do not cover the vertex set")
    if canonical_partition(forest.components()) != canonical_partition(reference_components(G)):
        problems.append("tree vertex sets differ from the connected components")
    return problems


# ---------------------------------------------------------------- file format

def format_graph(G: WeightedGraph) -> str:
    lines = [str(G.n), f"# M={G.M}"]
    lines += [f"{u} {v} {w}" for (u, v), w in G.weights.items()]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> WeightedGraph:
    n = None
    M = None
    E = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("M="):
                M = int(body[2:])
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 1:
                raise ParameterError(f"line {lineno}: expected the vertex count")
            n = int(parts[0])
            continue
        if len(parts) != 3:
            raise ParameterError(f"line {lineno}: expected 'u v w'")
        u, v, w = map(int, parts)
        if not (0 <= u < v) or w < 1:
            raise ParameterError(f"line {lineno}: need 0 <= u < v and w >= 1")
        E[(u, v)] = w
    if n is None:
        raise ParameterError("missing vertex count line")
    return WeightedGraph(n, E, M=M)


def write_graph(G: WeightedGraph, target) -> None:
    text = format_graph(G)
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w") as fh:
            fh.write(text)
    else:
        target.write(text)


def read_graph(source) -> WeightedGraph:
    if isinstance(source, (str, os.PathLike)):
        with open(source) as fh:
            return parse_graph(fh.read())
    if isinstance(source, io.IOBase) or hasattr(source, "read"):
        return parse_graph(source.read())
    raise ParameterError("read_graph needs a path or a file object")
