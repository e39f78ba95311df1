"""Exact-integer construction of two graphs that agree on a list of cut queries
but have different total weight."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import ParameterError, RankError, SolvableError
from .graph import WeightedGraph


def pair_order(n: int):
    """Pairs (u, v), u > v, in column-major strict-lower-triangle order."""
    return [(v, u) for u in range(n) for v in range(u + 1, n)]


def symvec(C):
    """Stack the strict lower triangle of a symmetric matrix column by column."""
    n = len(C)
    return [int(C[r][c]) for r, c in pair_order(n)]


def unsymvec(vec, n):
    if len(vec) != n * (n - 1) // 2:
        raise ParameterError("length must be n(n-1)/2")
    C = [[0] * n for _ in range(n)]
    for (r, c), x in zip(pair_order(n), vec):
        C[r][c] = C[c][r] = int(x)
    return C


def bareiss_det(M) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    A = [list(map(int, row)) for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for i in range(n - 1):
        if A[i][i] == 0:
            for r in range(i + 1, n):
                if A[r][i] != 0:
                    A[i], A[r] = A[r], A[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                A[r][c] = (A[r][c] * A[i][i] - A[r][i] * A[i][c]) // prev
        prev = A[i][i]
    return sign * A[n - 1][n - 1]


def adjugate(M):
    """Integer adjugate via signed cofactors, so adj(M) M = det(M) I."""
    n = len(M)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for r, row in enumerate(M) if r != i]
            adj[j][i] = (-1) ** (i + j) * bareiss_det(minor)
    return adj


def _columns(A):
    """Columns of an N x k matrix given as nested lists or a numpy array."""
    rows = [list(map(int, r)) for r in A]
    if not rows:
        return []
    return [list(c) for c in zip(*rows)]


def _gram(cols):
    return [[sum(a * b for a, b in zip(ci, cj)) for cj in cols] for ci in cols]


def fredholm_certificate(A, b):
    """Integer vector y = det(A^T A) b - A adj(A^T A) A^T b.

    Parameters
    ----------
    A : N x k 0/1 matrix with independent columns
    b : length-N 0/1 vector outside the column span of A

    Returns
    -------
    list of int
        y with y^T A = 0 and y^T b != 0.

    Raises
    ------
    RankError
        The columns of A are dependent.
    SolvableError
        b lies in the column span of A.
    """
    b = [int(x) for x in b]
    cols = _columns(A) if len(A) else []
    for c in cols:
        if len(c) != len(b):
            raise ParameterError("A and b have different row counts")
    G = _gram(cols)
    det = bareiss_det(G)
    if det == 0:
        raise RankError("columns of A are dependent")
    adj = adjugate(G) if cols else []
    Atb = [sum(x * y for x, y in zip(c, b)) for c in cols]
    coef = [sum(adj[i][j] * Atb[j] for j in range(len(cols))) for i in range(len(cols))]
    y = [det * b[r] - sum(coef[i] * cols[i][r] for i in range(len(cols))) for r in range(len(b))]
    if not any(y):
        raise SolvableError("b lies in the column span of A")
    return y


def fredholm_bound_holds(y, N: int, k: int) -> bool:
    """||y||_inf <= N^(k+1/2) k^(k/2), compared exactly through squares."""
    top = max((abs(v) for v in y), default=0)
    return top * top <= N ** (2 * k + 1) * k ** k


def query_column(n: int, X):
    """symvec of x xbar^T + xbar x^T: one for every pair split by X."""
    X = set(X)
    return [int((u in X) != (v in X)) for u, v in pair_order(n)]


def independent_columns(cols):
    """Greedy maximal independent subset (indices), skipping zero and repeated columns."""
    keep = []
    for i, c in enumerate(cols):
        if not any(c) or any(c == cols[j] for j in keep):
            continue
        if bareiss_det(_gram([cols[j] for j in keep] + [c])) != 0:
            keep.append(i)
    return keep


@dataclass
class AdversaryPair:
    G1: WeightedGraph
    G2: WeightedGraph
    y_hat: list
    m: int
    used: list

    def certificate(self, queries):
        n = self.G1.n
        N = n * (n - 1) // 2
        answers = [[self.G1.cut(set(X)), self.G2.cut(set(X))] for X in queries]
        return {
            "n": n,
            "queries": [sorted(int(v) for v in X) for X in queries],
            "query_answers": answers,
            "totals": [self.G1.total_weight, self.G2.total_weight],
            "m": self.m,
            "columns_used": self.used,
            "y_inf_norm": max((abs(v) for v in self.y_hat), default=0),
            "bound_ok": fredholm_bound_holds(self.y_hat, N, len(self.used)),
        }


def build_adversary_pair(n: int, queries) -> AdversaryPair:
    """Two weighted graphs with equal answers on ``queries`` and different totals.

    G1 has weight m = n^(2k+1) ceil(k^(k/2)) on every pair; G2 adds the
    certificate for the query columns against the all-ones functional.
    """
    n = int(n)
    queries = [set(int(v) for v in X) for X in queries]
    k = len(queries)
    if n < 2:
        raise ParameterError("need n >= 2")
    if not 2 * k < n:
        raise ParameterError(f"need k < n/2, got k={k}, n={n}")
    for X in queries:
        if any(not 0 <= v < n for v in X):
            raise ParameterError("query vertex out of range")
    pairs = pair_order(n)
    root = math.isqrt(k ** k)
    m = n ** (2 * k + 1) * (root if root * root == k ** k else root + 1)
    cols = [query_column(n, X) for X in queries]
    used = independent_columns(cols)
    if not used:
        y = [0] * len(pairs)
        y[0] = 1
    else:
        D = [list(r) for r in zip(*(cols[i] for i in used))]
        y = fredholm_certificate(D, [1] * len(pairs))
    w1 = {(v, u): m for u, v in pairs}
    w2 = {(v, u): m + y[t] for t, (u, v) in enumerate(pairs)}
    G1 = WeightedGraph(n, w1)
    G2 = WeightedGraph(n, w2)
    return AdversaryPair(G1, G2, y, m, used)
