"""Connected components from cut queries by repeated supervertex contraction."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from ._util import as_generator, bit, ceil_log2
from .exceptions import NonTerminationError
from .graph import canonical_partition
from .matrix_learn import approx_degrees, learn_sparse_rows
from .oracles import BiadjacencyOracle, OracleHandle
from .profiles import get_profile


def supervertex_modulus(n: int) -> int:
    """Modulus for supervertex biadjacency matrices; entries stay below n^2."""
    return max(2, n * n)


def approx_degree_sequence(h: OracleHandle, S, T, delta, *, profile="paper", rng=None):
    """Good estimate of the superdegrees deg_T(S_i)."""
    if not S:
        return np.zeros(0)
    if not T:
        return np.zeros(len(S))
    oracle = BiadjacencyOracle(h, S, T)
    return approx_degrees(oracle, supervertex_modulus(h.n), delta, profile=profile, rng=rng)


def learn_low(h: OracleHandle, S, T, h_bound, delta, *, rng=None) -> np.ndarray:
    """Biadjacency B(i, j) = |E(S_i, T_j)| when every row has at most ``h_bound`` nonzeros."""
    if not S or not T:
        return np.zeros((len(S), len(T)), dtype=np.int64)
    oracle = BiadjacencyOracle(h, S, T)
    return learn_sparse_rows(oracle, supervertex_modulus(h.n), h_bound, delta, rng=rng)


def bucket_range(d: float, length: int):
    """q values of the degree buckets 2^(q-1) < g <= 2^q, lower end clamped at 0."""
    lo = max(0, math.floor(math.log2(d)) - 1) if d >= 1 else 0
    return range(lo, ceil_log2(max(length, 1)) + 3)


def sample_size(length: int, bucket: int, n: int, q: int) -> int:
    """ceil(16 l ln(|H_q| n) / 2^q), capped at 4 l ceil(ln n)."""
    raw = math.ceil(16 * length * math.log(bucket * n) / 2 ** q - 1e-9)
    return max(1, min(raw, 4 * length * math.ceil(math.log(n))))


def reduce_high(h: OracleHandle, S, T, d, g, *, profile="paper", rng=None) -> np.ndarray:
    """Find at least one superedge for every high-degree supervertex.

    Supervertices are bucketed by their estimate g; each bucket is served by
    learning its biadjacency into a random sample of T, which brings the
    superdegree down to O(log n).
    """
    profile = get_profile(profile)
    rng = as_generator(rng)
    n = h.n
    k, l = len(S), len(T)
    B = np.zeros((k, l), dtype=np.int64)
    if k == 0 or l == 0:
        return B
    g = np.asarray(g, dtype=float)
    bound = profile.low_bound(math.log(n))
    for q in bucket_range(d, l):
        Hq = np.flatnonzero((g > 2.0 ** (q - 1)) & (g <= 2.0 ** q))
        if Hq.size == 0:
            continue
        Rq = np.unique(rng.integers(0, l, size=sample_size(l, Hq.size, n, q)))
        sub = learn_low(h, [S[i] for i in Hq], [T[j] for j in Rq], bound, 1 / n**2, rng=rng)
        B[np.ix_(Hq, Rq)] = sub
    return B


class _UnionFind:
    def __init__(self, k):
        self.parent = list(range(k))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x


def _nonzero_pairs(A):
    if isinstance(A, tuple):
        rows, cols = A
    else:
        rows, cols = np.nonzero(np.asarray(A))
    order = np.lexsort((cols, rows))
    return zip(np.asarray(rows)[order].tolist(), np.asarray(cols)[order].tolist())


def contract(S, A_list, low):
    """Merge supervertices along learned superedges.

    Parameters
    ----------
    S : list of sets
        Connected supervertices.
    A_list : list
        k x k matrices indexed by supervertex; a positive entry is a superedge.
        A ``(rows, cols)`` pair of index arrays is accepted as a sparse form.
    low : array of bool
        Supervertices whose superedges are all present in ``A_list``.

    Returns
    -------
    (S_new, C) : lists of frozensets
        Merged sets containing a high supervertex, and finished components.
        Both are ordered by least vertex.
    """
    k = len(S)
    uf = _UnionFind(k)
    flag = [bool(x) for x in low]
    for A in A_list:
        for i, j in _nonzero_pairs(A):
            ri, rj = uf.find(i), uf.find(j)
            if ri == rj:
                continue
            uf.parent[rj] = ri
            flag[ri] = flag[ri] and flag[rj]
    merged = {}
    for i in range(k):
        merged.setdefault(uf.find(i), set()).update(S[i])
    S_new, C = [], []
    for root, verts in merged.items():
        (C if flag[root] else S_new).append(frozenset(verts))
    key = lambda s: min(s) if s else -1
    return sorted(S_new, key=key), sorted(C, key=key)


def label_partition(k: int, j: int, b: int):
    """Positions t in 0..k-1 whose bit j equals b, and the rest."""
    L = [t for t in range(k) if bit(t, j) == b]
    R = [t for t in range(k) if bit(t, j) != b]
    return L, R


def shrink(h: OracleHandle, S, d, *, profile="paper", rng=None):
    """One contraction round; returns (S_new, C)."""
    profile = get_profile(profile)
    rng = as_generator(rng)
    n = h.n
    k = len(S)
    low = np.ones(k, dtype=bool)
    A_list = []
    for j in range(1, ceil_log2(max(k, 1)) + 1):
        for b in (0, 1):
            Lpos, Rpos = label_partition(k, j, b)
            Ls, Rs = [S[t] for t in Lpos], [S[t] for t in Rpos]
            g = approx_degree_sequence(h, Ls, Rs, 1 / n, profile=profile, rng=rng)
            high = np.flatnonzero(g >= d)
            low[[Lpos[i] for i in high]] = False
            Bh = reduce_high(h, [Ls[i] for i in high], Rs, d / 4, g[high], profile=profile, rng=rng)
            lo = np.flatnonzero(g < d)
            Cl = learn_low(h, [Ls[i] for i in lo], Rs, 2 * d, 1 / n, rng=rng)
            Lpos_a, Rpos_a = np.asarray(Lpos), np.asarray(Rpos)
            for rows, M_ in ((high, Bh), (lo, Cl)):
                r, c = np.nonzero(M_)
                A_list.append((Lpos_a[rows[r]] if r.size else r, Rpos_a[c] if c.size else c))
    return contract(S, A_list, low)


def audit_partition(h: OracleHandle, S, C):
    """Round invariants checked on the hidden graph: partition, connected, closed."""
    G = h.privileged_graph()
    problems = []
    sets = list(S) + list(C)
    h.ledger.charge("audit", len(sets))
    seen = set()
    for U in sets:
        if seen & U:
            problems.append("working sets overlap")
        seen |= U
    if seen != set(range(G.n)):
        problems.append("working sets do not cover V")
    adj = G.adjacency_lists()
    for U in sets:
        start = next(iter(U))
        reach, queue = {start}, deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v in U and v not in reach:
                    reach.add(v)
                    queue.append(v)
        if reach != set(U):
            problems.append(f"set starting at {min(U)} is not connected")
    for U in C:
        if G.cut(U) != 0:
            problems.append(f"component starting at {min(U)} has outgoing edges")
    return problems


@dataclass
class ComponentsResult:
    components: list
    rounds: int
    profile: str
    queries: dict
    violations: list = field(default_factory=list)
    correct: bool | None = None

    def to_dict(self):
        out = {"components": self.components, "queries": dict(self.queries),
               "profile": self.profile, "rounds": self.rounds}
        if self.correct is not None:
            out["correct"] = self.correct
        return out


def stall_limit(n: int) -> int:
    return 4 * max(1, ceil_log2(n))


def connected_components(h: OracleHandle, *, profile="paper", rng=None) -> ComponentsResult:
    """Connected components of the hidden graph using cut queries only.

    Raises
    ------
    NonTerminationError
        The working list did not shrink for 4 ceil(log2 n) consecutive rounds.
    """
    profile = get_profile(profile)
    rng = as_generator(rng)
    n = h.n
    d = profile.degree_parameter(n)
    S = [frozenset({v}) for v in range(n)]
    comps, rounds, stall, violations = [], 0, 0, []
    while S:
        S_new, C = shrink(h, S, d, profile=profile, rng=rng)
        rounds += 1
        comps.extend(C)
        if h.audit:
            violations.extend(f"round {rounds}: {p}" for p in audit_partition(h, S_new, comps))
        stall = stall + 1 if len(S_new) >= len(S) else 0
        if stall >= stall_limit(n):
            raise NonTerminationError(
                f"working list stuck at {len(S_new)} supervertices for {stall} rounds",
                {"rounds": rounds, "working": len(S_new), "queries": h.ledger.to_dict(),
                 "profile": profile.name})
        S = S_new
    return ComponentsResult(canonical_partition(comps), rounds, profile.name,
                            h.ledger.to_dict(), violations)
