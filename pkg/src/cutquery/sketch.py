"""Random Boolean sketches for sparse vectors and a meet-in-the-middle decoder."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from ._util import as_generator, check_modulus, check_probability, exact_matmul
from .exceptions import (CapacityError, DecodingAmbiguity, ParameterError, RecoveryFailure,
                         SimulationIntegrityError)

DECODE_CAPACITY = 10**7


def sketch_columns(r: int, M: int, d: int, delta: float) -> int:
    """Column count ceil(2d log2(eMr/d) + 2 log2 d + log2(1/delta))."""
    if d < 1:
        raise ParameterError("sparsity d must be >= 1")
    val = 2 * d * math.log2(math.e * M * r / d) + 2 * math.log2(d) + math.log2(1 / delta)
    return math.ceil(val - 1e-12)


def candidate_count(r: int, M: int, d: int) -> int:
    """Number of vectors in [M]^r with at most d nonzeros."""
    return sum(math.comb(r, j) * (M - 1) ** j for j in range(min(d, r) + 1))


@dataclass(frozen=True)
class SketchSpec:
    """Parameters of a sparse-recovery sketch.

    Attributes
    ----------
    r : int
        Ambient length.
    M : int
        Modulus.
    d : int
        Sparsity bound.
    delta : float
        Failure budget.
    """

    r: int
    M: int
    d: int
    delta: float

    def __post_init__(self):
        if self.r < 1:
            raise ParameterError("r must be positive")
        check_modulus(self.M)
        check_probability(self.delta)
        if self.d < 1:
            raise ParameterError("d must be positive")

    @property
    def q(self) -> int:
        return sketch_columns(self.r, self.M, self.d, self.delta)

    @property
    def sketchable(self) -> bool:
        """Whether d <= r/2, the regime where a sketch beats reading columns."""
        return 2 * self.d <= self.r


@dataclass
class Sketch:
    """A drawn measurement matrix R (r x q, entries in {0, 1})."""

    spec: SketchSpec
    R: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        self.R = np.asarray(self.R, dtype=np.int64)
        if self.R.ndim != 2 or self.R.shape[0] != self.spec.r:
            raise ParameterError(f"R must have {self.spec.r} rows")

    @property
    def q(self) -> int:
        return self.R.shape[1]

    @classmethod
    def draw(cls, spec: SketchSpec, seed=None, q=None):
        rng = as_generator(seed)
        q = spec.q if q is None else int(q)
        R = rng.integers(0, 2, size=(spec.r, q), dtype=np.int64)
        return cls(spec, R, seed if isinstance(seed, int) else None)


def signature(x, sk: Sketch) -> np.ndarray:
    """x^T R mod M."""
    x = np.asarray(x, dtype=np.int64)
    return exact_matmul(x, sk.R) % sk.spec.M


def _enumerate(r, M, d):
    """(supports, values) blocks for every vector with exactly j nonzeros, j <= d."""
    for j in range(min(d, r) + 1):
        if j == 0:
            yield np.zeros((1, 0), dtype=np.int64), np.zeros((1, 0), dtype=np.int64)
            continue
        supp = np.array(list(combinations(range(r), j)), dtype=np.int64)
        vals = np.array(list(product(range(1, M), repeat=j)), dtype=np.int64)
        yield (np.repeat(supp, len(vals), axis=0), np.tile(vals, (len(supp), 1)))


def _block_signatures(R, M, supp, vals):
    sig = np.zeros((supp.shape[0], R.shape[1]), dtype=np.int64)
    for t in range(supp.shape[1]):
        sig += vals[:, t, None] * R[supp[:, t]]
    return sig % M


class _MeetInMiddle:
    """Table of signatures of ceil(d/2)-sparse vectors, probed by floor(d/2)-sparse ones."""

    def __init__(self, sk: Sketch):
        r, M, d = sk.spec.r, sk.spec.M, sk.spec.d
        self.M = M
        self.d1, self.d2 = (d + 1) // 2, d // 2
        self.table = {}
        self.parts = []
        for supp, vals in _enumerate(r, M, self.d1):
            sig = _block_signatures(sk.R, M, supp, vals)
            for s, a, b in zip(sig, supp, vals):
                self.table.setdefault(s.tobytes(), []).append((tuple(a), tuple(b)))
            if supp.shape[1] <= self.d2:
                self.parts.append((supp, vals, sig))

    def solve(self, sig):
        found = set()
        for supp, vals, psig in self.parts:
            targets = (sig[None, :] - psig) % self.M
            for t, a, b in zip(targets, supp, vals):
                for a2, b2 in self.table.get(t.tobytes(), ()):
                    if set(a).isdisjoint(a2):
                        found.add(tuple(sorted(zip(tuple(a) + a2, tuple(b) + b2))))
        return found


def decode_rows(S, sk: Sketch, mode="exhaustive", hidden=None) -> np.ndarray:
    """Decode several signatures (rows of S) with one shared lookup table.

    Parameters
    ----------
    S : array (k, q)
        Signatures.
    sk : Sketch
    mode : {"exhaustive", "trusted"}
        ``exhaustive`` enumerates all d-sparse candidates (capacity 10**7).
        ``trusted`` takes the privileged ``hidden`` rows, checks their
        signatures, and enforces the sparsity promise.
    hidden : array (k, r), optional
        Required in trusted mode.

    Raises
    ------
    DecodingAmbiguity
        Two or more d-sparse vectors share a signature.
    RecoveryFailure
        No d-sparse vector has the signature (the sparsity promise failed).
    """
    S = np.atleast_2d(np.asarray(S, dtype=np.int64))
    spec = sk.spec
    if mode == "trusted":
        if hidden is None:
            raise ParameterError("trusted decoding needs the hidden rows")
        H = np.atleast_2d(np.asarray(hidden, dtype=np.int64))
        if np.any(exact_matmul(H, sk.R) % spec.M != S % spec.M):
            raise SimulationIntegrityError("hidden rows do not match their signatures")
        nnz = np.count_nonzero(H, axis=1)
        if np.any(nnz > spec.d):
            bad = int(np.argmax(nnz > spec.d))
            raise RecoveryFailure(f"row {bad} has {int(nnz[bad])} nonzeros, more than d={spec.d}",
                                  {"row": bad, "nonzeros": int(nnz[bad]), "d": spec.d})
        return H.copy()
    if mode != "exhaustive":
        raise ParameterError(f"unknown decode mode {mode!r}")
    count = candidate_count(spec.r, spec.M, spec.d)
    if count > DECODE_CAPACITY:
        raise CapacityError(f"{count} candidates exceed the exhaustive decoder capacity")
    mim = _MeetInMiddle(sk)
    out = np.zeros((S.shape[0], spec.r), dtype=np.int64)
    for i, sig in enumerate(S % spec.M):
        found = mim.solve(sig)
        if not found:
            raise RecoveryFailure(f"signature {i} has no {spec.d}-sparse preimage", {"row": i})
        if len(found) > 1:
            cands = []
            for f in sorted(found)[:4]:
                v = np.zeros(spec.r, dtype=np.int64)
                for a, b in f:
                    v[a] = b
                cands.append(v)
            raise DecodingAmbiguity(f"signature {i} has {len(found)} sparse preimages", cands)
        for a, b in found.pop():
            out[i, a] = b
    return out


def decode(sig, sk: Sketch, mode="exhaustive", hidden_row=None) -> np.ndarray:
    """Recover the unique d-sparse vector behind one signature."""
    hidden = None if hidden_row is None else np.asarray(hidden_row)[None, :]
    return decode_rows(np.asarray(sig)[None, :], sk, mode, hidden)[0]
