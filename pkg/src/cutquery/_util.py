"""Small numeric and validation helpers."""

from __future__ import annotations

import math
import zlib
from collections.abc import Iterable

import numpy as np

from .exceptions import ParameterError


def ceil_log2(x: int) -> int:
    """Return the smallest e >= 0 with 2**e >= x, for an integer x >= 1."""
    x = int(x)
    if x < 1:
        raise ParameterError(f"ceil_log2 needs x >= 1, got {x}")
    return (x - 1).bit_length()


def ceil_log2_ratio(num: int, den: int) -> int:
    """Exact ceil(log2(num / den)) for positive integers, clamped at 0."""
    num, den = int(num), int(den)
    if num < 1 or den < 1:
        raise ParameterError("ceil_log2_ratio needs positive integers")
    e = 0
    while (den << e) < num:
        e += 1
    return e


def ceil_log2_real(x: float) -> int:
    """ceil(log2(x)) for a positive real, exact on powers of two."""
    x = float(x)
    if not x > 0:
        raise ParameterError(f"log2 of non-positive value {x}")
    e = math.ceil(math.log2(x))
    while e > -1075 and 2.0 ** (e - 1) >= x:
        e -= 1
    while 2.0 ** e < x:
        e += 1
    return e


def check_probability(delta, name="delta") -> float:
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"{name} must lie in (0, 1), got {delta}")
    return delta


def check_modulus(M, name="M") -> int:
    if isinstance(M, bool) or int(M) != M or int(M) < 2:
        raise ParameterError(f"{name} must be an integer >= 2, got {M!r}")
    return int(M)


def check_positive_int(x, name, minimum=1) -> int:
    if isinstance(x, bool) or int(x) != x or int(x) < minimum:
        raise ParameterError(f"{name} must be an integer >= {minimum}, got {x!r}")
    return int(x)


def as_generator(seed=None) -> np.random.Generator:
    """Coerce None, an int or a Generator into a numpy Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or isinstance(seed, (int, np.integer)):
        return np.random.default_rng(seed)
    raise ParameterError(f"cannot build a random generator from {seed!r}")


def derive_rng(seed: int, label: str) -> np.random.Generator:
    """Independent stream keyed by (seed, label); stable across runs."""
    return np.random.default_rng([int(seed) & 0xFFFFFFFF, zlib.crc32(label.encode())])


def spawn(rng: np.random.Generator, label: str) -> np.random.Generator:
    """Child stream of ``rng`` tagged by a call-site label."""
    base = int(rng.integers(0, 2**32))
    return np.random.default_rng([base, zlib.crc32(label.encode())])


def check_vertex_set(S: Iterable[int], n: int) -> frozenset:
    """Validate a vertex set against the label range 0..n-1."""
    if isinstance(S, frozenset):
        out = S
    else:
        out = frozenset(int(v) for v in S)
    for v in out:
        if not 0 <= v < n:
            raise ParameterError(f"vertex {v} outside 0..{n - 1}")
    return out


def indicator(S: Iterable[int], n: int) -> np.ndarray:
    x = np.zeros(n, dtype=np.int64)
    idx = np.fromiter(S, dtype=np.int64)
    if idx.size:
        x[idx] = 1
    return x


def bit(label: int, j: int) -> int:
    """Bit j (1 = least significant) of a non-negative label."""
    return (int(label) >> (j - 1)) & 1


def exact_matmul(A, B, bound=None) -> np.ndarray:
    """Integer product A @ B, through BLAS whenever float64 is exact.

    ``bound`` may supply a known upper bound on the magnitude of any partial
    sum; otherwise it is derived from the operands.
    """
    A, B = np.asarray(A), np.asarray(B)
    if A.dtype == object or B.dtype == object:
        return A.dot(B)
    if A.size == 0 or B.size == 0:
        return np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
    if bound is None:
        bound = float(np.abs(A).max()) * float(np.abs(B).max()) * A.shape[-1]
    if bound < 2.0 ** 53:
        out = np.asarray(A, dtype=np.float64) @ np.asarray(B, dtype=np.float64)
        return out.astype(np.int64)
    return A.astype(object).dot(B.astype(object))
