"""Cost-faithful simulation of the modular subset-sum learning primitive.

A quantum routine learns x in [M]^k exactly from ceil(log2 M) modular
subset-sum queries. The simulator returns x from privileged access (or from
uncharged singleton probes), bills the exact query count, and cross-checks the
answer on random subsets.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from ._util import as_generator, ceil_log2, check_modulus, exact_matmul
from .exceptions import CapacityError, ParameterError, SimulationIntegrityError
from .oracles import MatrixOracle, QueryLedger


def _random_subsets(rng, count, k):
    return rng.integers(0, 2, size=(count, k), dtype=np.int64)


def qft_learn_subset_sums(oracle: Callable, k: int, M: int, ledger: QueryLedger | None = None,
                          *, hidden: Callable | None = None, charge: Callable | None = None,
                          audit_checks: int = 2, rng=None) -> np.ndarray:
    """Learn x in [M]^k from an oracle S -> sum_{i in S} x_i mod M.

    Parameters
    ----------
    oracle : callable
        Takes a list of indices, returns the modular subset sum. Calls made
        here are audit probes and counted under ``ledger.audit``.
    k, M : int
        Length and modulus.
    ledger : QueryLedger, optional
        Receives ``quantum_charged += ceil(log2 M)``.
    hidden : callable, optional
        Privileged shortcut returning x. Without it x is read from k
        singleton probes.
    charge : callable, optional
        Called with the query count to bill an underlying oracle.
    audit_checks : int
        Random subsets on which the result is verified.
    rng : Generator or int, optional
        Stream for the audit subsets.

    Returns
    -------
    numpy.ndarray
        The vector x.
    """
    M = check_modulus(M)
    k = int(k)
    if k < 0:
        raise ParameterError("k must be non-negative")
    ledger = QueryLedger() if ledger is None else ledger
    m = ceil_log2(M)
    ledger.charge("quantum_charged", m)
    if charge is not None:
        charge(m)
    if hidden is not None:
        x = np.asarray(hidden(), dtype=np.int64) % M
    else:
        ledger.charge("audit", k)
        x = np.array([oracle([i]) for i in range(k)], dtype=np.int64) % M
    if x.shape != (k,):
        raise SimulationIntegrityError(f"privileged vector has shape {x.shape}, expected ({k},)")
    rng = as_generator(rng)
    for S in _random_subsets(rng, audit_checks, k):
        idx = np.flatnonzero(S).tolist()
        ledger.charge("audit")
        if int(oracle(idx)) % M != int(x[idx].sum()) % M:
            raise SimulationIntegrityError("oracle answers disagree with the learned vector")
    return x


def compute_Ay_mod(matrix_oracle, y, M, ledger=None, *, k=None, audit_checks=None, rng=None):
    """(A y) mod M at the charge of one subset-sum learning call.

    ``matrix_oracle`` is a ``MatrixOracle`` or a plain function ``(x, y) -> x^T A y``
    (then ``k`` is required and every oracle call is an audit probe).
    """
    y = np.asarray(y, dtype=np.int64)
    if isinstance(matrix_oracle, MatrixOracle):
        return compute_AY_mod(matrix_oracle, y[:, None], M, ledger=ledger,
                              audit_checks=audit_checks, rng=rng)[:, 0]
    if k is None:
        raise ParameterError("k is required for a plain matrix oracle function")

    def probe(S):
        x = np.zeros(k, dtype=np.int64)
        x[S] = 1
        return int(matrix_oracle(x, y)) % M

    return qft_learn_subset_sums(probe, k, M, ledger,
                                 audit_checks=2 if audit_checks is None else audit_checks, rng=rng)


def compute_AY_mod(oracle: MatrixOracle, Y, M, ledger=None, *, audit_checks=None, rng=None,
                   audit_columns=None, binary=False):
    """Columns (A Y[:, c]) mod M, one simulated subset-sum learning call each.

    Equivalent to calling ``compute_Ay_mod`` on every column, but the audit
    probes of all columns are evaluated in one batch. ``audit_columns`` caps
    the number of columns that get probed (a random subset); by default every
    column is probed. ``binary=True`` promises Y is 0/1 and skips the check.
    """
    M = check_modulus(M)
    if not binary:
        Y = np.asarray(Y, dtype=np.int64)
    k, l = oracle.shape
    if Y.ndim != 2 or Y.shape[0] != l:
        raise ParameterError(f"Y must have {l} rows")
    c = Y.shape[1]
    ledger = oracle.ledger if ledger is None else ledger
    m = ceil_log2(M)
    ledger.charge("quantum_charged", m * c)
    oracle.charge(m * c)
    H = oracle.hidden()
    if binary and H.dtype != object and float(H.max(initial=0)) * l < 2.0 ** 53:
        prod = np.asarray(H, dtype=np.float64) @ Y
        out = np.mod(prod, M, out=prod).astype(np.int64)
    else:
        out = np.asarray(exact_matmul(H, Y) % M, dtype=np.int64)
    checks = oracle.audit_checks if audit_checks is None else audit_checks
    if checks and c and k:
        rng = oracle.audit_rng if rng is None else as_generator(rng)
        cols = np.arange(c)
        if audit_columns is not None and audit_columns < c:
            cols = np.sort(rng.choice(c, size=audit_columns, replace=False))
        cols = np.repeat(cols, checks)
        S = _random_subsets(rng, cols.size, k)
        got = np.asarray(oracle.audit_many(S, np.asarray(Y[:, cols].T, dtype=np.int64))) % M
        want = np.sum(S * out[:, cols].T, axis=1) % M
        if np.any(got != want):
            raise SimulationIntegrityError("matrix oracle answers disagree with the learned columns")
    return out


def statevector_validate(x, M, k=None, tol=1e-9) -> bool:
    """Run the two-register protocol on a full state vector.

    The first register holds t in (Z_M)^k in uniform superposition, the second
    the phase state xi_M. Each of the ceil(log2 M) oracle applications adds
    2^j (t^(j) . x mod M) to the second register, where t^(j) is bit j of t.
    Phase kickback leaves omega^(-t.x) on |t>, and the Fourier transform over
    (Z_M)^k maps it to |x>. Returns True iff the mass on x is at least 1 - tol.
    """
    x = np.asarray(x, dtype=np.int64)
    k = x.size if k is None else int(k)
    M = check_modulus(M)
    if x.shape != (k,) or np.any(x < 0) or np.any(x >= M):
        raise ParameterError("x must be a length-k vector over [M]")
    if k > 6 or M > 4:
        raise CapacityError("state vector limited to k <= 6 and M <= 4")
    m = ceil_log2(M)
    T = np.array(list(np.ndindex(*(M,) * k)), dtype=np.int64).reshape(M ** k, k)
    omega = np.exp(2j * np.pi / M)
    xi = omega ** np.arange(M) / np.sqrt(M)
    state = np.outer(np.full(M ** k, M ** (-k / 2)), xi)
    s = np.arange(M)
    for j in range(m):
        answers = (((T >> j) & 1) @ x) % M
        shift = (2 ** j * answers) % M
        state = np.take_along_axis(state, (s[None, :] - shift[:, None]) % M, axis=1)
    psi = np.fft.ifftn(state.reshape((M,) * k + (M,)), axes=tuple(range(k)), norm="ortho")
    mass = float(np.sum(np.abs(psi[tuple(x)]) ** 2))
    return mass >= 1 - tol
