"""Closed-form query charges and the ledger verifier."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ._util import ceil_log2, ceil_log2_real
from .matrix_learn import sparse_columns
from .oracles import CHARGED, QueryLedger


def dense_invocations(rows: int, cols: int, modulus: int) -> int:
    return min(rows, cols) * ceil_log2(modulus)


def sparse_invocations(rows: int, cols: int, modulus: int, d: int, delta: float) -> int:
    if 2 * d >= cols:
        return dense_invocations(rows, cols, modulus)
    return sparse_columns(cols, modulus, d, delta) * ceil_log2(modulus)


def approx_count_invocations(rows, cols, delta, modulus, repetition) -> int:
    a = repetition * ceil_log2_real(rows * (ceil_log2(cols) + 1) / delta)
    return a * (ceil_log2(cols) + 1) * ceil_log2(modulus)


def cut_full_cost(n: int, M: int) -> int:
    """Cut queries of per-vertex row learning: 3 n ceil(log2 M)."""
    return 3 * n * ceil_log2(M)


def learn_low_cost(k: int, l: int, h: float, delta: float, n: int) -> int:
    """Cut queries of one supervertex Learn Low call."""
    if k == 0 or l == 0 or math.floor(h) <= 0:
        return 0
    return 3 * sparse_invocations(k, l, max(2, n * n), int(math.floor(h)), delta)


def _charges(kind, unit, invocations, quantum=True):
    out = {kind: unit * invocations}
    if quantum:
        out["quantum_charged"] = invocations
    if kind == "cut":
        out["disjoint_matrix_cut"] = invocations
    return {k: v for k, v in out.items() if v}


def expected_charges(op: str, p: dict) -> dict:
    """Charges a traced call should have produced, recomputed from its parameters."""
    if op == "dense":
        inv = dense_invocations(p["rows"], p["cols"], p["modulus"])
    elif op == "sparse":
        inv = sparse_columns(p["cols"], p["modulus"], p["d"], p["delta"]) * ceil_log2(p["modulus"])
    elif op == "approx_count":
        inv = approx_count_invocations(p["rows"], p["cols"], p["delta"], p["modulus"],
                                       p["repetition"])
    elif op == "exact_degree":
        inv = ceil_log2(p["cols"] + 1)
    elif op == "matrix_query":
        return _charges(p["kind"], p["unit"], 1, quantum=False)
    elif op == "empty_test":
        out = {"cut": p["reps"] * p["unit"]}
        if p["unit"] == 3:
            out["disjoint_matrix_cut"] = p["reps"]
        return {k: v for k, v in out.items() if v}
    else:
        raise KeyError(f"no closed form for {op!r}")
    return _charges(p["kind"], p["unit"], inv)


@dataclass
class LedgerReport:
    ok: bool
    mismatches: list = field(default_factory=list)
    expected: dict = field(default_factory=dict)
    observed: dict = field(default_factory=dict)

    def to_dict(self):
        return {"ok": self.ok, "mismatches": self.mismatches,
                "expected": self.expected, "observed": self.observed}


def verify_ledger(ledger: QueryLedger) -> LedgerReport:
    """Check every traced call against its closed form, and the totals against the sum."""
    mismatches = []
    totals = dict.fromkeys(CHARGED, 0)
    for idx, rec in enumerate(ledger.records):
        try:
            want = expected_charges(rec.op, rec.params)
        except KeyError as exc:
            mismatches.append(f"record {idx}: {exc}")
            continue
        if want != rec.observed:
            mismatches.append(f"record {idx} ({rec.op}): expected {want}, observed {rec.observed}")
        for k, v in want.items():
            totals[k] += v
    observed = {k: ledger.counts[k] for k in CHARGED}
    for k in CHARGED:
        if totals[k] != observed[k]:
            mismatches.append(f"total {k}: closed forms give {totals[k]}, ledger has {observed[k]}")
    return LedgerReport(not mismatches, mismatches, totals, observed)
