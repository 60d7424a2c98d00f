"""Instrumented single-shot runs of the three oracle-testing circuits.

Outcome keys are big-endian bitstrings: qubit 0 (the constant-vs-balanced
answer qubit) comes first, then the work qubits. Every run records the state
after each named step and the number of times each oracle was applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby

import numpy as np

from .oracles import BoolFn, PromisePair, oracle_unitary
from .qstate import (
    ATOL,
    CNOT,
    H,
    StateVector,
    X,
    apply_gate,
    basis_state,
    measurement_distribution,
)

DEUTSCH = "deutsch"
ENTANGLED_PAIR = "entangled_pair"
PRODUCT_PAIR = "product_pair"
ALGORITHMS = (DEUTSCH, ENTANGLED_PAIR, PRODUCT_PAIR)


@dataclass(frozen=True)
class GateOp:
    """One gate application; `oracle` marks counted queries ("f" or "g")."""

    name: str
    matrix: np.ndarray
    targets: tuple[int, ...]
    step: str
    oracle: str | None = None


@dataclass(frozen=True)
class DecodedAnswer:
    """balanced = f(0)^f(1); different = f(0)^g(0), absent for single-function runs."""

    balanced: int
    different: int | None = None


@dataclass(frozen=True)
class RunRecord:
    algorithm: str
    final_distribution: dict[str, float]
    query_counts: dict[str, int]
    step_states: tuple[tuple[str, StateVector], ...]
    decoded: DecodedAnswer

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        total = sum(self.final_distribution.values())
        if abs(total - 1.0) > ATOL:
            raise ValueError(f"final distribution sums to {total!r}, not 1")
        counts = self.query_counts
        if self.algorithm == DEUTSCH and counts != {"f": 1}:
            raise ValueError(f"single-function run must query f once, got {counts}")
        if self.algorithm == ENTANGLED_PAIR and counts != {"f": 1, "g": 1}:
            raise ValueError(
                f"entangled run must query f and g once each, got {counts}"
            )
        if self.algorithm == PRODUCT_PAIR and sum(counts.values()) != 3:
            raise ValueError(f"product run must use three queries, got {counts}")


def decode(bitstring: str) -> DecodedAnswer:
    """Read (balanced, different) off a three-bit outcome: the answer qubit
    gives constant-vs-balanced, the work-qubit parity gives same-vs-different."""
    if len(bitstring) != 3 or any(c not in "01" for c in bitstring):
        raise ValueError(f'expected a 3-bit outcome string, got "{bitstring}"')
    a, w1, w2 = (int(c) for c in bitstring)
    return DecodedAnswer(balanced=a, different=w1 ^ w2)


def deutsch_ops(fn: BoolFn) -> list[GateOp]:
    """Single-query circuit: |0>|1>, H on both wires, one oracle call, H on
    the answer qubit. The answer qubit then reads f(0)^f(1) with certainty."""
    return [
        GateOp("X", X, (1,), "initialize"),
        GateOp("H", H, (0,), "initialize"),
        GateOp("H", H, (1,), "initialize"),
        GateOp(f"U[{fn.label()}]", oracle_unitary(fn), (0, 1), "query-f", "f"),
        GateOp("H", H, (0,), "interfere"),
    ]


def entangled_pair_ops(pair: PromisePair) -> list[GateOp]:
    """Two-query circuit sharing one entangled work-qubit pair.

    Preparation puts the answer qubit in (|0>+|1>)/sqrt(2) and the work
    qubits in (|00>-|11>)/sqrt(2). Each oracle then couples the answer qubit
    to its own work qubit, and the final H turns the accumulated relative
    phase into a deterministic answer bit, while the work-qubit parity
    records whether the functions agree.
    """
    uf = oracle_unitary(pair.f)
    ug = oracle_unitary(pair.g)
    return [
        GateOp("H", H, (0,), "initialize"),
        GateOp("X", X, (1,), "initialize"),
        GateOp("H", H, (1,), "initialize"),
        GateOp("CNOT", CNOT, (1, 2), "initialize"),
        GateOp(f"U[{pair.f.label()}]", uf, (0, 1), "query-f", "f"),
        GateOp(f"U[{pair.g.label()}]", ug, (0, 2), "query-g", "g"),
        GateOp("H", H, (0,), "interfere"),
    ]


def product_pair_ops(pair: PromisePair) -> list[GateOp]:
    """Three-query circuit that stays separable at every step.

    The first query kicks the phase of f against a |-> work qubit, loading
    b = f(0)^f(1) into the answer qubit; H then collapses the answer qubit
    to the basis state |b> (unitarily, no measurement) and H,X return the
    work qubit to |0>. The remaining two queries write f(b) and g(b) into
    the work qubits; under the promise their parity equals f(0)^g(0).
    The answer qubit sits in a basis state during those writes, so no step
    ever creates entanglement.
    """
    uf = oracle_unitary(pair.f)
    ug = oracle_unitary(pair.g)
    return [
        GateOp("H", H, (0,), "initialize"),
        GateOp("X", X, (1,), "initialize"),
        GateOp("H", H, (1,), "initialize"),
        GateOp(f"U[{pair.f.label()}]", uf, (0, 1), "query-f-kickback", "f"),
        GateOp("H", H, (0,), "uncompute"),
        GateOp("H", H, (1,), "uncompute"),
        GateOp("X", X, (1,), "uncompute"),
        GateOp(f"U[{pair.f.label()}]", uf, (0, 1), "query-f-write", "f"),
        GateOp(f"U[{pair.g.label()}]", ug, (0, 2), "query-g-write", "g"),
    ]


def circuit_ops(
    algorithm: str, oracles: BoolFn | PromisePair
) -> tuple[list[GateOp], int]:
    """Gate list and qubit count for the named algorithm."""
    if algorithm == DEUTSCH:
        if not isinstance(oracles, BoolFn):
            raise ValueError("deutsch takes a single BoolFn")
        return deutsch_ops(oracles), 2
    if not isinstance(oracles, PromisePair):
        raise ValueError(f"{algorithm} takes a PromisePair")
    if algorithm == ENTANGLED_PAIR:
        return entangled_pair_ops(oracles), 3
    if algorithm == PRODUCT_PAIR:
        return product_pair_ops(oracles), 3
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _decode_distribution(algorithm: str, dist: dict[str, float]) -> DecodedAnswer:
    outcomes = sorted(dist)
    if algorithm == DEUTSCH:
        bits = {o[0] for o in outcomes}
        if len(bits) != 1:
            raise RuntimeError(f"answer qubit is not deterministic: {outcomes}")
        return DecodedAnswer(balanced=int(bits.pop()), different=None)
    answers = {decode(o) for o in outcomes}
    if len(answers) != 1:
        raise RuntimeError(f"outcomes decode inconsistently: {outcomes}")
    return answers.pop()


def _run(algorithm: str, ops: list[GateOp], num_qubits: int) -> RunRecord:
    state = basis_state(num_qubits, 0)
    steps: list[tuple[str, StateVector]] = []
    queries: dict[str, int] = {}
    for label, group in groupby(ops, key=lambda op: op.step):
        for op in group:
            state = apply_gate(state, op.matrix, op.targets)
            if op.oracle is not None:
                queries[op.oracle] = queries.get(op.oracle, 0) + 1
        steps.append((label, state))
    dist = {
        format(i, f"0{num_qubits}b"): p
        for i, p in sorted(measurement_distribution(state).items())
    }
    decoded = _decode_distribution(algorithm, dist)
    return RunRecord(algorithm, dist, queries, tuple(steps), decoded)


def run_deutsch(fn: BoolFn) -> RunRecord:
    """One query to a single function; decoded.balanced == f(0)^f(1)."""
    ops, n = circuit_ops(DEUTSCH, fn)
    return _run(DEUTSCH, ops, n)


def run_entangled_pair(pair: PromisePair) -> RunRecord:
    """One query to each function with entangled work qubits; two equally
    likely outcomes, both decoding to the same (balanced, different) answer."""
    ops, n = circuit_ops(ENTANGLED_PAIR, pair)
    return _run(ENTANGLED_PAIR, ops, n)


def run_product_pair(pair: PromisePair) -> RunRecord:
    """Three queries (two to f, one to g) with no entanglement anywhere;
    a single deterministic outcome decoding per the same table."""
    ops, n = circuit_ops(PRODUCT_PAIR, pair)
    return _run(PRODUCT_PAIR, ops, n)
