"""Gate-level depolarizing noise, readout confusion, finite-shot sampling,
and the Bhattacharyya statistical fidelity between outcome distributions.

The bundled "table2" model carries the calibration of a three-qubit
superconducting device: a single-qubit gate error and a readout error per
qubit, and a two-qubit gate error per directed (control, target) pair.
Noisy runs are exact density-matrix evolutions; shot noise enters only
through the seeded multinomial sampler.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from string import ascii_lowercase
from typing import Mapping

import numpy as np

from .algorithms import circuit_ops
from .oracles import BoolFn, PromisePair
from .qstate import (
    DensityMatrix,
    PROB_CUTOFF,
    apply_gate_density,
    basis_state,
    partial_trace,
)

TABLE2_SINGLE_QUBIT = (1.72e-3, 1.46e-3, 1.80e-3)
TABLE2_READOUT = (4.20e-2, 7.00e-2, 1.40e-2)
TABLE2_TWO_QUBIT = {(0, 1): 3.17e-2, (1, 2): 2.87e-2, (0, 2): 2.67e-2}

_PAIR_KEY = re.compile(r"^two_qubit_gate_error_q(\d+)_q(\d+)$")
_SINGLE_KEY = re.compile(r"^single_qubit_gate_error_q(\d+)$")
_READOUT_KEY = re.compile(r"^readout_error_q(\d+)$")


@dataclass(frozen=True)
class NoiseModel:
    """Per-qubit gate/readout error rates and per-pair two-qubit gate rates."""

    single_qubit_gate_error: tuple[float, ...]
    two_qubit_gate_error: dict[tuple[int, int], float]
    readout_error: tuple[float, ...]

    def __post_init__(self) -> None:
        rates = (
            list(self.single_qubit_gate_error)
            + list(self.two_qubit_gate_error.values())
            + list(self.readout_error)
        )
        for r in rates:
            if not 0.0 <= r <= 1.0:
                raise ValueError(f"error rate {r!r} outside [0, 1]")
        if len(self.single_qubit_gate_error) != len(self.readout_error):
            raise ValueError("gate and readout rate lists must cover the same qubits")

    @classmethod
    def table2(cls) -> NoiseModel:
        return cls(TABLE2_SINGLE_QUBIT, dict(TABLE2_TWO_QUBIT), TABLE2_READOUT)

    @classmethod
    def zero(cls) -> NoiseModel:
        return cls(
            (0.0, 0.0, 0.0), {pair: 0.0 for pair in TABLE2_TWO_QUBIT}, (0.0, 0.0, 0.0)
        )

    def scaled(self, factor: float) -> NoiseModel:
        """All rates multiplied by `factor`; fails if any leaves [0, 1]."""
        if factor < 0:
            raise ValueError(f"scale factor must be nonnegative, got {factor!r}")
        return NoiseModel(
            tuple(r * factor for r in self.single_qubit_gate_error),
            {k: v * factor for k, v in self.two_qubit_gate_error.items()},
            tuple(r * factor for r in self.readout_error),
        )

    def qubit_gate_rate(self, qubit: int) -> float:
        return self.single_qubit_gate_error[qubit]

    def pair_gate_rate(self, a: int, b: int) -> float:
        if (a, b) in self.two_qubit_gate_error:
            return self.two_qubit_gate_error[(a, b)]
        if (b, a) in self.two_qubit_gate_error:
            return self.two_qubit_gate_error[(b, a)]
        raise KeyError(f"no two-qubit error rate for pair ({a}, {b})")

    def readout_rate(self, qubit: int) -> float:
        return self.readout_error[qubit]

    def to_config_text(self) -> str:
        """key = value lines; values use repr so round-trips are bit-exact."""
        lines = []
        for q, v in enumerate(self.single_qubit_gate_error):
            lines.append(f"single_qubit_gate_error_q{q} = {v!r}")
        for q, v in enumerate(self.readout_error):
            lines.append(f"readout_error_q{q} = {v!r}")
        for (a, b), v in sorted(self.two_qubit_gate_error.items()):
            lines.append(f"two_qubit_gate_error_q{a}_q{b} = {v!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_config_text(cls, text: str) -> NoiseModel:
        singles: dict[int, float] = {}
        readouts: dict[int, float] = {}
        pairs: dict[tuple[int, int], float] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f'line {lineno}: expected "key = value", got "{raw}"')
            key, _, value = line.partition("=")
            key = key.strip()
            try:
                rate = float(value.strip())
            except ValueError:
                raise ValueError(
                    f'line {lineno}: value for "{key}" is not a number'
                ) from None
            if m := _SINGLE_KEY.match(key):
                singles[int(m.group(1))] = rate
            elif m := _READOUT_KEY.match(key):
                readouts[int(m.group(1))] = rate
            elif m := _PAIR_KEY.match(key):
                pairs[(int(m.group(1)), int(m.group(2)))] = rate
            else:
                raise ValueError(f'line {lineno}: unknown key "{key}"')
        for label, rates in (("single_qubit_gate_error", singles),
                             ("readout_error", readouts)):
            if sorted(rates) != list(range(len(rates))) or not rates:
                raise ValueError(
                    f"{label} keys must cover qubits 0..n-1 contiguously, "
                    f"got qubits {sorted(rates)}"
                )
        return cls(
            tuple(singles[q] for q in range(len(singles))),
            pairs,
            tuple(readouts[q] for q in range(len(readouts))),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_config_text())

    @classmethod
    def load(cls, path: str | Path) -> NoiseModel:
        return cls.from_config_text(Path(path).read_text())


def depolarize(rho: DensityMatrix, qubits, p: float) -> DensityMatrix:
    """(1-p) * rho + p * (maximally mixed on `qubits`, reduced state elsewhere)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing probability {p!r} outside [0, 1]")
    targets = sorted({int(q) for q in qubits})
    n = rho.num_qubits
    if not targets:
        raise ValueError("depolarize needs at least one target qubit")
    for q in targets:
        if not 0 <= q < n:
            raise ValueError(f"target {q} out of range for {n} qubit(s)")
    if p == 0.0:
        return rho
    dim = 2**n
    kept = [q for q in range(n) if q not in targets]
    if kept:
        reduced = partial_trace(rho, kept)
        row = list(ascii_lowercase[:n])
        col = list(ascii_lowercase[n : 2 * n])
        subs = ["".join(row[q] for q in kept) + "".join(col[q] for q in kept)]
        operands = [reduced.entries.reshape((2,) * (2 * len(kept)))]
        for t in targets:
            subs.append(row[t] + col[t])
            operands.append(np.eye(2) / 2.0)
        out = "".join(row) + "".join(col)
        mixed = np.einsum(",".join(subs) + "->" + out, *operands).reshape(dim, dim)
    else:
        mixed = np.eye(dim, dtype=np.complex128) / dim
    return DensityMatrix(n, (1.0 - p) * rho.entries + p * mixed)


def apply_readout_confusion(probs: np.ndarray, rates) -> np.ndarray:
    """Push a probability vector through per-qubit symmetric bit-flip
    confusion matrices [[1-e, e], [e, 1-e]]."""
    n = int(np.log2(probs.size))
    p = probs.reshape((2,) * n)
    for q, e in enumerate(rates):
        m = np.array([[1.0 - e, e], [e, 1.0 - e]])
        p = np.moveaxis(np.tensordot(m, p, axes=([1], [q])), 0, q)
    return p.reshape(-1)


def run_noisy(
    algorithm: str, oracles: BoolFn | PromisePair, model: NoiseModel
) -> dict[str, float]:
    """Exact density-matrix run of the chosen circuit with a depolarizing
    channel after every gate (at that gate's rate) and readout confusion on
    the final distribution. Returns bitstring -> probability."""
    ops, n = circuit_ops(algorithm, oracles)
    rho = DensityMatrix.from_state(basis_state(n, 0))
    for op in ops:
        rho = apply_gate_density(rho, op.matrix, op.targets)
        if len(op.targets) == 1:
            rate = model.qubit_gate_rate(op.targets[0])
        else:
            rate = model.pair_gate_rate(*op.targets)
        if rate > 0.0:
            rho = depolarize(rho, op.targets, rate)
    probs = apply_readout_confusion(rho.probabilities(), model.readout_error[:n])
    return {
        format(i, f"0{n}b"): float(p)
        for i, p in enumerate(probs)
        if p >= PROB_CUTOFF
    }


@dataclass(frozen=True)
class ShotResult:
    """Finite-shot counts over outcome bitstrings."""

    shots: int
    counts: dict[str, int]

    def __post_init__(self) -> None:
        if self.shots <= 0:
            raise ValueError(f"shots must be positive, got {self.shots}")
        if any(c < 0 for c in self.counts.values()):
            raise ValueError("counts must be nonnegative")
        total = sum(self.counts.values())
        if total != self.shots:
            raise ValueError(f"counts sum to {total}, expected {self.shots}")


def sample_shots(dist: Mapping[str, float], shots: int, seed: int) -> ShotResult:
    """Seeded multinomial draw; identical seeds give identical counts."""
    if shots <= 0:
        raise ValueError(f"shots must be positive, got {shots}")
    keys = sorted(dist)
    p = np.array([dist[k] for k in keys], dtype=float)
    if p.size == 0 or np.any(p < 0):
        raise ValueError("distribution must have nonnegative entries")
    total = float(p.sum())
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"distribution sums to {total!r}, not 1")
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, p / total)
    return ShotResult(shots, {k: int(c) for k, c in zip(keys, draws) if c})


def bhattacharyya(p: Mapping[str, float], q: Mapping[str, float]) -> float:
    """Sum over outcomes of sqrt(p_k * q_k): 1 iff the distributions are
    equal, 0 iff their supports are disjoint. Symmetric in its arguments."""
    total = 0.0
    for k in set(p) & set(q):
        pk, qk = p[k], q[k]
        if pk > 0.0 and qk > 0.0:
            total += float(np.sqrt(pk * qk))
    return min(total, 1.0)


@dataclass(frozen=True)
class FidelityReport:
    """Statistical fidelity between an observed and a reference distribution,
    with a Poisson-bootstrap standard error."""

    fidelity: float
    stderr: float
    p_exp: dict[str, float]
    p_th: dict[str, float]

    def __post_init__(self) -> None:
        if not 0.0 <= self.fidelity <= 1.0:
            raise ValueError(f"fidelity {self.fidelity!r} outside [0, 1]")
        if self.stderr < 0.0:
            raise ValueError(f"stderr must be nonnegative, got {self.stderr!r}")
        recomputed = bhattacharyya(self.p_exp, self.p_th)
        if abs(recomputed - self.fidelity) > 1e-12:
            raise ValueError(
                f"fidelity {self.fidelity!r} does not match its distributions "
                f"(recomputed {recomputed!r})"
            )


def statistical_fidelity(
    result: ShotResult,
    p_th: Mapping[str, float],
    *,
    seed: int = 0,
    resamples: int = 1000,
) -> FidelityReport:
    """Fidelity of the empirical count distribution against `p_th`.

    The standard error is a Poisson bootstrap: each count is resampled as
    Poisson(count), renormalized, and the fidelity recomputed; the standard
    deviation over `resamples` seeded draws is reported.
    """
    p_exp = {k: c / result.shots for k, c in result.counts.items()}
    fid = bhattacharyya(p_exp, p_th)
    keys = sorted(set(result.counts) | set(p_th))
    base = np.array([result.counts.get(k, 0) for k in keys], dtype=float)
    theory = np.array([p_th.get(k, 0.0) for k in keys], dtype=float)
    rng = np.random.default_rng(seed)
    draws = rng.poisson(lam=base, size=(resamples, len(keys))).astype(float)
    totals = draws.sum(axis=1, keepdims=True)
    resampled = np.sqrt(draws / np.where(totals == 0, 1.0, totals) * theory).sum(axis=1)
    resampled[totals[:, 0] == 0] = 0.0
    return FidelityReport(
        fidelity=fid,
        stderr=float(np.std(resampled)),
        p_exp=p_exp,
        p_th=dict(p_th),
    )
