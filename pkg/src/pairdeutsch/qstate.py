"""Dense simulation primitives for few-qubit pure states and density matrices.

Bit convention, used everywhere downstream: big-endian. Qubit 0 is the most
significant bit of a basis index, so a bitstring reads left to right as
qubits 0, 1, 2, ... and for three qubits "100" (qubit 0 set) is index 4.

All values are immutable after construction and all operations are pure
functions returning new values, so states can be shared freely across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from string import ascii_lowercase
from typing import Sequence

import numpy as np

ATOL = 1e-10        # tolerance for exact-arithmetic identities
EIG_ATOL = 1e-9     # tolerance for eigenvalue / SVD based checks
PROB_CUTOFF = 1e-12  # probabilities below this are dropped from distributions
MAX_QUBITS = 12     # dense representation only; dim 4096 is the ceiling


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class StateVector:
    """Normalized complex amplitudes over the 2**num_qubits basis states."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(
                f"num_qubits must be in 1..{MAX_QUBITS}, got {self.num_qubits}"
            )
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != 2**self.num_qubits:
            raise ValueError(
                f"expected {2**self.num_qubits} amplitudes, got {amps.size}"
            )
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2 - 1.0) > ATOL:
            raise ValueError(f"state is not normalized: sum |a|^2 = {norm2!r}")
        object.__setattr__(self, "amplitudes", _readonly(amps.copy()))

    def overlap(self, other: StateVector) -> float:
        """|<self|other>|, the global-phase-insensitive overlap magnitude."""
        if other.num_qubits != self.num_qubits:
            raise ValueError("overlap requires equal qubit counts")
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)))

    def tensor(self, other: StateVector) -> StateVector:
        """Tensor product, self's qubits first (more significant)."""
        return StateVector(
            self.num_qubits + other.num_qubits,
            np.kron(self.amplitudes, other.amplitudes),
        )


def basis_state(num_qubits: int, index: int) -> StateVector:
    """Computational basis state |index> under the big-endian convention."""
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ValueError(f"num_qubits must be in 1..{MAX_QUBITS}, got {num_qubits}")
    if not 0 <= index < 2**num_qubits:
        raise ValueError(
            f"basis index {index} out of range for {num_qubits} qubit(s)"
        )
    amps = np.zeros(2**num_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(num_qubits, amps)


def _const(entries) -> np.ndarray:
    return _readonly(np.array(entries, dtype=np.complex128))


I2 = _const([[1, 0], [0, 1]])
X = _const([[0, 1], [1, 0]])
Z = _const([[1, 0], [0, -1]])
H = _const(np.array([[1, 1], [1, -1]]) / np.sqrt(2.0))


def is_unitary(matrix: np.ndarray, tol: float = ATOL) -> bool:
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=tol))


def controlled(gate: np.ndarray) -> np.ndarray:
    """4x4 block unitary: identity while the control (most significant
    qubit) is 0, `gate` on the target while it is 1."""
    g = np.asarray(gate, dtype=np.complex128)
    if g.shape != (2, 2):
        raise ValueError(f"controlled() expects a 2x2 gate, got shape {g.shape}")
    if not is_unitary(g):
        raise ValueError("controlled() expects a unitary gate")
    out = np.eye(4, dtype=np.complex128)
    out[2:, 2:] = g
    return out


CNOT = _readonly(controlled(X))


def apply_gate(
    state: StateVector, gate: np.ndarray, targets: Sequence[int]
) -> StateVector:
    """Apply `gate` to the listed qubits, identity elsewhere.

    The first target binds the gate's most significant axis, matching the
    big-endian basis ordering of the gate matrix itself.
    """
    g = np.asarray(gate, dtype=np.complex128)
    targets = tuple(int(t) for t in targets)
    k = len(targets)
    if k == 0:
        raise ValueError("apply_gate needs at least one target qubit")
    if len(set(targets)) != k:
        raise ValueError(f"repeated target qubit in {targets}")
    for t in targets:
        if not 0 <= t < state.num_qubits:
            raise ValueError(
                f"target {t} out of range for {state.num_qubits} qubit(s)"
            )
    if g.shape != (2**k, 2**k):
        raise ValueError(
            f"gate of shape {g.shape} cannot act on {k} target qubit(s)"
        )
    n = state.num_qubits
    psi = state.amplitudes.reshape((2,) * n)
    gt = g.reshape((2,) * (2 * k))
    out = np.tensordot(gt, psi, axes=(tuple(range(k, 2 * k)), targets))
    out = np.moveaxis(out, tuple(range(k)), targets)
    return StateVector(n, out.reshape(-1))


def measurement_distribution(state: StateVector) -> dict[int, float]:
    """Born-rule probabilities keyed by basis index; entries below the
    1e-12 cutoff are omitted."""
    probs = np.abs(state.amplitudes) ** 2
    return {int(i): float(p) for i, p in enumerate(probs) if p >= PROB_CUTOFF}


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix on n qubits."""

    num_qubits: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(
                f"num_qubits must be in 1..{MAX_QUBITS}, got {self.num_qubits}"
            )
        dim = 2**self.num_qubits
        m = np.asarray(self.entries, dtype=np.complex128)
        if m.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got shape {m.shape}")
        if not np.allclose(m, m.conj().T, atol=ATOL):
            raise ValueError("density matrix is not Hermitian")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > ATOL:
            raise ValueError(f"density matrix trace is {tr!r}, not 1")
        min_eig = float(np.linalg.eigvalsh(m).min())
        if min_eig < -EIG_ATOL:
            raise ValueError(f"density matrix has negative eigenvalue {min_eig!r}")
        object.__setattr__(self, "entries", _readonly(m.copy()))

    @classmethod
    def from_state(cls, state: StateVector) -> DensityMatrix:
        return cls(
            state.num_qubits, np.outer(state.amplitudes, state.amplitudes.conj())
        )

    def probabilities(self) -> np.ndarray:
        """Diagonal as a real probability vector; eigenvalue-tolerance
        negatives are clipped and the vector renormalized."""
        p = np.clip(np.real(np.diag(self.entries)), 0.0, None)
        return p / p.sum()


def expanded_unitary(
    gate: np.ndarray, targets: Sequence[int], num_qubits: int
) -> np.ndarray:
    """Embed `gate` acting on `targets` into the full 2**n unitary."""
    dim = 2**num_qubits
    cols = [
        apply_gate(basis_state(num_qubits, i), gate, targets).amplitudes
        for i in range(dim)
    ]
    return np.column_stack(cols)


def apply_gate_density(
    rho: DensityMatrix, gate: np.ndarray, targets: Sequence[int]
) -> DensityMatrix:
    u = expanded_unitary(gate, targets, rho.num_qubits)
    return DensityMatrix(rho.num_qubits, u @ rho.entries @ u.conj().T)


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Trace out every qubit not listed in `keep`.

    The output qubit order follows the `keep` list, so keep=[1, 0] also
    swaps the two remaining qubits.
    """
    keep = [int(q) for q in keep]
    if not keep:
        raise ValueError("keep list must be non-empty")
    if len(set(keep)) != len(keep):
        raise ValueError(f"repeated qubit in keep={keep}")
    n = rho.num_qubits
    for q in keep:
        if not 0 <= q < n:
            raise ValueError(f"keep qubit {q} out of range for {n} qubit(s)")
    row = list(ascii_lowercase[:n])
    col = list(ascii_lowercase[n : 2 * n])
    for q in range(n):
        if q not in keep:
            col[q] = row[q]  # repeated index contracts: trace over qubit q
    src = "".join(row) + "".join(col)
    dst = "".join(row[q] for q in keep) + "".join(col[q] for q in keep)
    k = len(keep)
    reduced = np.einsum(f"{src}->{dst}", rho.entries.reshape((2,) * (2 * n)))
    return DensityMatrix(k, reduced.reshape(2**k, 2**k))


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2): 1 for pure states, 1/dim for the maximally mixed state."""
    return float(np.real(np.trace(rho.entries @ rho.entries)))
