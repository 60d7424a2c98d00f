"""Separability certificates for pure states and the product-state oracle audit.

Two computational audits back the claim that the two-query pair test needs
entanglement. First, a CNOT acting on a two-qubit product state (a|0>+b|1>)
(c|0>+d|1>) stays product exactly when a*b*(c^2-d^2) = 0; the algebraic
criterion is checked against a numerical Schmidt test. Second, for each of
the four input families that survive that criterion, one oracle query is
shown to make at most one of f(0), f(1), f(0)^f(1) perfectly decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .algorithms import RunRecord
from .oracles import B1, B2, C1, C2, BoolFn, oracle_unitary
from .qstate import ATOL, CNOT, StateVector, apply_gate

PRODUCT_TOL = 1e-9  # second Schmidt coefficient below this counts as product

KET0_FAMILY = "ket0-tensor-any"
KET1_FAMILY = "ket1-tensor-any"
PLUS_FAMILY = "any-tensor-plus"
MINUS_FAMILY = "any-tensor-minus"
FAMILIES = (KET0_FAMILY, KET1_FAMILY, PLUS_FAMILY, MINUS_FAMILY)

QUANTITIES = ("f0", "f1", "f0_xor_f1")

_AUDIT_FUNCTIONS = (C1, C2, B1, B2)
_SQRT_HALF = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class SeparabilityVerdict:
    bipartition: tuple[tuple[int, ...], tuple[int, ...]]
    schmidt_coefficients: tuple[float, ...]
    is_product: bool


def schmidt_analyze(state: StateVector, left: Iterable[int]) -> SeparabilityVerdict:
    """Schmidt coefficients across the bipartition: singular values of the
    amplitude tensor reshaped to (left qubits) x (remaining qubits),
    sorted descending. Product iff the second coefficient vanishes."""
    left_qubits = sorted({int(q) for q in left})
    n = state.num_qubits
    if not left_qubits or len(left_qubits) == n:
        raise ValueError("bipartition must be a non-empty proper subset")
    for q in left_qubits:
        if not 0 <= q < n:
            raise ValueError(f"qubit {q} out of range for {n} qubit(s)")
    right = [q for q in range(n) if q not in left_qubits]
    psi = state.amplitudes.reshape((2,) * n)
    mat = np.transpose(psi, axes=left_qubits + right).reshape(
        2 ** len(left_qubits), -1
    )
    coeffs = np.linalg.svd(mat, compute_uv=False)
    second = float(coeffs[1]) if coeffs.size > 1 else 0.0
    return SeparabilityVerdict(
        bipartition=(tuple(left_qubits), tuple(right)),
        schmidt_coefficients=tuple(float(c) for c in coeffs),
        is_product=second < PRODUCT_TOL,
    )


def fully_product(state: StateVector) -> bool:
    """True when every single-qubit-vs-rest bipartition is product."""
    if state.num_qubits < 2:
        raise ValueError("fully_product needs at least two qubits")
    return all(
        schmidt_analyze(state, [q]).is_product for q in range(state.num_qubits)
    )


@dataclass(frozen=True)
class ProductStateParams:
    """Amplitudes (alpha, beta) of the oracle's input wire and (gamma, delta)
    of its target wire, each pair normalized."""

    alpha: complex
    beta: complex
    gamma: complex
    delta: complex

    def __post_init__(self) -> None:
        pairs = (
            ("alpha/beta", self.alpha, self.beta),
            ("gamma/delta", self.gamma, self.delta),
        )
        for label, a, b in pairs:
            norm2 = abs(a) ** 2 + abs(b) ** 2
            if abs(norm2 - 1.0) > ATOL:
                raise ValueError(
                    f"{label} amplitudes not normalized: sum of squares {norm2!r}"
                )

    def input_state(self) -> StateVector:
        return StateVector(1, np.array([self.alpha, self.beta]))

    def target_state(self) -> StateVector:
        return StateVector(1, np.array([self.gamma, self.delta]))

    def product_state(self) -> StateVector:
        return self.input_state().tensor(self.target_state())


def cnot_product_condition(params: ProductStateParams) -> tuple[bool, bool]:
    """(algebraic prediction, numerical verdict) for whether a CNOT leaves
    the product state separable.

    The prediction is |alpha*beta*(gamma^2 - delta^2)| ~ 0 (complex squares,
    not magnitudes); the verdict applies the gate and runs the Schmidt test.
    The two must agree.
    """
    det = params.alpha * params.beta * (params.gamma**2 - params.delta**2)
    predicted = abs(det) < PRODUCT_TOL
    out = apply_gate(params.product_state(), CNOT, (0, 1))
    actual = schmidt_analyze(out, [0]).is_product
    return predicted, actual


def family_input_state(family: str, params: ProductStateParams) -> StateVector:
    """Project params onto the family shape: the family fixes one tensor
    factor and takes the free factor from params."""
    if family == KET0_FAMILY:
        ctrl, tgt = (1.0, 0.0), (params.gamma, params.delta)
    elif family == KET1_FAMILY:
        ctrl, tgt = (0.0, 1.0), (params.gamma, params.delta)
    elif family == PLUS_FAMILY:
        ctrl, tgt = (params.alpha, params.beta), (_SQRT_HALF, _SQRT_HALF)
    elif family == MINUS_FAMILY:
        ctrl, tgt = (params.alpha, params.beta), (_SQRT_HALF, -_SQRT_HALF)
    else:
        raise ValueError(
            f'unknown family "{family}" (known: {", ".join(FAMILIES)})'
        )
    return StateVector(1, np.array(ctrl)).tensor(StateVector(1, np.array(tgt)))


def oracle_output_overlaps(
    family: str, params: ProductStateParams
) -> dict[tuple[str, str], float]:
    """Pairwise |<out_i|out_j>| after querying each of the four named
    functions on the family's input state."""
    state = family_input_state(family, params)
    outs = {
        fn.name: apply_gate(state, oracle_unitary(fn), (0, 1))
        for fn in _AUDIT_FUNCTIONS
    }
    names = [fn.name for fn in _AUDIT_FUNCTIONS]
    return {(a, b): outs[a].overlap(outs[b]) for a in names for b in names if a < b}


def _quantity_value(fn: BoolFn, quantity: str) -> int:
    return {"f0": fn.f0, "f1": fn.f1, "f0_xor_f1": fn.f0 ^ fn.f1}[quantity]


def _decidable_quantities(
    overlaps: dict[tuple[str, str], float]
) -> tuple[str, ...]:
    """Quantities whose value-partition of the four functions has all
    cross-group output overlaps below threshold (one-shot perfect
    discrimination by orthogonality)."""
    decidable = []
    for quantity in QUANTITIES:
        groups: dict[int, list[str]] = {0: [], 1: []}
        for fn in _AUDIT_FUNCTIONS:
            groups[_quantity_value(fn, quantity)].append(fn.name)
        cross = [
            overlaps[(a, b) if a < b else (b, a)]
            for a in groups[0]
            for b in groups[1]
        ]
        if all(c < PRODUCT_TOL for c in cross):
            decidable.append(quantity)
    return tuple(decidable)


@dataclass(frozen=True)
class FamilySampleVerdict:
    params: ProductStateParams
    decidable: tuple[str, ...]


@dataclass(frozen=True)
class FamilyAuditReport:
    family: str
    samples: tuple[FamilySampleVerdict, ...]
    decidable: tuple[str, ...]  # union over all samples

    @property
    def at_most_one_decidable(self) -> bool:
        """True when no sample (and hence the union) decides two quantities."""
        return len(self.decidable) <= 1 and all(
            len(s.decidable) <= 1 for s in self.samples
        )


def audit_family_distinguishability(
    family: str, sample_params: Sequence[ProductStateParams]
) -> FamilyAuditReport:
    """For every sampled input in the family, query all four functions and
    report which of f(0), f(1), f(0)^f(1) is perfectly decidable."""
    verdicts = []
    for params in sample_params:
        overlaps = oracle_output_overlaps(family, params)
        verdicts.append(FamilySampleVerdict(params, _decidable_quantities(overlaps)))
    seen = {q for v in verdicts for q in v.decidable}
    union = tuple(q for q in QUANTITIES if q in seen)
    return FamilyAuditReport(family=family, samples=tuple(verdicts), decidable=union)


def bloch_grid_params(
    theta_points: int = 51, phi_points: int = 52
) -> list[ProductStateParams]:
    """Deterministic single-qubit grid, polar x azimuthal, used for both free
    factors; families pick out whichever factor they need.

    Point counts are chosen so the grid hits the special angles exactly:
    theta = pi/2 (equal magnitudes) and phi in {0, pi/2, pi, 3pi/2}.
    """
    params = []
    for theta in np.linspace(0.0, np.pi, theta_points):
        a = complex(np.cos(theta / 2))
        s = np.sin(theta / 2)
        for phi in np.linspace(0.0, 2 * np.pi, phi_points, endpoint=False):
            b = s * np.exp(1j * phi)
            params.append(ProductStateParams(a, b, a, b))
    return params


def random_product_params(count: int, seed: int) -> list[ProductStateParams]:
    """Haar-distributed single-qubit factors from a seeded generator."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        factors = []
        for _ in range(2):
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            v = v / np.linalg.norm(v)
            factors.append(v)
        out.append(
            ProductStateParams(
                factors[0][0], factors[0][1], factors[1][0], factors[1][1]
            )
        )
    return out


def trace_run_separability(record: RunRecord) -> list[tuple[str, bool]]:
    """fully_product verdict for every recorded step of a run."""
    return [(label, fully_product(state)) for label, state in record.step_states]
