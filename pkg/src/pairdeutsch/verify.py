"""Exhaustive build verification, wired for CI and the `verify` CLI command.

Runs every promise pair through both pair-testing circuits, checks the
decoded answers against the truth tables, checks query accounting, and
checks the separability claims: the two-query circuit passes through an
entangled state, the three-query circuit never does.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algorithms
from .entanglement import PRODUCT_TOL, schmidt_analyze, trace_run_separability
from .oracles import NAMED_FUNCTIONS, all_promise_pairs, is_balanced, same_at_zero

CORRECT_MASS_TOL = 1e-10
DEUTSCH_TOL = 1e-12
INIT_SCHMIDT_FLOOR = 1.0 / np.sqrt(2.0) - 1e-6


class VerificationError(Exception):
    pass


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> dict[str, str]:
        """Passed/total per check group (the prefix before the first colon)."""
        groups: dict[str, list[bool]] = {}
        for c in self.checks:
            groups.setdefault(c.name.split(":", 1)[0], []).append(c.passed)
        return {k: f"{sum(v)}/{len(v)}" for k, v in sorted(groups.items())}


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise VerificationError(message)


def _check(name: str, fn) -> CheckResult:
    try:
        detail = fn()
    except Exception as exc:  # failures become report entries, not crashes
        return CheckResult(name, False, str(exc))
    return CheckResult(name, True, detail or "ok")


def _pair_correctness(runner, pair, expected_queries: dict[str, int]) -> str:
    record = runner(pair)
    truth = (is_balanced(pair.f), same_at_zero(pair))
    _require(
        record.query_counts == expected_queries,
        f"query counts {record.query_counts}, expected {expected_queries}",
    )
    decoded = (record.decoded.balanced, record.decoded.different)
    _require(decoded == truth, f"decoded {decoded}, truth {truth}")
    correct_mass = sum(
        p
        for outcome, p in record.final_distribution.items()
        if (lambda d: (d.balanced, d.different))(algorithms.decode(outcome)) == truth
    )
    _require(
        abs(correct_mass - 1.0) <= CORRECT_MASS_TOL,
        f"correct outcomes carry probability {correct_mass!r}, not 1",
    )
    return f"decoded {decoded} with probability 1"


def _deutsch_correctness(fn) -> str:
    record = algorithms.run_deutsch(fn)
    _require(
        record.query_counts == {"f": 1},
        f"query counts {record.query_counts}, expected {{'f': 1}}",
    )
    want = is_balanced(fn)
    _require(
        record.decoded.balanced == want,
        f"decoded balanced={record.decoded.balanced}, truth {want}",
    )
    marginal = sum(
        p
        for outcome, p in record.final_distribution.items()
        if int(outcome[0]) == want
    )
    _require(
        abs(marginal - 1.0) <= DEUTSCH_TOL,
        f"answer-qubit marginal {marginal!r}, not 1",
    )
    return f"answer bit {want} with probability 1"


def _entangled_separability(pair) -> str:
    record = algorithms.run_entangled_pair(pair)
    trace = trace_run_separability(record)
    _require(
        any(not product for _, product in trace),
        "no entangled step found in the two-query run",
    )
    init = dict(record.step_states)["initialize"]
    second = max(
        schmidt_analyze(init, [q]).schmidt_coefficients[1]
        for q in range(init.num_qubits)
    )
    _require(
        second >= INIT_SCHMIDT_FLOOR,
        f"initialization second Schmidt coefficient {second!r} below"
        f" {INIT_SCHMIDT_FLOOR!r}",
    )
    return f"entangled at initialization (second coefficient {second:.6f})"


def _product_separability(pair) -> str:
    record = algorithms.run_product_pair(pair)
    worst = 0.0
    for label, state in record.step_states:
        second = max(
            schmidt_analyze(state, [q]).schmidt_coefficients[1]
            for q in range(state.num_qubits)
        )
        worst = max(worst, second)
        _require(
            second < PRODUCT_TOL,
            f'step "{label}" has second Schmidt coefficient {second!r}',
        )
    return f"all steps product (worst second coefficient {worst:.2e})"


def verify_build() -> VerificationReport:
    checks: list[CheckResult] = []
    for pair in all_promise_pairs():
        label = pair.label()
        checks.append(
            _check(
                f"correctness-entangled:{label}",
                lambda p=pair: _pair_correctness(
                    algorithms.run_entangled_pair, p, {"f": 1, "g": 1}
                ),
            )
        )
        checks.append(
            _check(
                f"correctness-product:{label}",
                lambda p=pair: _pair_correctness(
                    algorithms.run_product_pair, p, {"f": 2, "g": 1}
                ),
            )
        )
        checks.append(
            _check(
                f"separability-entangled:{label}",
                lambda p=pair: _entangled_separability(p),
            )
        )
        checks.append(
            _check(
                f"separability-product:{label}",
                lambda p=pair: _product_separability(p),
            )
        )
    for name, fn in NAMED_FUNCTIONS.items():
        checks.append(
            _check(f"correctness-deutsch:{name}", lambda f=fn: _deutsch_correctness(f))
        )
    return VerificationReport(tuple(checks))
