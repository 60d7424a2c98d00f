"""Command-line front end: run circuits, verify the build, audit the
separability theorem, compute statistical fidelity, sweep noise scaling.

Exit codes: 0 success, 1 failed checks, 2 usage errors, 3 internal errors.
Every failure path prints a single "error: ..." line to stderr.

Bitstrings everywhere are big-endian: the answer qubit first, then the two
work qubits, so "100" means the answer qubit read 1 and both work qubits 0.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from io import StringIO

from . import __version__, algorithms
from .algorithms import DEUTSCH, ENTANGLED_PAIR, PRODUCT_PAIR
from .entanglement import (
    FAMILIES,
    audit_family_distinguishability,
    bloch_grid_params,
    cnot_product_condition,
    random_product_params,
    trace_run_separability,
)
from .noise import (
    NoiseModel,
    ShotResult,
    bhattacharyya,
    run_noisy,
    sample_shots,
    statistical_fidelity,
)
from .oracles import BoolFn, PromisePair, parse_oracle
from .verify import verify_build

SEED_ENV_VAR = "PAIRDEUTSCH_SEED"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

_ALGORITHM_NAMES = {
    "deutsch": DEUTSCH,
    "entangled": ENTANGLED_PAIR,
    "entangled_pair": ENTANGLED_PAIR,
    "product": PRODUCT_PAIR,
    "product_pair": PRODUCT_PAIR,
}

_ORACLE_TOKEN = r"(?:[BC][12]|[01]:[01],[01]:[01])"
_THEORY_SPEC = re.compile(
    rf"^(?P<alg>[a-z_]+):(?P<f>{_ORACLE_TOKEN})(?:,(?P<g>{_ORACLE_TOKEN}))?$"
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures to our exit codes
        raise UsageError(message)


@dataclass(frozen=True)
class RunRequest:
    command: str
    algorithm: str | None = None
    oracle_f: BoolFn | None = None
    oracle_g: BoolFn | None = None
    shots: int | None = None  # None means exact probabilities
    noise: str = "off"
    seed: int = 0
    output: str = "json"
    counts_path: str | None = None
    scales: tuple[float, ...] | None = None
    samples: int = 1000
    grid: int = 51

    def as_dict(self) -> dict:
        d: dict = {"command": self.command, "seed": self.seed, "output": self.output}
        if self.algorithm is not None:
            d["algorithm"] = self.algorithm
        if self.oracle_f is not None:
            d["f"] = {"name": self.oracle_f.name, "table": self.oracle_f.table_text()}
        if self.oracle_g is not None:
            d["g"] = {"name": self.oracle_g.name, "table": self.oracle_g.table_text()}
        if self.command in ("run", "fidelity"):
            d["shots"] = self.shots if self.shots is not None else "exact"
        if self.command in ("run", "sweep-noise"):
            d["noise"] = self.noise
        if self.counts_path is not None:
            d["counts"] = self.counts_path
        if self.scales is not None:
            d["scales"] = list(self.scales)
        if self.command == "audit-theorem":
            d["samples"] = self.samples
            d["grid"] = self.grid
        return d


@dataclass(frozen=True)
class ResultEnvelope:
    request: RunRequest
    payload: dict
    version: str
    timestamp: str

    def as_dict(self) -> dict:
        return {
            "request": self.request.as_dict(),
            "version": self.version,
            "timestamp": self.timestamp,
            **self.payload,
        }


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None


def _parse_shots(text: str) -> int | None:
    if text == "exact":
        return None
    try:
        shots = int(text)
    except ValueError:
        raise UsageError(f'--shots must be a positive integer or "exact", got "{text}"')
    if shots <= 0:
        raise UsageError(f"--shots must be positive, got {shots}")
    return shots


def _parse_oracle_flag(flag: str, text: str) -> BoolFn:
    try:
        return parse_oracle(text)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _parse_scales(text: str) -> tuple[float, ...]:
    scales = []
    for token in text.split(","):
        try:
            scales.append(float(token.strip()))
        except ValueError:
            raise UsageError(f'--scales: "{token}" is not a number') from None
    if not scales:
        raise UsageError("--scales must list at least one factor")
    return tuple(scales)


def _build_parser() -> _Parser:
    parser = _Parser(prog="pairdeutsch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute one algorithm")
    run.add_argument("--algorithm", required=True, choices=sorted(_ALGORITHM_NAMES))
    run.add_argument("--f", required=True, help='oracle: B1/B2/C1/C2 or "0:b,1:b"')
    run.add_argument("--g", help="second oracle (pair algorithms only)")
    run.add_argument("--shots", default="exact", help='shot count or "exact"')
    run.add_argument("--noise", default="off", help="off | table2 | config path")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--output", default="json", choices=("json", "csv"))

    ver = sub.add_parser("verify", help="exhaustive correctness and separability suite")
    ver.add_argument("--output", default="json", choices=("json",))

    audit = sub.add_parser("audit-theorem", help="separability theorem audit")
    audit.add_argument("--samples", type=int, default=1000)
    audit.add_argument("--grid", type=int, default=51)
    audit.add_argument("--seed", type=int, default=None)
    audit.add_argument("--output", default="json", choices=("json",))

    fid = sub.add_parser("fidelity", help="statistical fidelity of counts vs theory")
    fid.add_argument("--counts", required=True, help="JSON file of bitstring counts")
    fid.add_argument(
        "--theory", required=True, help="reference run, e.g. entangled:B1,B1"
    )
    fid.add_argument("--seed", type=int, default=None)
    fid.add_argument("--output", default="json", choices=("json",))

    sweep = sub.add_parser("sweep-noise", help="fidelity under scaled noise rates")
    sweep.add_argument(
        "--algorithm", required=True, choices=sorted(_ALGORITHM_NAMES)
    )
    sweep.add_argument("--f", required=True)
    sweep.add_argument("--g")
    sweep.add_argument("--scales", default="0,0.5,1,2")
    sweep.add_argument("--noise", default="table2", help="table2 | config path")
    sweep.add_argument("--seed", type=int, default=None)
    sweep.add_argument("--output", default="json", choices=("json", "csv"))
    return parser


def _oracles_for(
    algorithm: str, f: BoolFn, g: BoolFn | None
) -> BoolFn | PromisePair:
    if algorithm == DEUTSCH:
        if g is not None:
            raise UsageError("--g is not accepted for the deutsch algorithm")
        return f
    if g is None:
        raise UsageError(f"--g is required for the {algorithm} algorithm")
    try:
        return PromisePair(f, g)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_request(argv: list[str]) -> RunRequest:
    ns = _build_parser().parse_args(argv)
    seed = ns.seed if getattr(ns, "seed", None) is not None else _default_seed()
    if ns.command == "run":
        algorithm = _ALGORITHM_NAMES[ns.algorithm]
        f = _parse_oracle_flag("--f", ns.f)
        g = _parse_oracle_flag("--g", ns.g) if ns.g is not None else None
        _oracles_for(algorithm, f, g)  # validates pairing and the promise
        return RunRequest(
            command="run",
            algorithm=algorithm,
            oracle_f=f,
            oracle_g=g,
            shots=_parse_shots(ns.shots),
            noise=ns.noise,
            seed=seed,
            output=ns.output,
        )
    if ns.command == "verify":
        return RunRequest(command="verify", seed=seed, output=ns.output)
    if ns.command == "audit-theorem":
        if ns.samples <= 0 or ns.grid < 2:
            raise UsageError("--samples must be positive and --grid at least 2")
        return RunRequest(
            command="audit-theorem",
            seed=seed,
            output=ns.output,
            samples=ns.samples,
            grid=ns.grid,
        )
    if ns.command == "fidelity":
        m = _THEORY_SPEC.match(ns.theory)
        if m is None:
            raise UsageError(
                f'--theory: "{ns.theory}" does not match algorithm:f[,g] '
                '(e.g. entangled:B1,B1)'
            )
        if m.group("alg") not in _ALGORITHM_NAMES:
            raise UsageError(f'--theory: unknown algorithm "{m.group("alg")}"')
        algorithm = _ALGORITHM_NAMES[m.group("alg")]
        f = _parse_oracle_flag("--theory", m.group("f"))
        g = _parse_oracle_flag("--theory", m.group("g")) if m.group("g") else None
        _oracles_for(algorithm, f, g)
        return RunRequest(
            command="fidelity",
            algorithm=algorithm,
            oracle_f=f,
            oracle_g=g,
            counts_path=ns.counts,
            seed=seed,
            output=ns.output,
        )
    if ns.command == "sweep-noise":
        algorithm = _ALGORITHM_NAMES[ns.algorithm]
        f = _parse_oracle_flag("--f", ns.f)
        g = _parse_oracle_flag("--g", ns.g) if ns.g is not None else None
        _oracles_for(algorithm, f, g)
        if ns.noise == "off":
            raise UsageError("sweep-noise needs a noise model (table2 or a config path)")
        return RunRequest(
            command="sweep-noise",
            algorithm=algorithm,
            oracle_f=f,
            oracle_g=g,
            scales=_parse_scales(ns.scales),
            noise=ns.noise,
            seed=seed,
            output=ns.output,
        )
    raise UsageError(f"unknown command {ns.command!r}")


def _load_noise(source: str) -> NoiseModel:
    if source == "table2":
        return NoiseModel.table2()
    if not os.path.exists(source):
        raise UsageError(f'--noise: "{source}" is neither "table2" nor a config file')
    try:
        return NoiseModel.load(source)
    except ValueError as exc:
        raise UsageError(f"--noise config {source}: {exc}") from None


def _ideal_record(request: RunRequest):
    oracles = _oracles_for(request.algorithm, request.oracle_f, request.oracle_g)
    if request.algorithm == DEUTSCH:
        return algorithms.run_deutsch(oracles)
    if request.algorithm == ENTANGLED_PAIR:
        return algorithms.run_entangled_pair(oracles)
    return algorithms.run_product_pair(oracles)


def _decode_outcome(algorithm: str, bitstring: str) -> dict:
    if algorithm == DEUTSCH:
        return {"balanced": int(bitstring[0])}
    answer = algorithms.decode(bitstring)
    return {"balanced": answer.balanced, "different": answer.different}


def _argmax(dist: dict[str, float]) -> str:
    return max(dist.items(), key=lambda kv: (kv[1], kv[0]))[0]


def _payload_run(request: RunRequest) -> tuple[dict, int]:
    record = _ideal_record(request)
    oracles = _oracles_for(request.algorithm, request.oracle_f, request.oracle_g)
    if request.noise == "off":
        probabilities = record.final_distribution
    else:
        model = _load_noise(request.noise)
        probabilities = run_noisy(request.algorithm, oracles, model)
    decoded = _decode_outcome(request.algorithm, _argmax(probabilities))
    ops, _ = algorithms.circuit_ops(request.algorithm, oracles)
    payload: dict = {
        "queries": dict(sorted(record.query_counts.items())),
        "gate_count": len(ops),  # informational, never asserted on
        "probabilities": {k: probabilities[k] for k in sorted(probabilities)},
    }
    if request.shots is not None:
        result = sample_shots(probabilities, request.shots, request.seed)
        payload["counts"] = {k: result.counts[k] for k in sorted(result.counts)}
    payload["decoded"] = decoded
    payload["separability"] = [
        {"step": label, "product": product}
        for label, product in trace_run_separability(record)
    ]
    return payload, EXIT_OK


def _payload_verify(request: RunRequest) -> tuple[dict, int]:
    report = verify_build()
    payload = {
        "passed": report.passed,
        "summary": report.summary(),
        "checks": [
            {"name": c.name, "passed": c.passed, "detail": c.detail}
            for c in report.checks
        ],
    }
    return payload, EXIT_OK if report.passed else EXIT_CHECK_FAILED


def _payload_audit(request: RunRequest) -> tuple[dict, int]:
    disagreements = []
    for params in random_product_params(request.samples, request.seed):
        predicted, actual = cnot_product_condition(params)
        if predicted != actual:
            disagreements.append(
                {
                    "alpha": repr(params.alpha),
                    "beta": repr(params.beta),
                    "gamma": repr(params.gamma),
                    "delta": repr(params.delta),
                    "predicted": predicted,
                    "actual": actual,
                }
            )
    grid = bloch_grid_params(request.grid, request.grid + 1)
    families = []
    all_single = True
    for family in FAMILIES:
        report = audit_family_distinguishability(family, grid)
        families.append(
            {
                "family": family,
                "samples": len(report.samples),
                "decidable": list(report.decidable),
                "at_most_one_decidable": report.at_most_one_decidable,
            }
        )
        all_single = all_single and report.at_most_one_decidable
    passed = not disagreements and all_single
    payload = {
        "passed": passed,
        "cnot_product_condition": {
            "samples": request.samples,
            "disagreements": disagreements,
        },
        "families": families,
    }
    return payload, EXIT_OK if passed else EXIT_CHECK_FAILED


def _load_counts(path: str) -> dict[str, int]:
    try:
        raw = json.loads(open(path).read())
    except FileNotFoundError:
        raise UsageError(f"--counts: no such file {path!r}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"--counts: {path} is not valid JSON ({exc})") from None
    if not isinstance(raw, dict) or not raw:
        raise UsageError(f"--counts: {path} must map bitstrings to counts")
    counts = {}
    for key, value in raw.items():
        if not re.fullmatch(r"[01]+", key) or not isinstance(value, int) or value < 0:
            raise UsageError(
                f'--counts: bad entry "{key}": {value!r} '
                "(keys are bitstrings, values nonnegative integers)"
            )
        counts[key] = value
    return counts


def _payload_fidelity(request: RunRequest) -> tuple[dict, int]:
    counts = _load_counts(request.counts_path)
    record = _ideal_record(request)
    result = ShotResult(sum(counts.values()), counts)
    report = statistical_fidelity(
        result, record.final_distribution, seed=request.seed
    )
    payload = {
        "shots": result.shots,
        "fidelity": {"value": report.fidelity, "stderr": report.stderr},
        "p_exp": {k: report.p_exp[k] for k in sorted(report.p_exp)},
        "p_th": {k: report.p_th[k] for k in sorted(report.p_th)},
    }
    return payload, EXIT_OK


def _payload_sweep(request: RunRequest) -> tuple[dict, int]:
    base = _load_noise(request.noise)
    record = _ideal_record(request)
    oracles = _oracles_for(request.algorithm, request.oracle_f, request.oracle_g)
    ideal = record.final_distribution
    ideal_decoded = _decode_outcome(request.algorithm, _argmax(ideal))
    rows = []
    for scale in request.scales:
        try:
            model = base.scaled(scale)
        except ValueError as exc:
            raise UsageError(f"--scales: {exc}") from None
        noisy = run_noisy(request.algorithm, oracles, model)
        rows.append(
            {
                "scale": scale,
                "fidelity": bhattacharyya(noisy, ideal),
                "argmax_correct": _decode_outcome(request.algorithm, _argmax(noisy))
                == ideal_decoded,
            }
        )
    return {"sweep": rows}, EXIT_OK


_PAYLOAD_BUILDERS = {
    "run": _payload_run,
    "verify": _payload_verify,
    "audit-theorem": _payload_audit,
    "fidelity": _payload_fidelity,
    "sweep-noise": _payload_sweep,
}


def execute(request: RunRequest) -> tuple[ResultEnvelope, int]:
    payload, code = _PAYLOAD_BUILDERS[request.command](request)
    envelope = ResultEnvelope(
        request=request,
        payload=payload,
        version=__version__,
        timestamp=datetime.now(timezone.utc).isoformat(),
    )
    return envelope, code


def _format_probability(p: float) -> str:
    return format(p, ".17g")  # round-trip precision, always >= 12 significant digits


def emit(envelope: ResultEnvelope, fmt: str) -> str:
    """Render an envelope as JSON (stable key order) or CSV."""
    if fmt == "json":
        return json.dumps(envelope.as_dict(), indent=2) + "\n"
    if fmt != "csv":
        raise UsageError(f"unknown output format {fmt!r}")
    out = StringIO()
    if "sweep" in envelope.payload:
        out.write("scale,fidelity,argmax_correct\n")
        for row in envelope.payload["sweep"]:
            out.write(
                f"{row['scale']:g},{_format_probability(row['fidelity'])},"
                f"{str(row['argmax_correct']).lower()}\n"
            )
        return out.getvalue()
    probabilities = envelope.payload.get("probabilities")
    if probabilities is None:
        raise UsageError("csv output is only available for run and sweep-noise")
    counts = envelope.payload.get("counts", {})
    out.write("bitstring,probability,count\n")
    for bitstring in sorted(probabilities):
        count = counts.get(bitstring, "")
        out.write(
            f"{bitstring},{_format_probability(probabilities[bitstring])},{count}\n"
        )
    return out.getvalue()


def main(argv: list[str] | None = None) -> int:
    args = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        request = parse_request(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse --help
        return 0 if exc.code in (0, None) else int(exc.code)
    try:
        envelope, code = execute(request)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # CLI boundary: report, don't traceback
        print(f"error: internal: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(emit(envelope, request.output))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
