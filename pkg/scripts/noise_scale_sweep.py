#!/usr/bin/env python3
"""Fidelity of the noisy runs against the ideal ones as all error rates are
scaled together. Emits CSV (stdout or --out) ready for plotting."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from pairdeutsch import (  # noqa: E402
    B1,
    B2,
    C1,
    C2,
    ENTANGLED_PAIR,
    PRODUCT_PAIR,
    NoiseModel,
    PromisePair,
    bhattacharyya,
    run_entangled_pair,
    run_noisy,
    run_product_pair,
)

CASES = [
    ("case-1", PromisePair(B1, B1)),
    ("case-2", PromisePair(B1, B2)),
    ("case-3", PromisePair(C1, C1)),
    ("case-4", PromisePair(C1, C2)),
]
RUNNERS = {ENTANGLED_PAIR: run_entangled_pair, PRODUCT_PAIR: run_product_pair}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--scales", default="0,0.25,0.5,0.75,1,1.5,2", help="comma-separated factors"
    )
    parser.add_argument("--noise", default="table2", help="table2 | config path")
    parser.add_argument("--out", type=Path, help="CSV path (default stdout)")
    args = parser.parse_args()

    base = (
        NoiseModel.table2() if args.noise == "table2" else NoiseModel.load(args.noise)
    )
    scales = [float(s) for s in args.scales.split(",")]
    lines = ["algorithm,case,scale,fidelity"]
    for algorithm, runner in RUNNERS.items():
        for name, pair in CASES:
            ideal = runner(pair).final_distribution
            for scale in scales:
                noisy = run_noisy(algorithm, pair, base.scaled(scale))
                fid = bhattacharyya(noisy, ideal)
                lines.append(f"{algorithm},{name},{scale:g},{fid:.12g}")
    text = "\n".join(lines) + "\n"
    if args.out:
        args.out.write_text(text)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
