"""Command line front end for the benchmark harness.

    bench run --case dlist --engines naive,dps --sizes 6..10 --reps 5 \
        --seed 7 --out results.csv

Exit code 0 on success, 2 when an engine's output fails oracle validation.
The environment variable DPS_REGION_BLOCK overrides the region block size.
"""

from __future__ import annotations

import argparse
import sys

from .bench import (
    K_BOUNDS,
    VALID_ENGINES,
    BenchCase,
    emit_report,
    run_case,
)
from .errors import OracleMismatch

DEFAULT_SIZES = {"dlist": "6..10", "bfs": "6..10", "sexpr": "10..14"}


def parse_sizes(spec: str) -> list[int]:
    """Accept "k", "k1..k2", or a comma list of either."""
    out: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="bench")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run benchmark cases and emit CSV")
    p.add_argument(
        "--case",
        choices=["dlist", "bfs", "sexpr", "all"],
        default="all",
    )
    p.add_argument(
        "--engines",
        default="all",
        help="comma-separated engine list (default: every engine valid "
        "for the case)",
    )
    p.add_argument(
        "--sizes",
        default=None,
        help='size exponents, e.g. "8", "6..10", or "6,8,10" '
        "(default depends on the case)",
    )
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--warmup", type=int, default=3)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", default="-", help="CSV path, or - for stdout")
    args = parser.parse_args(argv)

    run_all = args.case == "all"
    cases = ["dlist", "bfs", "sexpr"] if run_all else [args.case]

    # Validate the whole plan before any benchmark runs.
    plan = []
    for case in cases:
        if args.engines == "all":
            engines = list(VALID_ENGINES[case])
        else:
            engines = [e.strip() for e in args.engines.split(",")]
            bad = [e for e in engines if e not in VALID_ENGINES[case]]
            if bad:
                if run_all:
                    engines = [e for e in engines if e in VALID_ENGINES[case]]
                    if not engines:
                        continue
                else:
                    print(
                        f"error: engine(s) {', '.join(bad)} not valid for "
                        f"case {case} (valid: {', '.join(VALID_ENGINES[case])})",
                        file=sys.stderr,
                    )
                    return 1
        sizes = parse_sizes(args.sizes or DEFAULT_SIZES[case])
        lo, hi = K_BOUNDS[case]
        bad_k = [k for k in sizes if not lo <= k <= hi]
        if bad_k:
            if run_all:
                # cases have different valid ranges: keep what fits
                sizes = [k for k in sizes if lo <= k <= hi]
                print(
                    f"note: case {case} skips size(s) {bad_k} "
                    f"(valid {lo}..{hi})",
                    file=sys.stderr,
                )
                if not sizes:
                    continue
            else:
                print(
                    f"error: size exponent(s) {bad_k} outside {lo}..{hi} "
                    f"for case {case}",
                    file=sys.stderr,
                )
                return 1
        plan.extend(
            BenchCase(
                case=case,
                engine=engine,
                k=k,
                reps=args.reps,
                warmup=args.warmup,
                seed=args.seed,
            )
            for engine in engines
            for k in sizes
        )

    rows = []
    for case_spec in plan:
        try:
            row = run_case(case_spec)
        except OracleMismatch as exc:
            print(f"oracle mismatch: {exc}", file=sys.stderr)
            return 2
        print(
            f"{case_spec.case}/{case_spec.engine} k={case_spec.k}: "
            f"{row.wall_time_ns / 1e6:.3f} ms",
            file=sys.stderr,
        )
        rows.append(row)

    report = emit_report(rows)
    if args.out == "-":
        sys.stdout.write(report)
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(report)
    return 0


if __name__ == "__main__":
    sys.exit(main())
