#!/usr/bin/env python3
"""Run the full desk-scale benchmark matrix and write results.csv.

Equivalent to:

    bench run --case all --reps 10 --seed 42 --out results.csv

Pass extra arguments to override, e.g.:

    python3 scripts/run_benchmarks.py --case dlist --sizes 6..12 --reps 5
"""

import sys

from destpass.bench_cli import main

if __name__ == "__main__":
    argv = sys.argv[1:]
    args = ["run"]
    if "--out" not in argv and "-" not in argv:
        args += ["--out", "results.csv"]
    sys.exit(main(args + argv))
