"""Reproduce the European and American put CVA tables (configs A-D, S0 = 80/100/120).

    python3 scripts/run_tables.py --out tables.csv
"""

import argparse

from batescva.bench import format_table, published_config, run_table, write_rows_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--labels", default="A,B,C,D")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", help="CSV path for all rows")
    args = ap.parse_args()

    rows = []
    for exercise in ("european", "american"):
        configs = [published_config(lab, s0=s0, exercise=exercise, seed=args.seed)
                   for s0 in (80.0, 100.0, 120.0) for lab in args.labels.split(",")]
        block = run_table(configs, workers=args.workers)
        print(f"\n{exercise} put")
        print(format_table(block))
        rows += block
    if args.out:
        write_rows_csv(rows, args.out)


if __name__ == "__main__":
    main()
