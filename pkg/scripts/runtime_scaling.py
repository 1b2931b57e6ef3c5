"""Wall-clock time per method and configuration for one scenario (S0 = 100)."""

import argparse

from batescva.bench import published_config, run_table, format_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--exercise", default="european", choices=["european", "american"])
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    configs = [published_config(lab, exercise=args.exercise) for lab in "ABCD"]
    best = None
    for _ in range(args.repeats):
        rows = run_table(configs)
        if best is None:
            best = rows
        else:
            for b, r in zip(best, rows):
                b.runtime = min(b.runtime, r.runtime)
    print(format_table(best))


if __name__ == "__main__":
    main()
