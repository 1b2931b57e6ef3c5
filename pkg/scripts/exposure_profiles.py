"""Write HTMC expected-exposure curves (t, ee, se) for the base case at one configuration."""

import argparse
from pathlib import Path

import numpy as np

from batescva.bench import emit_exposure, published_config


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--label", default="D")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--outdir", default="exposures")
    args = ap.parse_args()

    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for exercise in ("european", "american"):
        for s0 in (80.0, 100.0, 120.0):
            cfg = published_config(args.label, s0=s0, exercise=exercise, seed=args.seed)
            path = out / f"ee_{exercise}_{s0:g}_{args.label}.csv"
            prof = emit_exposure(cfg, path)
            peak = int(np.argmax(prof.ee))
            print(f"{path}: EE(0)={prof.ee[0]:.4f} peak EE={prof.ee[peak]:.4f} at t={prof.times[peak]:.3f}")


if __name__ == "__main__":
    main()
