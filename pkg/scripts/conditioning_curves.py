#!/usr/bin/env python3
"""Condition numbers kappa_m per order and max_m kappa_m across band-limits.

Writes cond.csv and cond_max.csv (same columns as ``osht bench``) into
--outdir and prints a short table.  Elimination designs cost O(L^5); L=256
takes a few minutes on one core.
"""
import argparse
import time
from pathlib import Path

from osht.bench import cond_max_rows, conditioning_experiment, write_cond_csv, write_cond_max_csv
from osht.cli import parse_int_list, parse_methods
from osht.sampling import design


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bandlimits", type=parse_int_list, default=parse_int_list("16:x2:128"))
    ap.add_argument("--methods", type=parse_methods, default=("elimination", "ascending"))
    ap.add_argument("--outdir", default="results/conditioning")
    args = ap.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    schemes = {}
    for L in args.bandlimits:
        for method in args.methods:
            t0 = time.perf_counter()
            schemes[(L, method)] = design(L, method)
            print(f"designed L={L:4d} {method:11s} in {time.perf_counter() - t0:7.2f}s")
    rows = conditioning_experiment(args.bandlimits, args.methods, schemes)
    write_cond_csv(rows, outdir / "cond.csv")
    write_cond_max_csv(rows, outdir / "cond_max.csv")
    print(f"{'L':>5} {'method':11s} {'max kappa':>12}")
    for L, method, k in cond_max_rows(rows):
        print(f"{L:5d} {method:11s} {k:12.4g}")


if __name__ == "__main__":
    main()
