#!/usr/bin/env python3
"""Single-pass vs multi-pass coefficient error over random band-limited signals.

Writes accuracy.csv and multipass.csv into --outdir and prints mean E_max
(single pass) and mean final E_max^K per band-limit.
"""
import argparse
from pathlib import Path

from osht.bench import TrialConfig, accuracy_experiment, mean_errors, write_accuracy_csv, write_multipass_csv
from osht.cli import parse_int_list


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bandlimits", type=parse_int_list, default=parse_int_list("8:x2:128"))
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-passes", type=int, default=20)
    ap.add_argument("--outdir", default="results/accuracy")
    args = ap.parse_args()

    cfg = TrialConfig(args.bandlimits, trials=args.trials, seed=args.seed, multipass=True, max_passes=args.max_passes)
    records = accuracy_experiment(cfg)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    write_accuracy_csv(records, outdir / "accuracy.csv")
    write_multipass_csv(records, outdir / "multipass.csv")

    print(f"{'L':>5} {'mean E_max':>12} {'mean E_max^K':>13} {'max K':>6}")
    means = mean_errors(records)
    for L in args.bandlimits:
        e, ek = means[(L, "elimination")]
        kmax = max(r.passes for r in records if r.L == L)
        print(f"{L:5d} {e:12.3e} {ek:13.3e} {kmax:6d}")


if __name__ == "__main__":
    main()
