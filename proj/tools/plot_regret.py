#!/usr/bin/env python3
"""Plot mean cumulative-regret curves with error bands from regret CSVs.

Usage: plot_regret.py regret_go-ucb_f1.csv [more.csv ...] [-o out.png]

Each input is a CSV produced by `goucb run` (columns: round, mean_R,
halfwidth, per-seed R). One curve per file, shaded by the Wald half-width.
"""

import argparse
import csv
import os


def read_curve(path):
    rounds, mean, half = [], [], []
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            rounds.append(int(row["round"]))
            mean.append(float(row["mean_R"]))
            half.append(float(row["halfwidth"]))
    return rounds, mean, half


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csvs", nargs="+", help="regret CSV files")
    ap.add_argument("-o", "--out", default="regret.png", help="output image")
    args = ap.parse_args()

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for path in args.csvs:
        rounds, mean, half = read_curve(path)
        label = os.path.basename(path).removeprefix("regret_").removesuffix(".csv")
        (line,) = ax.plot(rounds, mean, label=label)
        lo = [m - h for m, h in zip(mean, half)]
        hi = [m + h for m, h in zip(mean, half)]
        ax.fill_between(rounds, lo, hi, alpha=0.2, color=line.get_color())

    ax.set_xlabel("round")
    ax.set_ylabel("cumulative regret")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
