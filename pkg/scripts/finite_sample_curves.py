"""Experiments, SHD/n and F1 against block size with the Fisher-Z oracle.

    python3 scripts/finite_sample_curves.py --trials 20 --out results/curves
"""

import argparse
import json
import os

from cycdesign.bench import plot_svg, run_grid, summarize, write_csv

HERE = os.path.dirname(os.path.abspath(__file__))


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--grid", default=os.path.join(HERE, "grids", "desk_scale.json"))
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results/curves")
    args = ap.parse_args()

    with open(args.grid) as fh:
        spec = json.load(fh)
    os.makedirs(args.out, exist_ok=True)
    records = run_grid(spec, args.trials, args.seed, args.workers)
    write_csv(records, os.path.join(args.out, "trials.csv"))
    plot_svg(records, args.out, x=spec.get("plot_x", "b"))
    for row in summarize(records):
        print(f"b={row['b']:>2}  experiments {row['experiments']:.2f}±{row['experiments_ci']:.2f}  "
              f"shd/n {row['shd_per_n']:.3f}±{row['shd_per_n_ci']:.3f}  f1 {row['f1']:.3f}±{row['f1_ci']:.3f}")


if __name__ == "__main__":
    main()
