#!/usr/bin/env python3
"""Greedy versus certified best-M approximation error, for a compound
Poisson process (exact coefficients) and a Brownian motion (discrete
proxy), both at unit variance.

    python3 scripts/greedy_vs_best.py --out greedy_vs_best.csv
"""

import argparse
import sys

from cpwave.harness import ExperimentConfig, run_mse_curve, write_csv


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lambda", dest="lam", type=float, default=10.0)
    parser.add_argument("--m", default=",".join(str(2**j) for j in range(1, 11)))
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--grid-log2", type=int, default=10)
    parser.add_argument("--seed", type=int, default=20250810)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", default="greedy_vs_best.csv")
    args = parser.parse_args()

    m_values = tuple(int(m) for m in args.m.split(","))
    cp = ExperimentConfig(
        process="cp",
        schemes=("greedy", "best"),
        dictionary="haar_analytic",
        m_values=m_values,
        lam=args.lam,
        trials=args.trials,
        master_seed=args.seed,
    )
    bm = ExperimentConfig(
        process="bm",
        schemes=("greedy", "best"),
        dictionary="haar_discrete",
        m_values=m_values,
        grid_log2=args.grid_log2,
        trials=args.trials,
        master_seed=args.seed,
    )
    records = run_mse_curve(cp, workers=args.workers)
    print(f"cp lambda={args.lam:g}: done", file=sys.stderr)
    records += run_mse_curve(bm, workers=args.workers)
    print("bm: done", file=sys.stderr)
    write_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
