#!/usr/bin/env python3
"""Greedy-approximation MSE curves: compound Poisson at several jump rates
next to Brownian motion, all normalized to unit process variance.

Compound Poisson curves use exact analytic coefficients; the Brownian curve
uses the 2^L-point discrete Haar proxy. Output is one CSV ready for
log2(M) vs 10*log10(MSE) plotting.

    python3 scripts/greedy_mse_curves.py --out greedy_curves.csv
"""

import argparse
import sys

from cpwave.harness import ExperimentConfig, run_mse_curve, write_csv


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lambdas", default="10,50,100,500")
    parser.add_argument("--m", default=",".join(str(2**j) for j in range(1, 11)))
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--grid-log2", type=int, default=10)
    parser.add_argument("--seed", type=int, default=20250810)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", default="greedy_curves.csv")
    args = parser.parse_args()

    m_values = tuple(int(m) for m in args.m.split(","))
    records = []
    for lam in (float(x) for x in args.lambdas.split(",")):
        config = ExperimentConfig(
            process="cp",
            schemes=("greedy",),
            dictionary="haar_analytic",
            m_values=m_values,
            lam=lam,
            trials=args.trials,
            master_seed=args.seed,
        )
        records.extend(run_mse_curve(config, workers=args.workers))
        print(f"cp lambda={lam:g}: done", file=sys.stderr)

    config = ExperimentConfig(
        process="bm",
        schemes=("greedy",),
        dictionary="haar_discrete",
        m_values=m_values,
        grid_log2=args.grid_log2,
        trials=args.trials,
        master_seed=args.seed,
    )
    records.extend(run_mse_curve(config, workers=args.workers))
    print("bm: done", file=sys.stderr)

    write_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
