#!/usr/bin/env python3
"""Best-M approximation error of the Haar dictionary versus the orthonormal
cosine dictionary (DCT-II), for a compound Poisson process and a Brownian
motion sampled on the same grid with the same seeds.

    python3 scripts/haar_vs_dct.py --out haar_vs_dct.csv
"""

import argparse
import sys

from cpwave.harness import run_dict_compare, write_csv


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lambda", dest="lam", type=float, default=10.0)
    parser.add_argument("--m", default=",".join(str(2**j) for j in range(1, 11)))
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--grid-log2", type=int, default=10)
    parser.add_argument("--seed", type=int, default=20250810)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", default="haar_vs_dct.csv")
    args = parser.parse_args()

    records = run_dict_compare(
        lam=args.lam,
        m_values=tuple(int(m) for m in args.m.split(",")),
        grid_log2=args.grid_log2,
        trials=args.trials,
        seed=args.seed,
        workers=args.workers,
    )
    write_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
