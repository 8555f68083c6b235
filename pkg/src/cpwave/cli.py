"""Command-line front end.

Subcommands:

* simulate       - draw one compound Poisson path and dump its jumps
* mse-curve      - Monte Carlo MSE curve for chosen schemes and dictionary
* lemma-check    - empirical vs exact minimum-spacing law
* theorem1-check - greedy MSE against its closed-form envelope
* dict-compare   - best-M curves, Haar vs cosine dictionary, cp vs bm
* theory-table   - closed-form quantities per M, no simulation

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from . import harness, theory
from .processes import derive_stream, sample_path
from .schemes import InvariantViolation

_EXIT_OK = 0
_EXIT_CONFIG = 2
_EXIT_IO = 3
_EXIT_INVARIANT = 4


def _parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _parse_schemes(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


_DICTIONARY_ALIASES = {
    "haar": "haar_analytic",
    "haar_analytic": "haar_analytic",
    "haar-discrete": "haar_discrete",
    "haar_discrete": "haar_discrete",
    "dct": "dct",
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="64-bit master seed")
    parser.add_argument("--out", default="-", help="output path ('-' writes to stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpwave",
        description=(
            "Simulate compound Poisson and Brownian paths on [0,1], expand them "
            "over the Haar basis, and measure linear/greedy/best M-term "
            "approximation errors against closed-form predictions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="dump one path's jump locations and heights")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--sigma0-sq", type=float, default=1.0)
    p.add_argument("--jump-variance", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("mse-curve", help="Monte Carlo MSE curve")
    p.add_argument("--process", choices=("cp", "bm"), required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--sigma0-sq", type=float, default=1.0)
    p.add_argument("--jump-variance", type=float, default=None)
    p.add_argument("--schemes", type=_parse_schemes, default=("linear", "greedy", "best"))
    p.add_argument("--dictionary", choices=sorted(_DICTIONARY_ALIASES), default="haar")
    p.add_argument("--m", type=_parse_ints, default=(4, 8, 16, 32, 64, 128, 256))
    p.add_argument("--grid-log2", type=int, default=10)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("lemma-check", help="minimum-spacing law, empirical vs exact")
    p.add_argument("--lambda", dest="lam", type=float, default=10.0)
    p.add_argument("--n", type=_parse_ints, default=(1, 2, 5))
    p.add_argument("--delta", type=_parse_floats, default=None)
    p.add_argument("--samples", type=int, default=100_000)
    _add_common(p)

    p = sub.add_parser("theorem1-check", help="greedy MSE vs closed-form envelope")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--sigma0-sq", type=float, default=1.0)
    p.add_argument("--m", type=_parse_ints, default=(4, 8, 16, 32, 64, 128, 256))
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("dict-compare", help="Haar vs cosine dictionary, best-M")
    p.add_argument("--lambda", dest="lam", type=float, default=10.0)
    p.add_argument("--sigma0-sq", type=float, default=1.0)
    p.add_argument("--m", type=_parse_ints, default=(16, 32, 64, 128, 256))
    p.add_argument("--grid-log2", type=int, default=10)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("theory-table", help="closed-form quantities per M")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--sigma0-sq", type=float, default=1.0)
    p.add_argument("--m", type=_parse_ints, default=(4, 8, 16, 32, 64, 128, 256))
    p.add_argument("--tol", type=float, default=1e-12)
    _add_common(p)

    return parser


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write to {out!r}: {exc}") from exc


def _emit_records(records, config, args) -> None:
    if args.format == "csv":
        if args.out == "-":
            cols = harness._columns_for(records)
            lines = [",".join(h for h, _ in cols)]
            lines += [
                ",".join(harness._format_cell(getattr(r, a)) for _, a in cols) for r in records
            ]
            _emit("\n".join(lines) + "\n", "-")
        else:
            harness.write_csv(records, args.out)
    else:
        if args.out == "-":
            doc = {
                "config": asdict(config) if config is not None else None,
                "kind": type(records[0]).__name__ if records else "CurveRecord",
                "records": [asdict(r) for r in records],
            }
            _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", "-")
        else:
            harness.write_json(config, records, args.out)


def _cmd_simulate(args) -> int:
    stream = derive_stream(args.seed, 0)
    variance = args.jump_variance if args.jump_variance is not None else args.sigma0_sq / args.lam
    path = sample_path(args.lam, harness.JumpLaw(variance=variance), stream)
    if args.format == "json":
        doc = {
            "lambda": args.lam,
            "jump_variance": variance,
            "seed": args.seed,
            "num_jumps": path.num_jumps,
            "jump_times": list(map(float, path.jump_times)),
            "jump_heights": list(map(float, path.jump_heights)),
        }
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    else:
        lines = ["jump_time,jump_height"]
        lines += [
            f"{t:.17g},{h:.17g}" for t, h in zip(path.jump_times, path.jump_heights)
        ]
        _emit("\n".join(lines) + "\n", args.out)
    return _EXIT_OK


def _cmd_mse_curve(args) -> int:
    config = harness.ExperimentConfig(
        process=args.process,
        schemes=args.schemes,
        dictionary=_DICTIONARY_ALIASES[args.dictionary],
        m_values=args.m,
        lam=args.lam,
        sigma0_sq=args.sigma0_sq,
        jump_variance=args.jump_variance,
        grid_log2=args.grid_log2,
        trials=args.trials,
        master_seed=args.seed,
        output_path=None if args.out == "-" else args.out,
    )
    records = harness.run_mse_curve(config, workers=args.workers)
    _emit_records(records, config, args)
    return _EXIT_OK


def _cmd_lemma_check(args) -> int:
    result = harness.run_spacing_check(
        lam=args.lam,
        n_values=args.n,
        delta_grid=list(args.delta) if args.delta is not None else None,
        samples=args.samples,
        seed=args.seed,
    )
    for n in args.n:
        devs = [row.abs_dev for row in result.rows if row.n == n]
        if devs:
            print(f"n={n}: sup |empirical - exact| = {max(devs):.6f}", file=sys.stderr)
    print(
        f"spacing bound violations: {result.bound_violations} / {result.paths_checked} paths",
        file=sys.stderr,
    )
    _emit_records(result.rows, None, args)
    if result.bound_violations:
        raise InvariantViolation(
            f"{result.bound_violations} paths violated the spacing <= 1/N bound"
        )
    return _EXIT_OK


def _cmd_theorem1_check(args) -> int:
    rows = harness.run_envelope_check(
        lam=args.lam,
        m_values=args.m,
        trials=args.trials,
        seed=args.seed,
        sigma0_sq=args.sigma0_sq,
        workers=args.workers,
    )
    outside = [row.m for row in rows if not row.mean_inside]
    if outside:
        print(f"means outside envelope at M in {outside}", file=sys.stderr)
    _emit_records(rows, None, args)
    return _EXIT_OK


def _cmd_dict_compare(args) -> int:
    records = harness.run_dict_compare(
        lam=args.lam,
        m_values=args.m,
        grid_log2=args.grid_log2,
        trials=args.trials,
        seed=args.seed,
        sigma0_sq=args.sigma0_sq,
        workers=args.workers,
    )
    _emit_records(records, None, args)
    return _EXIT_OK


def _cmd_theory_table(args) -> int:
    rows = [
        theory.greedy_mse_envelope(int(m), args.lam, args.sigma0_sq, tol=args.tol)
        for m in args.m
    ]
    _emit_records(rows, None, args)
    return _EXIT_OK


_COMMANDS = {
    "simulate": _cmd_simulate,
    "mse-curve": _cmd_mse_curve,
    "lemma-check": _cmd_lemma_check,
    "theorem1-check": _cmd_theorem1_check,
    "dict-compare": _cmd_dict_compare,
    "theory-table": _cmd_theory_table,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return _EXIT_INVARIANT
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return _EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
