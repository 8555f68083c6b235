"""Seeded Monte Carlo experiment orchestration and flat-file output.

Every trial owns a private random stream derived from (master_seed, trial
index), and per-trial results are reduced in trial order, so curves are
byte-for-byte reproducible regardless of how many worker processes run the
trials. Scheme-ordering and monotonicity invariants are hard-asserted on
every trial of every run.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import dct as dct_mod
from . import schemes, theory
from .processes import JumpLaw, brownian_grid, derive_stream, sample_grid, sample_path
from .haar import discrete_haar_forward
from .schemes import InvariantViolation

__all__ = [
    "ExperimentConfig",
    "CurveRecord",
    "EnvelopeRow",
    "SpacingRow",
    "SpacingCheckResult",
    "InvariantViolation",
    "run_mse_curve",
    "run_spacing_check",
    "run_envelope_check",
    "run_dict_compare",
    "write_csv",
    "write_json",
    "read_json",
]

PROCESSES = ("cp", "bm")
SCHEMES = ("linear", "greedy", "best")
DICTIONARIES = ("haar_analytic", "haar_discrete", "dct")

_CI_Z = 1.96  # normal-approximation 95% interval


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one Monte Carlo curve run."""

    process: str
    schemes: tuple[str, ...]
    dictionary: str
    m_values: tuple[int, ...]
    lam: float | None = None
    sigma0_sq: float = 1.0
    jump_variance: float | None = None  # None: sigma0_sq / lam (unit process variance)
    grid_log2: int = 10
    trials: int = 1000
    master_seed: int = 0
    output_path: str | None = None

    def validate(self) -> None:
        if self.process not in PROCESSES:
            raise ValueError(f"process must be one of {PROCESSES}, got {self.process!r}")
        if not self.schemes or any(s not in SCHEMES for s in self.schemes):
            raise ValueError(f"schemes must be a nonempty subset of {SCHEMES}, got {self.schemes}")
        if self.dictionary not in DICTIONARIES:
            raise ValueError(
                f"dictionary must be one of {DICTIONARIES}, got {self.dictionary!r}"
            )
        if self.process == "cp":
            if self.lam is None or not (math.isfinite(self.lam) and self.lam > 0):
                raise ValueError("process 'cp' requires a positive, finite lambda")
        if self.process == "bm" and self.dictionary == "haar_analytic":
            raise ValueError(
                "process 'bm' has no exact jump representation; use dictionary "
                "'haar_discrete' or 'dct'"
            )
        if not self.m_values or any(
            not isinstance(m, (int, np.integer)) or m < 1 for m in self.m_values
        ):
            raise ValueError(f"m_values must be integers >= 1, got {self.m_values}")
        if any(b <= a for a, b in zip(self.m_values, self.m_values[1:])):
            raise ValueError(f"m_values must be strictly increasing, got {self.m_values}")
        if not (1 <= self.grid_log2 <= 24):
            raise ValueError(f"grid_log2 must lie in [1, 24], got {self.grid_log2}")
        if self.dictionary != "haar_analytic" and max(self.m_values) > 2**self.grid_log2:
            raise ValueError(
                f"largest M {max(self.m_values)} exceeds the {2 ** self.grid_log2} "
                f"coefficients of a grid_log2={self.grid_log2} grid"
            )
        if not isinstance(self.trials, (int, np.integer)) or self.trials < 1:
            raise ValueError(f"trials must be an integer >= 1, got {self.trials}")
        if not (math.isfinite(self.sigma0_sq) and self.sigma0_sq > 0):
            raise ValueError(f"sigma0_sq must be positive, got {self.sigma0_sq}")
        if self.jump_variance is not None and not (
            math.isfinite(self.jump_variance) and self.jump_variance > 0
        ):
            raise ValueError(f"jump_variance must be positive, got {self.jump_variance}")
        if not (0 <= int(self.master_seed) < 2**64):
            raise ValueError("master_seed must fit in an unsigned 64-bit integer")

    def jump_law(self) -> JumpLaw:
        variance = self.jump_variance
        if variance is None:
            variance = self.sigma0_sq / self.lam
        return JumpLaw(variance=variance)


@dataclass(frozen=True)
class CurveRecord:
    """One Monte Carlo estimate of a mean squared error at one M."""

    process: str
    scheme: str
    dictionary: str
    lam: float | None
    sigma0_sq: float
    m: int
    log2_m: float
    mse_mean: float
    mse_db: float
    ci_lo: float
    ci_hi: float
    trials: int
    seed: int


@dataclass(frozen=True)
class EnvelopeRow:
    """Greedy MSE estimate at one M next to its two-sided theory envelope."""

    lam: float
    m: int
    mse_mean: float
    ci_lo: float
    ci_hi: float
    envelope_lo: float
    envelope_hi: float
    two_pow_mean: float
    mean_inside: bool
    ci_overlap: bool


@dataclass(frozen=True)
class SpacingRow:
    """Empirical vs exact conditional survival of the minimum jump spacing."""

    n: int
    delta: float
    empirical: float
    exact: float
    abs_dev: float


@dataclass(frozen=True)
class SpacingCheckResult:
    rows: list[SpacingRow]
    paths_checked: int
    bound_violations: int


# ---------------------------------------------------------------------------
# per-trial work


_ANALYTIC_PROFILES = {
    "linear": schemes.linear_errors,
    "greedy": schemes.greedy_errors,
    "best": schemes.best_errors,
}
_DISCRETE_PROFILES = {
    "linear": schemes.linear_errors_discrete,
    "greedy": schemes.greedy_errors_discrete,
    "best": schemes.best_errors_discrete,
}


def _trial_errors(config: ExperimentConfig, trial: int) -> tuple[tuple[float, ...], ...]:
    """Squared errors for one trial: one tuple per scheme, one entry per M."""
    stream = derive_stream(config.master_seed, trial)
    ms = config.m_values
    if config.dictionary == "haar_analytic":
        path = sample_path(config.lam, config.jump_law(), stream)
        rows = tuple(
            tuple(_ANALYTIC_PROFILES[scheme](path, ms)) for scheme in config.schemes
        )
    else:
        if config.process == "cp":
            path = sample_path(config.lam, config.jump_law(), stream)
            samples = sample_grid(path, config.grid_log2)
        else:
            samples = brownian_grid(config.sigma0_sq, config.grid_log2, stream)
        if config.dictionary == "haar_discrete":
            coeffs = discrete_haar_forward(samples)
        else:
            coeffs = dct_mod.dct2_forward(samples).values
        norm = float(2**config.grid_log2)
        rows = tuple(
            tuple(e / norm for e in _DISCRETE_PROFILES[scheme](coeffs, ms))
            for scheme in config.schemes
        )
    _assert_trial_invariants(config, trial, rows)
    return rows


def _assert_trial_invariants(
    config: ExperimentConfig, trial: int, rows: tuple[tuple[float, ...], ...]
) -> None:
    by_scheme = dict(zip(config.schemes, rows))
    for scheme, errs in by_scheme.items():
        for a, b in zip(errs, errs[1:]):
            if b > a:
                raise InvariantViolation(
                    f"trial {trial}: {scheme} error increased with M ({a} -> {b})"
                )
    for lo_scheme, hi_scheme in (("best", "greedy"), ("greedy", "linear"), ("best", "linear")):
        if lo_scheme in by_scheme and hi_scheme in by_scheme:
            for m, lo, hi in zip(config.m_values, by_scheme[lo_scheme], by_scheme[hi_scheme]):
                if lo > hi:
                    raise InvariantViolation(
                        f"trial {trial}, M={m}: {lo_scheme} error {lo} exceeds "
                        f"{hi_scheme} error {hi}"
                    )


def _run_trials(config: ExperimentConfig, workers: int) -> list[tuple[tuple[float, ...], ...]]:
    trials = range(config.trials)
    if workers <= 1:
        return [_trial_errors(config, t) for t in trials]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunk = max(1, config.trials // (workers * 8))
        return list(pool.map(_trial_errors, [config] * config.trials, trials, chunksize=chunk))


def _mean_ci(values: list[float]) -> tuple[float, float, float]:
    n = len(values)
    mean = math.fsum(values) / n
    if n == 1:
        return mean, mean, mean
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    half = _CI_Z * math.sqrt(var / n)
    return mean, mean - half, mean + half


def _db(mean: float) -> float:
    return 10.0 * math.log10(mean) if mean > 0.0 else float("-inf")


def run_mse_curve(config: ExperimentConfig, workers: int = 1) -> list[CurveRecord]:
    """Monte Carlo MSE curve for every (scheme, M) in the config.

    Deterministic for a fixed master seed: each trial draws from its own
    derived stream and the reduction is done in trial order.
    """
    config.validate()
    per_trial = _run_trials(config, workers)
    records = []
    for si, scheme in enumerate(config.schemes):
        for mi, m in enumerate(config.m_values):
            mean, ci_lo, ci_hi = _mean_ci([per_trial[t][si][mi] for t in range(config.trials)])
            records.append(
                CurveRecord(
                    process=config.process,
                    scheme=scheme,
                    dictionary=config.dictionary,
                    lam=config.lam,
                    sigma0_sq=config.sigma0_sq,
                    m=int(m),
                    log2_m=math.log2(m),
                    mse_mean=mean,
                    mse_db=_db(mean),
                    ci_lo=ci_lo,
                    ci_hi=ci_hi,
                    trials=config.trials,
                    seed=int(config.master_seed),
                )
            )
    return records


def run_spacing_check(
    lam: float,
    n_values=(1, 2, 5),
    delta_grid=None,
    samples: int = 100_000,
    seed: int = 0,
) -> SpacingCheckResult:
    """Empirical check of the minimum-spacing law.

    Conditionally on a jump count n, spacings are generated directly from
    sorted uniforms and the empirical survival is compared with the exact
    formula on a delta grid (default {0.05, 0.1, 1/(2n)} per n). On top of
    that, `samples` unconditioned paths at rate lam are checked against the
    hard bound spacing <= 1/N.
    """
    if samples < 1000:
        raise ValueError(f"samples must be at least 1000, got {samples}")
    rows: list[SpacingRow] = []
    for n in n_values:
        rng = derive_stream(seed, int(n))
        u = np.sort(rng.random((samples, int(n))), axis=1)
        gaps = np.diff(u, axis=1, prepend=0.0)
        delta = gaps.min(axis=1)
        grid = delta_grid if delta_grid is not None else [0.05, 0.1, 1.0 / (2 * n)]
        for d in grid:
            if not (0.0 <= d <= 1.0 / n):
                continue
            empirical = float(np.mean(delta >= d))
            exact = theory.spacing_survival(int(n), float(d))
            rows.append(
                SpacingRow(
                    n=int(n),
                    delta=float(d),
                    empirical=empirical,
                    exact=exact,
                    abs_dev=abs(empirical - exact),
                )
            )
    # unconditioned paths: the bound spacing <= 1/N must hold on every one
    rng = derive_stream(seed, 2**32)
    counts = rng.poisson(lam, samples)
    violations = 0
    for n in np.unique(counts):
        if n == 0:
            continue  # spacing is 1 by convention; no bound applies
        block = int((counts == n).sum())
        u = np.sort(rng.random((block, int(n))), axis=1)
        gaps = np.diff(u, axis=1, prepend=0.0)
        delta = gaps.min(axis=1)
        violations += int((delta > 1.0 / n).sum())
    return SpacingCheckResult(rows=rows, paths_checked=int(samples), bound_violations=violations)


def run_envelope_check(
    lam: float,
    m_values,
    trials: int = 1000,
    seed: int = 0,
    sigma0_sq: float = 1.0,
    workers: int = 1,
) -> list[EnvelopeRow]:
    """Greedy MSE curve against its two-sided closed-form envelope.

    The containment verdict asks the Monte Carlo mean to land inside
    [envelope_lo, envelope_hi]; because MSE distributions are skewed, a
    second, weaker verdict only asks the 95% interval to intersect it.
    """
    config = ExperimentConfig(
        process="cp",
        schemes=("greedy",),
        dictionary="haar_analytic",
        m_values=tuple(int(m) for m in m_values),
        lam=float(lam),
        sigma0_sq=float(sigma0_sq),
        trials=int(trials),
        master_seed=int(seed),
    )
    records = run_mse_curve(config, workers=workers)
    rows = []
    for rec in records:
        point = theory.greedy_mse_envelope(rec.m, lam, sigma0_sq)
        rows.append(
            EnvelopeRow(
                lam=float(lam),
                m=rec.m,
                mse_mean=rec.mse_mean,
                ci_lo=rec.ci_lo,
                ci_hi=rec.ci_hi,
                envelope_lo=point.envelope_lo,
                envelope_hi=point.envelope_hi,
                two_pow_mean=point.two_pow_mean,
                mean_inside=point.envelope_lo <= rec.mse_mean <= point.envelope_hi,
                ci_overlap=not (rec.ci_hi < point.envelope_lo or rec.ci_lo > point.envelope_hi),
            )
        )
    return rows


def run_dict_compare(
    lam: float,
    m_values,
    grid_log2: int = 10,
    trials: int = 1000,
    seed: int = 0,
    sigma0_sq: float = 1.0,
    workers: int = 1,
) -> list[CurveRecord]:
    """Best-M error curves for {cp, bm} x {haar_discrete, dct} on one grid
    and one seed set."""
    records = []
    for process in ("cp", "bm"):
        for dictionary in ("haar_discrete", "dct"):
            config = ExperimentConfig(
                process=process,
                schemes=("best",),
                dictionary=dictionary,
                m_values=tuple(int(m) for m in m_values),
                lam=float(lam) if process == "cp" else None,
                sigma0_sq=float(sigma0_sq),
                grid_log2=int(grid_log2),
                trials=int(trials),
                master_seed=int(seed),
            )
            records.extend(run_mse_curve(config, workers=workers))
    return records


# ---------------------------------------------------------------------------
# flat-file output


_CURVE_COLUMNS = [
    ("process", "process"),
    ("scheme", "scheme"),
    ("dictionary", "dictionary"),
    ("lambda", "lam"),
    ("sigma0_sq", "sigma0_sq"),
    ("M", "m"),
    ("log2_M", "log2_m"),
    ("mse_mean", "mse_mean"),
    ("mse_db", "mse_db"),
    ("ci_lo", "ci_lo"),
    ("ci_hi", "ci_hi"),
    ("trials", "trials"),
    ("seed", "seed"),
]

_ENVELOPE_COLUMNS = [
    ("lambda", "lam"),
    ("M", "m"),
    ("mse_mean", "mse_mean"),
    ("ci_lo", "ci_lo"),
    ("ci_hi", "ci_hi"),
    ("envelope_lo", "envelope_lo"),
    ("envelope_hi", "envelope_hi"),
    ("two_pow_mean", "two_pow_mean"),
    ("mean_inside", "mean_inside"),
    ("ci_overlap", "ci_overlap"),
]

_SPACING_COLUMNS = [
    ("n", "n"),
    ("delta", "delta"),
    ("empirical", "empirical"),
    ("exact", "exact"),
    ("abs_dev", "abs_dev"),
]

_THEORY_COLUMNS = [
    ("M", "m"),
    ("linear_mse", "linear_mse"),
    ("two_pow_mean", "two_pow_mean"),
    ("two_pow_tail", "two_pow_tail"),
    ("envelope_lo", "envelope_lo"),
    ("envelope_hi", "envelope_hi"),
    ("c_lower", "c_lower"),
    ("c_upper", "c_upper"),
]

_COLUMNS_BY_TYPE = {
    CurveRecord: _CURVE_COLUMNS,
    EnvelopeRow: _ENVELOPE_COLUMNS,
    SpacingRow: _SPACING_COLUMNS,
    theory.TheoryPoint: _THEORY_COLUMNS,
}


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def _columns_for(records) -> list[tuple[str, str]]:
    if not records:
        return _CURVE_COLUMNS
    try:
        return _COLUMNS_BY_TYPE[type(records[0])]
    except KeyError:
        raise ValueError(f"no CSV schema for records of type {type(records[0]).__name__}")


def write_csv(records, path: str, columns=None) -> None:
    """Write records as CSV: a header row plus one line per record, floats
    rendered with 17 significant digits (a zero mean shows up as mse_db
    '-inf')."""
    cols = columns if columns is not None else _columns_for(records)
    lines = [",".join(header for header, _ in cols)]
    for rec in records:
        lines.append(",".join(_format_cell(getattr(rec, attr)) for _, attr in cols))
    text = "\n".join(lines) + "\n"
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path!r}: {exc}") from exc


def write_json(config, records, path: str) -> None:
    """Write config plus records as one JSON document (full provenance)."""
    doc = {
        "config": asdict(config) if config is not None else None,
        "kind": type(records[0]).__name__ if records else "CurveRecord",
        "records": [asdict(rec) for rec in records],
    }
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write JSON to {path!r}: {exc}") from exc


_KINDS = {
    "CurveRecord": CurveRecord,
    "EnvelopeRow": EnvelopeRow,
    "SpacingRow": SpacingRow,
    "TheoryPoint": theory.TheoryPoint,
}


def read_json(path: str):
    """Inverse of write_json: returns (config_or_None, records)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read JSON from {path!r}: {exc}") from exc
    config = None
    if doc.get("config") is not None:
        raw = dict(doc["config"])
        raw["schemes"] = tuple(raw["schemes"])
        raw["m_values"] = tuple(raw["m_values"])
        config = ExperimentConfig(**raw)
    cls = _KINDS[doc.get("kind", "CurveRecord")]
    field_names = {f.name for f in fields(cls)}
    records = [cls(**{k: v for k, v in rec.items() if k in field_names}) for rec in doc["records"]]
    return config, records
