"""Coefficient-selection schemes and exact squared approximation errors.

Three ways of keeping M coefficients of the Haar expansion:

* linear  - the first M atoms in index order, zeros included;
* greedy  - the first M atoms, in index order, whose support contains a
  jump (a structural test, never a floating-point threshold);
* best    - the M largest-magnitude coefficients over the full infinite
  expansion, certified exact by an envelope stopping rule.

Squared errors come from Parseval: path energy minus kept energy for exact
paths, sum of dropped squares for finite discrete coefficient lists. On
every path and every M the schemes obey best <= greedy <= linear, and each
scheme's error is non-increasing in M.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .haar import (
    MAX_SCALE,
    SCALING,
    Atom,
    atom_from_index,
    coeff,
    coeff_envelope,
    scale_table,
)
from .processes import CompoundPoissonPath

__all__ = [
    "Selection",
    "InvariantViolation",
    "select_linear",
    "select_greedy",
    "select_best",
    "select_linear_discrete",
    "select_greedy_discrete",
    "select_best_discrete",
    "linear_errors",
    "greedy_errors",
    "best_errors",
    "linear_errors_discrete",
    "greedy_errors_discrete",
    "best_errors_discrete",
]

# Parseval subtraction of nearly equal sums can land a hair below zero;
# anything further below is a genuine accounting bug.
_NEGATIVE_ERROR_TOL = 1e-12


class InvariantViolation(RuntimeError):
    """An internal exactness or ordering guarantee failed."""


@dataclass(frozen=True)
class Selection:
    """The result of one approximation choice.

    kept holds (atom, value) pairs in atom-index order; error_sq is the
    squared L2 error of the reconstruction from exactly those values.
    certified is True when error_sq is exact rather than grid-limited.
    """

    scheme: str
    m: int
    kept: tuple[tuple[Atom, float], ...]
    error_sq: float
    certified: bool


def _finish_error(energy_total: float, energy_kept: float) -> float:
    err = energy_total - energy_kept
    if err < 0.0:
        if err < -_NEGATIVE_ERROR_TOL:
            raise InvariantViolation(
                f"kept energy exceeds path energy by {-err:.3e}; "
                "coefficient accounting is inconsistent"
            )
        err = 0.0
    return err


def _check_m(m: int) -> None:
    if not isinstance(m, (int, np.integer)) or m < 0:
        raise ValueError(f"M must be a nonnegative integer, got {m}")


def _nonzero_stream(path: CompoundPoissonPath):
    """Structurally nonzero coefficients in atom-index order: the scaling
    atom, then every occupied atom scale by scale. Endless for N >= 1."""
    c0 = coeff(path, SCALING)
    yield 0, c0.value, c0.jump_count
    j = 0
    while True:
        if j > MAX_SCALE:
            raise RuntimeError(f"nonzero coefficient stream ran past scale {MAX_SCALE}")
        base = 1 << j
        for k, value, count in scale_table(path, j):
            yield base + k, value, count
        j += 1


def select_linear(path: CompoundPoissonPath, m: int) -> Selection:
    """Keep the first m atoms in index order, zero-valued ones included."""
    _check_m(m)
    values: dict[int, float] = {}
    if m >= 1 and path.num_jumps:
        values[0] = coeff(path, SCALING).value
        j = 0
        while (1 << j) < m:
            for k, value, _ in scale_table(path, j):
                index = (1 << j) + k
                if index < m:
                    values[index] = value
            j += 1
    kept = tuple((atom_from_index(i), values.get(i, 0.0)) for i in range(m))
    energy_kept = math.fsum(v * v for _, v in kept)
    error = _finish_error(path.l2_norm_sq(), energy_kept)
    return Selection(scheme="linear", m=m, kept=kept, error_sq=error, certified=True)


def select_greedy(path: CompoundPoissonPath, m: int) -> Selection:
    """Keep the first m structurally nonzero coefficients in index order.

    A jump-free path has no nonzero coefficients at all, so it yields an
    empty selection with zero error.
    """
    _check_m(m)
    kept: list[tuple[Atom, float]] = []
    if path.num_jumps and m:
        for index, value, _ in _nonzero_stream(path):
            kept.append((atom_from_index(index), value))
            if len(kept) == m:
                break
    energy_kept = math.fsum(v * v for _, v in kept)
    error = _finish_error(path.l2_norm_sq(), energy_kept)
    return Selection(scheme="greedy", m=m, kept=tuple(kept), error_sq=error, certified=True)


def _best_candidates(path: CompoundPoissonPath, m: int) -> list[tuple[int, float]]:
    """Scan scales until no unseen atom can reach the current m-th largest
    magnitude, then return the certified top m as (index, value), ordered by
    magnitude descending with ties to the smaller index.

    A bounded min-heap keyed on (|value|, -index) holds the running top m;
    on a magnitude tie the larger index is evicted first, which is exactly
    the smaller-index-wins rule.
    """
    heap: list[tuple[float, int, float]] = []

    def offer(index: int, value: float) -> None:
        item = (abs(value), -index, value)
        if len(heap) < m:
            heapq.heappush(heap, item)
        elif item > heap[0]:
            heapq.heapreplace(heap, item)

    # beyond the finest dyadic resolution of the jump positions every
    # coefficient is an exact float zero, so nothing there can displace
    # (or even tie ahead of) anything already kept
    resolution = 0
    for t in path.jump_times:
        den = float(t).as_integer_ratio()[1]
        resolution = max(resolution, den.bit_length() - 1)

    c0 = coeff(path, SCALING)
    if c0.jump_count:
        offer(0, c0.value)
    j = 0
    while True:
        for k, value, _ in scale_table(path, j):
            offer((1 << j) + k, value)
        if len(heap) == m:
            mth = heap[0][0]
            envelope = coeff_envelope(j + 1, path)
            if envelope < mth or envelope == 0.0:
                break
        if j >= resolution or j >= MAX_SCALE:
            break
        j += 1
    out = [(-neg_index, value) for _, neg_index, value in heap]
    out.sort(key=lambda iv: (-abs(iv[1]), iv[0]))
    return out


def select_best(path: CompoundPoissonPath, m: int) -> Selection:
    """Keep the m largest-magnitude coefficients of the full expansion.

    The scan is certified exact: it stops at the first scale whose
    coefficient envelope falls below the m-th largest magnitude found, so
    no unexamined atom could displace a kept one.
    """
    _check_m(m)
    if m == 0 or path.num_jumps == 0:
        return Selection(
            scheme="best",
            m=m,
            kept=(),
            error_sq=_finish_error(path.l2_norm_sq(), 0.0),
            certified=True,
        )
    top = _best_candidates(path, m)
    top.sort(key=lambda iv: iv[0])
    kept = tuple((atom_from_index(i), v) for i, v in top)
    energy_kept = math.fsum(v * v for _, v in kept)
    error = _finish_error(path.l2_norm_sq(), energy_kept)
    return Selection(scheme="best", m=m, kept=kept, error_sq=error, certified=True)


# ---------------------------------------------------------------------------
# error profiles: one scan shared by a whole list of M values


def _profile_errors(total: float, kept_values: list[float], m_values) -> list[float]:
    # fsum keeps each kept-energy correctly rounded, so the scheme-ordering
    # and monotonicity relations of the true sums carry over to floats
    out = []
    for m in m_values:
        energy = math.fsum(v * v for v in kept_values[: min(m, len(kept_values))])
        out.append(_finish_error(total, energy))
    return out


def linear_errors(path: CompoundPoissonPath, m_values) -> list[float]:
    """Exact linear squared errors at each M in m_values (one path scan)."""
    m_values = list(m_values)
    m_max = max(m_values, default=0)
    values: dict[int, float] = {}
    if m_max >= 1 and path.num_jumps:
        values[0] = coeff(path, SCALING).value
        j = 0
        while (1 << j) < m_max:
            for k, value, _ in scale_table(path, j):
                index = (1 << j) + k
                if index < m_max:
                    values[index] = value
            j += 1
    kept = [values.get(i, 0.0) for i in range(m_max)]
    return _profile_errors(path.l2_norm_sq(), kept, m_values)


def greedy_errors(path: CompoundPoissonPath, m_values) -> list[float]:
    """Exact greedy squared errors at each M in m_values (one path scan)."""
    m_values = list(m_values)
    m_max = max(m_values, default=0)
    kept: list[float] = []
    if path.num_jumps and m_max:
        for _, value, _ in _nonzero_stream(path):
            kept.append(value)
            if len(kept) == m_max:
                break
    return _profile_errors(path.l2_norm_sq(), kept, m_values)


def best_errors(path: CompoundPoissonPath, m_values) -> list[float]:
    """Exact best-M squared errors at each M in m_values (one certified scan)."""
    m_values = list(m_values)
    m_max = max(m_values, default=0)
    kept: list[float] = []
    if path.num_jumps and m_max:
        kept = [v for _, v in _best_candidates(path, m_max)]
    return _profile_errors(path.l2_norm_sq(), kept, m_values)


# ---------------------------------------------------------------------------
# discrete variants over a finite coefficient list (grid proxies)


def _check_discrete(coeffs, m: int) -> np.ndarray:
    c = np.asarray(getattr(coeffs, "values", coeffs), dtype=float)
    _check_m(m)
    if m > c.size:
        raise ValueError(f"M={m} exceeds the number of coefficients {c.size}")
    return c


def _dropped_energy(c: np.ndarray, kept_idx) -> float:
    dropped = np.ones(c.size, dtype=bool)
    dropped[list(kept_idx)] = False
    return float(math.fsum(np.sort(c[dropped] ** 2)))


def select_linear_discrete(coeffs, m: int) -> Selection:
    """Keep the first m entries of a finite coefficient list."""
    c = _check_discrete(coeffs, m)
    kept_idx = range(m)
    kept = tuple((atom_from_index(i), float(c[i])) for i in kept_idx)
    return Selection(
        scheme="linear", m=m, kept=kept, error_sq=_dropped_energy(c, kept_idx), certified=False
    )


def select_greedy_discrete(coeffs, m: int) -> Selection:
    """Keep the first m entries that are not exactly zero."""
    c = _check_discrete(coeffs, m)
    kept_idx = [int(i) for i in np.flatnonzero(c != 0.0)[:m]]
    kept = tuple((atom_from_index(i), float(c[i])) for i in kept_idx)
    return Selection(
        scheme="greedy", m=m, kept=kept, error_sq=_dropped_energy(c, kept_idx), certified=False
    )


def select_best_discrete(coeffs, m: int) -> Selection:
    """Keep the m largest magnitudes; ties go to the smaller index."""
    c = _check_discrete(coeffs, m)
    order = sorted(range(c.size), key=lambda i: (-abs(c[i]), i))[:m]
    kept_idx = sorted(order)
    kept = tuple((atom_from_index(i), float(c[i])) for i in kept_idx)
    return Selection(
        scheme="best", m=m, kept=kept, error_sq=_dropped_energy(c, kept_idx), certified=False
    )


def _suffix_errors(sq: np.ndarray, counts: list[int]) -> list[float]:
    """Sum of all squares past the first `count` entries.

    fsum makes each value the correctly rounded true sum, so the ordering
    between schemes and the monotonicity in M survive in floating point.
    """
    n = sq.size
    return [float(math.fsum(sq[c:])) if c < n else 0.0 for c in counts]


def linear_errors_discrete(coeffs, m_values) -> list[float]:
    c = np.asarray(getattr(coeffs, "values", coeffs), dtype=float)
    return _suffix_errors(c**2, [min(m, c.size) for m in m_values])


def greedy_errors_discrete(coeffs, m_values) -> list[float]:
    c = np.asarray(getattr(coeffs, "values", coeffs), dtype=float)
    nz_sq = c[c != 0.0] ** 2
    return _suffix_errors(nz_sq, [min(m, nz_sq.size) for m in m_values])


def best_errors_discrete(coeffs, m_values) -> list[float]:
    c = np.asarray(getattr(coeffs, "values", coeffs), dtype=float)
    sq_desc = np.sort(c**2)[::-1]
    return _suffix_errors(sq_desc, [min(m, c.size) for m in m_values])
