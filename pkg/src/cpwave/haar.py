"""Haar basis bookkeeping on [0, 1] and exact wavelet coefficients of
piecewise-constant paths.

A coefficient of a compound Poisson path is a finite sum over its jumps:
integrating the path against a Haar atom by parts turns the step path into
a sum of point evaluations of a piecewise-linear "jump weight" kernel at
the jump locations. That makes every coefficient exact, and makes the
zero/nonzero structure purely combinatorial: a coefficient vanishes exactly
when no jump lands in the atom's support, so zero detection never touches a
floating-point threshold.

Atoms are enumerated by a single index: 0 for the scaling function, and
2^j + k for the wavelet at scale j >= 0 and shift 0 <= k < 2^j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .processes import CompoundPoissonPath

__all__ = [
    "Atom",
    "SCALING",
    "Coefficient",
    "Expansion",
    "atom_index",
    "atom_from_index",
    "support",
    "jump_weight_scaling",
    "jump_weight_wavelet",
    "jumps_in_support",
    "coeff",
    "coeff_envelope",
    "expand",
    "scale_table",
    "nonzero_counts_by_scale",
    "discrete_haar_forward",
    "discrete_haar_inverse",
    "MAX_EXPAND_SCALE",
    "MAX_SCALE",
]

MAX_EXPAND_SCALE = 30  # dense enumeration of 2^(J+1) atoms gets silly past this
MAX_SCALE = 1020  # beyond this 2.0**j overflows and dyadic bucketing breaks down


@dataclass(frozen=True)
class Atom:
    """A Haar atom: the scaling function, or the wavelet at (scale j, shift k)."""

    kind: str  # "scaling" | "wavelet"
    j: int = 0
    k: int = 0

    def __post_init__(self) -> None:
        if self.kind == "scaling":
            if (self.j, self.k) != (0, 0):
                raise ValueError("the scaling atom carries no scale/shift")
        elif self.kind == "wavelet":
            if self.j < 0:
                raise ValueError(f"scale must be nonnegative, got {self.j}")
            if not (0 <= self.k <= 2**self.j - 1):
                raise ValueError(f"shift {self.k} out of range for scale {self.j}")
        else:
            raise ValueError(f"unknown atom kind {self.kind!r}")

    @staticmethod
    def wavelet(j: int, k: int) -> "Atom":
        return Atom(kind="wavelet", j=j, k=k)


SCALING = Atom(kind="scaling")


@dataclass(frozen=True)
class Coefficient:
    """An atom together with its exact coefficient value and the number of
    path jumps inside the atom's support (total jump count for scaling)."""

    atom: Atom
    value: float
    jump_count: int


def atom_index(atom: Atom) -> int:
    """Position of the atom in the canonical enumeration: scaling first,
    then scales in increasing order and shifts left to right."""
    if atom.kind == "scaling":
        return 0
    return (1 << atom.j) + atom.k


def atom_from_index(index: int) -> Atom:
    """Inverse of atom_index."""
    if index < 0:
        raise ValueError(f"atom index must be nonnegative, got {index}")
    if index == 0:
        return SCALING
    j = index.bit_length() - 1
    return Atom.wavelet(j, index - (1 << j))


def support(atom: Atom) -> tuple[float, float]:
    """Half-open support [lo, hi) of the atom on [0, 1]."""
    if atom.kind == "scaling":
        return (0.0, 1.0)
    width = 2.0 ** (-atom.j)
    return (atom.k * width, (atom.k + 1) * width)


def _check_unit_interval(t) -> np.ndarray:
    ts = np.asarray(t, dtype=float)
    if ts.size and (ts.min() < 0.0 or ts.max() > 1.0):
        raise ValueError("argument must lie in [0, 1]")
    return ts


def jump_weight_scaling(t):
    """Weight a jump at position t contributes to the scaling coefficient.

    A unit jump at t adds (1 - t) to the integral of the path against the
    scaling function.
    """
    ts = _check_unit_interval(t)
    out = 1.0 - ts
    return float(out) if np.isscalar(t) or ts.ndim == 0 else out


def jump_weight_wavelet(j: int, k: int, t):
    """Weight a jump at position t contributes to the (j, k) wavelet
    coefficient: a downward tent over the atom's support, zero outside it,
    with peak magnitude 2^(-j/2 - 1) at the support midpoint.
    """
    atom = Atom.wavelet(j, k)  # validates (j, k)
    ts = _check_unit_interval(t)
    u = ts * 2.0**j - k  # position within the support, in [0, 1)
    inside = (u >= 0.0) & (u < 1.0)
    tent = np.minimum(u, 1.0 - u)
    out = np.where(inside, -(2.0 ** (-j / 2.0)) * tent, 0.0)
    return float(out) if np.isscalar(t) or ts.ndim == 0 else out


def jumps_in_support(path: CompoundPoissonPath, atom: Atom) -> int:
    """Number of jumps inside the atom's half-open support."""
    if atom.kind == "scaling":
        return path.num_jumps
    lo, hi = support(atom)
    times = path.jump_times
    return int(np.searchsorted(times, hi, side="left") - np.searchsorted(times, lo, side="left"))


def coeff(path: CompoundPoissonPath, atom: Atom) -> Coefficient:
    """Exact coefficient of the path against one atom.

    The value is a sum over the jumps in the atom's support only, so it is
    exactly 0.0 whenever that support contains no jump.
    """
    times = path.jump_times
    heights = path.jump_heights
    if atom.kind == "scaling":
        count = path.num_jumps
        value = float(math.fsum(heights * (1.0 - times))) if count else 0.0
        return Coefficient(atom=atom, value=value, jump_count=count)
    lo, hi = support(atom)
    a = int(np.searchsorted(times, lo, side="left"))
    b = int(np.searchsorted(times, hi, side="left"))
    if a == b:
        return Coefficient(atom=atom, value=0.0, jump_count=0)
    weights = jump_weight_wavelet(atom.j, atom.k, times[a:b])
    value = float(math.fsum(heights[a:b] * np.atleast_1d(weights)))
    return Coefficient(atom=atom, value=value, jump_count=b - a)


def coeff_envelope(j: int, path: CompoundPoissonPath) -> float:
    """Upper bound on |coefficient| for every atom at scale j: total absolute
    jump mass times the peak tent magnitude 2^(-j/2 - 1). Decreasing in j."""
    if j < 0:
        raise ValueError(f"scale must be nonnegative, got {j}")
    if path.num_jumps == 0:
        return 0.0
    return float(np.abs(path.jump_heights).sum()) * 2.0 ** (-j / 2.0 - 1.0)


def scale_table(path: CompoundPoissonPath, j: int) -> list[tuple[int, float, int]]:
    """All atoms at scale j whose support contains a jump, in shift order.

    Returns (k, value, count) triples. Atoms absent from the table have
    jump count 0 and coefficient exactly 0. Only occupied atoms are ever
    materialized, so the cost is O(N) per scale regardless of j.
    """
    if j < 0:
        raise ValueError(f"scale must be nonnegative, got {j}")
    if j > MAX_SCALE:
        raise ValueError(f"scale {j} exceeds the dyadic bucketing limit {MAX_SCALE}")
    times = path.jump_times
    heights = path.jump_heights
    scale = 2.0**j
    amp = 2.0 ** (-j / 2.0)
    buckets: dict[int, tuple[float, int]] = {}
    for t, a in zip(times, heights):
        x = t * scale  # exact: multiplying a float by a power of two
        k = int(x)
        u = x - k
        w = -amp * min(u, 1.0 - u)
        value, count = buckets.get(k, (0.0, 0))
        buckets[k] = (value + a * w, count + 1)
    return [(k, value, count) for k, (value, count) in sorted(buckets.items())]


def nonzero_counts_by_scale(path: CompoundPoissonPath, target: int) -> list[int]:
    """Per-scale counts of structurally nonzero coefficients, starting at
    scale 0, extended until the running total reaches target.

    Scale 0 counts both the scaling atom and the (0, 0) wavelet, matching
    the convention that the coarsest level carries two coefficients.
    """
    n = path.num_jumps
    counts: list[int] = []
    total = 0
    j = 0
    while total < target:
        if j == 0:
            c = 2 if n >= 1 else 0
        else:
            c = len({int(t * 2.0**j) for t in path.jump_times})
        counts.append(c)
        total += c
        if n == 0:
            break
        if j >= MAX_SCALE:
            raise RuntimeError(f"nonzero count target {target} not reached by scale {MAX_SCALE}")
        j += 1
    return counts


@dataclass(frozen=True)
class Expansion:
    """Wavelet expansion of a path up to max_scale.

    Only structurally nonzero coefficients are stored; the dense iterator
    fills in exact zeros for every absent atom, in index order.
    """

    max_scale: int
    lam: float
    sigma0_sq: float
    _nonzero: dict[int, Coefficient] = field(repr=False)

    def nonzero(self) -> list[Coefficient]:
        return [self._nonzero[i] for i in sorted(self._nonzero)]

    def coefficients(self) -> Iterator[Coefficient]:
        """Dense index-ordered iteration over every atom with scale <= max_scale."""
        for index in range(2 ** (self.max_scale + 1)):
            c = self._nonzero.get(index)
            yield c if c is not None else Coefficient(
                atom=atom_from_index(index), value=0.0, jump_count=0
            )

    def energy(self) -> float:
        """Sum of squared coefficients up to max_scale."""
        return math.fsum(c.value**2 for c in self._nonzero.values())


def expand(path: CompoundPoissonPath, max_scale: int) -> Expansion:
    """All coefficients with scale <= max_scale, stored sparsely."""
    if max_scale < 0:
        raise ValueError(f"max_scale must be nonnegative, got {max_scale}")
    if max_scale > MAX_EXPAND_SCALE:
        raise ValueError(
            f"max_scale {max_scale} exceeds {MAX_EXPAND_SCALE}; dense enumeration "
            "of that many atoms is not supported"
        )
    table: dict[int, Coefficient] = {}
    scaling = coeff(path, SCALING)
    if scaling.jump_count:
        table[0] = scaling
    for j in range(max_scale + 1):
        for k, value, count in scale_table(path, j):
            table[(1 << j) + k] = Coefficient(atom=Atom.wavelet(j, k), value=value, jump_count=count)
    return Expansion(
        max_scale=max_scale,
        lam=path.lam,
        sigma0_sq=path.lam * path.law.variance,
        _nonzero=table,
    )


def _as_values(samples) -> np.ndarray:
    values = getattr(samples, "values", samples)
    return np.asarray(values, dtype=float)


def discrete_haar_forward(samples) -> np.ndarray:
    """Orthonormal discrete Haar transform of a length-2^L signal.

    Output layout mirrors the atom enumeration: slot 0 is the scaling
    coefficient and slot 2^j + k the detail at scale j (coarsest j = 0)
    and shift k, for 0 <= j < L.
    """
    x = _as_values(samples)
    n = x.size
    if n == 0 or (n & (n - 1)) != 0:
        raise ValueError(f"signal length must be a power of two, got {n}")
    out = np.empty(n)
    cur = x.copy()
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    while cur.size > 1:
        half = cur.size // 2
        even, odd = cur[0::2], cur[1::2]
        out[half : 2 * half] = (even - odd) * inv_sqrt2
        cur = (even + odd) * inv_sqrt2
    out[0] = cur[0]
    return out


def discrete_haar_inverse(coeffs) -> np.ndarray:
    """Inverse of discrete_haar_forward."""
    c = _as_values(coeffs)
    n = c.size
    if n == 0 or (n & (n - 1)) != 0:
        raise ValueError(f"coefficient length must be a power of two, got {n}")
    cur = np.array([c[0]])
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    while cur.size < n:
        half = cur.size
        detail = c[half : 2 * half]
        nxt = np.empty(2 * half)
        nxt[0::2] = (cur + detail) * inv_sqrt2
        nxt[1::2] = (cur - detail) * inv_sqrt2
        cur = nxt
    return cur
