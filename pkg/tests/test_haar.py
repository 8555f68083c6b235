"""Tests for Haar bookkeeping, exact coefficients, and the discrete transform."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cpwave import (
    SCALING,
    Atom,
    JumpLaw,
    atom_from_index,
    atom_index,
    coeff,
    coeff_envelope,
    derive_stream,
    discrete_haar_forward,
    discrete_haar_inverse,
    expand,
    jump_weight_scaling,
    jump_weight_wavelet,
    jumps_in_support,
    sample_grid,
    sample_path,
)
from cpwave.haar import scale_table, support

from test_processes import make_path

LAW10 = JumpLaw(variance=0.1)


# ---------------------------------------------------------------------------
# indexing


def test_atom_index_values():
    assert atom_index(SCALING) == 0
    assert atom_index(Atom.wavelet(0, 0)) == 1
    assert atom_index(Atom.wavelet(3, 5)) == 13


def test_atom_index_exhaustive_roundtrip():
    for index in range(4096):
        assert atom_index(atom_from_index(index)) == index


@given(st.integers(min_value=0, max_value=2**20))
def test_atom_index_bijection_up_to_2_20(index):
    atom = atom_from_index(index)
    assert atom_index(atom) == index
    if atom.kind == "wavelet":
        assert 0 <= atom.k <= 2**atom.j - 1


@given(st.integers(min_value=0, max_value=24), st.data())
def test_atom_roundtrip_from_scale_shift(j, data):
    k = data.draw(st.integers(min_value=0, max_value=2**j - 1))
    atom = Atom.wavelet(j, k)
    assert atom_from_index(atom_index(atom)) == atom


def test_atom_validation():
    with pytest.raises(ValueError):
        Atom.wavelet(2, 4)
    with pytest.raises(ValueError):
        Atom.wavelet(-1, 0)
    with pytest.raises(ValueError):
        Atom(kind="scaling", j=1)


# ---------------------------------------------------------------------------
# jump weights


def test_jump_weight_scaling_values():
    assert jump_weight_scaling(0.25) == pytest.approx(0.75)
    assert jump_weight_scaling(0.0) == 1.0
    assert jump_weight_scaling(1.0) == 0.0
    with pytest.raises(ValueError):
        jump_weight_scaling(1.5)


def test_jump_weight_wavelet_values():
    assert jump_weight_wavelet(0, 0, 0.25) == pytest.approx(-0.25)
    assert jump_weight_wavelet(1, 1, 0.25) == 0.0  # outside the support
    assert jump_weight_wavelet(0, 0, 0.5) == pytest.approx(-0.5)  # the peak
    with pytest.raises(ValueError):
        jump_weight_wavelet(0, 0, -0.1)


@given(st.integers(min_value=0, max_value=16), st.data())
@settings(max_examples=200)
def test_jump_weight_wavelet_support_and_peak(j, data):
    k = data.draw(st.integers(min_value=0, max_value=2**j - 1))
    t = data.draw(st.floats(min_value=0.0, max_value=1.0))
    w = jump_weight_wavelet(j, k, t)
    lo, hi = support(Atom.wavelet(j, k))
    if not (lo <= t < hi):
        assert w == 0.0
    assert abs(w) <= 2.0 ** (-j / 2.0 - 1.0) + 1e-15


def test_jump_weight_wavelet_vanishes_at_support_edges():
    assert jump_weight_wavelet(2, 1, 0.25) == 0.0  # left edge belongs to the atom
    assert jump_weight_wavelet(2, 0, 0.25) == 0.0  # right edge is outside


# ---------------------------------------------------------------------------
# jump counting


def test_jumps_in_support_examples():
    empty = make_path([], [])
    assert jumps_in_support(empty, Atom.wavelet(3, 2)) == 0
    path = make_path([0.3], [1.0])
    assert jumps_in_support(path, Atom.wavelet(1, 0)) == 1
    assert jumps_in_support(path, Atom.wavelet(1, 1)) == 0
    assert jumps_in_support(path, SCALING) == 1


def test_jumps_in_support_half_open_boundary():
    path = make_path([0.5], [1.0])
    assert jumps_in_support(path, Atom.wavelet(1, 0)) == 0
    assert jumps_in_support(path, Atom.wavelet(1, 1)) == 1


# ---------------------------------------------------------------------------
# exact coefficients


def brute_force_coeff(path, atom):
    """Independent oracle: integrate path * atom exactly, segment by segment.

    Both factors are piecewise constant, so splitting at every breakpoint of
    either gives the exact integral.
    """
    if atom.kind == "scaling":
        pieces = [(0.0, 1.0, 1.0)]
    else:
        lo, hi = support(atom)
        mid = (lo + hi) / 2.0
        amp = 2.0 ** (atom.j / 2.0)
        pieces = [(lo, mid, amp), (mid, hi, -amp)]
    total = 0.0
    for lo, hi, amp in pieces:
        pts = sorted({lo, hi, *[t for t in path.jump_times if lo < t < hi]})
        for a, b in zip(pts, pts[1:]):
            total += amp * path.value_at((a + b) / 2.0) * (b - a)
    return total


def test_coeff_single_jump_examples():
    path = make_path([0.25], [1.0])
    c = coeff(path, Atom.wavelet(0, 0))
    assert c.value == pytest.approx(-0.25)
    assert c.jump_count == 1
    assert coeff(path, SCALING).value == pytest.approx(0.75)
    c11 = coeff(path, Atom.wavelet(1, 1))
    assert c11.value == 0.0 and c11.jump_count == 0


def test_coeff_matches_brute_force_integration():
    for seed in range(6):
        path = sample_path(8.0, JumpLaw(variance=0.125), derive_stream(20, seed))
        for j in range(0, 6):
            for k, value, count in scale_table(path, j):
                atom = Atom.wavelet(j, k)
                assert value == pytest.approx(brute_force_coeff(path, atom), rel=1e-10, abs=1e-14)
                assert count == jumps_in_support(path, atom)
        c0 = coeff(path, SCALING)
        assert c0.value == pytest.approx(brute_force_coeff(path, SCALING), rel=1e-10)


def test_coeff_zero_iff_no_jump_in_support():
    for seed in range(40):
        path = sample_path(10.0, LAW10, derive_stream(21, seed))
        for j in range(0, 11):
            occupied = {k: (v, c) for k, v, c in scale_table(path, j)}
            per_scale_total = sum(c for _, c in occupied.values())
            assert per_scale_total == path.num_jumps  # no jump lost or double-counted
            for k, (v, c) in occupied.items():
                assert c >= 1 and v != 0.0
        # spot-check absent atoms through the public single-atom api
        for k in (0, 3, 7):
            c = coeff(path, Atom.wavelet(3, k))
            assert (c.value == 0.0) == (c.jump_count == 0)


def test_coeff_envelope_examples_and_bound():
    assert coeff_envelope(0, make_path([], [])) == 0.0
    assert coeff_envelope(0, make_path([0.5], [2.0])) == pytest.approx(1.0)
    for seed in range(10):
        path = sample_path(10.0, LAW10, derive_stream(22, seed))
        for j in range(0, 9):
            env = coeff_envelope(j, path)
            for k, value, _ in scale_table(path, j):
                assert abs(value) <= env + 1e-15
        envs = [coeff_envelope(j, path) for j in range(12)]
        assert all(a >= b for a, b in zip(envs, envs[1:]))


# ---------------------------------------------------------------------------
# expansion


def test_expand_zero_path():
    exp = expand(make_path([], []), 4)
    assert all(c.value == 0.0 and c.jump_count == 0 for c in exp.coefficients())


def test_expand_dense_iterator_indexed_and_complete():
    path = make_path([0.3, 0.6], [1.0, -1.0])
    exp = expand(path, 3)
    coeffs = list(exp.coefficients())
    assert len(coeffs) == 2**4
    assert [atom_index(c.atom) for c in coeffs] == list(range(16))
    for c in coeffs:
        ref = coeff(path, c.atom)
        assert c.value == ref.value and c.jump_count == ref.jump_count


def test_expand_partial_energy_below_norm():
    for seed in range(20):
        path = sample_path(10.0, LAW10, derive_stream(23, seed))
        exp = expand(path, 10)
        assert exp.energy() <= path.l2_norm_sq() + 1e-12


def test_expand_tail_deficit_matches_geometric_sum():
    # expected energy beyond scale J is sigma0^2 * 2^-J / 12 (here sigma0^2 = 1)
    big_j = 12
    deficits = []
    for seed in range(10_000):
        path = sample_path(10.0, LAW10, derive_stream(24, seed))
        deficits.append(path.l2_norm_sq() - expand(path, big_j).energy())
    assert all(d >= -1e-12 for d in deficits)
    expected = 2.0**-big_j / 12.0
    assert np.mean(deficits) == pytest.approx(expected, rel=0.10)


def test_expand_guards():
    path = make_path([0.3], [1.0])
    with pytest.raises(ValueError):
        expand(path, 31)
    with pytest.raises(ValueError):
        expand(path, -1)


def test_per_scale_counts_exact_bounds():
    # exact packing bounds: n_j <= N, n_j = N once 2^j * spacing >= 1, and
    # n_j >= N * 2^j * spacing / (1 + 2^j * spacing)
    for seed in range(300):
        path = sample_path(10.0, LAW10, derive_stream(25, seed))
        n = path.num_jumps
        if n == 0:
            continue
        spacing = path.min_spacing()
        for j in range(1, 14):
            n_j = len(scale_table(path, j))
            assert n_j <= n
            ratio = 2.0**j * spacing
            if ratio >= 1.0:
                assert n_j == n
            assert n_j >= n * ratio / (1.0 + ratio) - 1e-12


def test_per_scale_counts_typical_lower_bound():
    # the stronger display n_j >= N min(1, 2^j spacing) fails only on rare
    # tight-pair configurations; it should hold on the vast majority of paths
    ok = total = 0
    for seed in range(500):
        path = sample_path(10.0, LAW10, derive_stream(26, seed))
        n = path.num_jumps
        if n == 0:
            continue
        total += 1
        spacing = path.min_spacing()
        ok += all(
            len(scale_table(path, j)) >= n * min(1.0, 2.0**j * spacing) - 1e-12
            for j in range(1, 14)
        )
    assert ok / total > 0.95


# ---------------------------------------------------------------------------
# discrete transform


def haar_filter_matrix(n):
    """Independent oracle: build the orthonormal Haar analysis matrix row by
    row from the definition (scaling row + tent-free square-wave details)."""
    rows = [np.full(n, 1.0 / math.sqrt(n))]
    levels = int(math.log2(n))
    for j in range(levels):
        block = n >> j
        for k in range(2**j):
            row = np.zeros(n)
            start = k * block
            row[start : start + block // 2] = 1.0
            row[start + block // 2 : start + block] = -1.0
            rows.append(row / math.sqrt(block))
    return np.vstack(rows)


def test_discrete_haar_constant_signal():
    out = discrete_haar_forward(np.array([1.0, 1.0, 1.0, 1.0]))
    assert out[0] == pytest.approx(2.0)
    assert np.allclose(out[1:], 0.0, atol=1e-15)


def test_discrete_haar_two_points():
    out = discrete_haar_forward(np.array([1.0, -1.0]))
    assert out == pytest.approx([0.0, math.sqrt(2.0)])


def test_discrete_haar_matches_filter_matrix():
    rng = derive_stream(27, 0)
    for n in (2, 8, 16, 64):
        x = rng.normal(0.0, 1.0, n)
        expected = haar_filter_matrix(n) @ x
        assert np.allclose(discrete_haar_forward(x), expected, atol=1e-12)


@given(st.integers(min_value=0, max_value=8), st.data())
@settings(max_examples=40, deadline=None)
def test_discrete_haar_roundtrip_and_energy(log2n, data):
    n = 2**log2n
    x = np.array(
        data.draw(
            st.lists(
                st.floats(min_value=-100, max_value=100),
                min_size=n,
                max_size=n,
            )
        )
    )
    c = discrete_haar_forward(x)
    back = discrete_haar_inverse(c)
    assert np.max(np.abs(back - x)) < 1e-12 * max(1.0, np.max(np.abs(x)))
    ex, ec = float((x**2).sum()), float((c**2).sum())
    assert abs(ec - ex) <= 1e-10 * max(ex, 1e-300)


def test_discrete_haar_rejects_bad_length():
    with pytest.raises(ValueError):
        discrete_haar_forward(np.arange(3, dtype=float))
    with pytest.raises(ValueError):
        discrete_haar_inverse(np.arange(5, dtype=float))


def test_analytic_coeffs_match_grid_transform():
    # grid route at L=16, rescaled by 2^(-L/2), against the exact values;
    # the discrepancy per atom is discretization-limited, bounded by
    # 2^(-12) of the scale-j envelope for scales <= 3
    for seed in range(5):
        path = sample_path(10.0, LAW10, derive_stream(28, seed))
        grid = sample_grid(path, 16)
        d = discrete_haar_forward(grid) * 2.0**-8.0
        c0 = coeff(path, SCALING).value
        assert abs(d[0] - c0) <= 2.0**-12 * max(abs(c0), coeff_envelope(0, path))
        for j in range(0, 4):
            env = coeff_envelope(j, path)
            table = {k: v for k, v, _ in scale_table(path, j)}
            for k in range(2**j):
                value = table.get(k, 0.0)
                assert abs(d[(1 << j) + k] - value) <= 2.0**-12 * max(abs(value), env)
