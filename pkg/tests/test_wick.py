"""Pair partitions, channel contractions, and the exact reservoir kernel."""

import itertools
import math

import numpy as np
import pytest
from numpy.polynomial.legendre import leggauss
from numpy.testing import assert_allclose

import multinoise as mn
from multinoise.checks import random_coefficients
from multinoise.errors import ZeroGamma
from conftest import random_test_function


def brute_force_matchings(signs):
    """Independent enumeration: filter all perfect matchings of the indices."""
    idx = list(range(len(signs)))
    if len(idx) % 2:
        return set()

    def all_matchings(rest):
        if not rest:
            yield ()
            return
        first, *others = rest
        for i, partner in enumerate(others):
            for sub in all_matchings(others[:i] + others[i + 1:]):
                yield ((first, partner),) + sub

    out = set()
    for matching in all_matchings(idx):
        if all(signs[j] == -1 and signs[k] == +1 for j, k in matching):
            out.add(frozenset(matching))
    return out


def test_matching_examples():
    assert mn.enumerate_matchings([-1, +1]) == [((0, 1),)]
    got = {frozenset(m) for m in mn.enumerate_matchings([-1, -1, +1, +1])}
    assert got == {frozenset({(0, 2), (1, 3)}), frozenset({(0, 3), (1, 2)})}
    assert mn.enumerate_matchings([+1, -1]) == []
    assert mn.enumerate_matchings([-1, +1, -1]) == []
    assert mn.enumerate_matchings([-1, -1, +1]) == []


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_block_pattern_counts_factorial(m):
    signs = [-1] * m + [+1] * m
    assert len(mn.enumerate_matchings(signs)) == math.factorial(m)


def test_matchings_against_brute_force(rng):
    for length in (2, 4, 6, 8):
        for _ in range(6):
            signs = [int(s) for s in rng.choice([-1, +1], size=length)]
            got = {frozenset(m) for m in mn.enumerate_matchings(signs)}
            assert got == brute_force_matchings(signs)


def test_word_length_cap():
    with pytest.raises(ValueError):
        mn.enumerate_matchings([-1, +1] * 7)


def test_noise_pair_examples(rng):
    f = random_test_function(rng, n_atoms=1)
    h = random_test_function(rng, n_atoms=1)
    gamma0 = 1.7
    assert_allclose(mn.noise_pair(0, gamma0, 1.0, f, h),
                    gamma0 * mn.l2_inner(f, h), rtol=1e-10)
    phi = mn.gaussian()
    assert abs(mn.noise_pair(1, 1.0, 1.0, phi, phi)) < 1e-12
    with pytest.raises(ZeroGamma):
        mn.noise_pair(1, 0.0, 1.0, f, h)


def test_noise_pair_lambda_grading_exact(rng):
    f = random_test_function(rng, n_atoms=1)
    h = random_test_function(rng, n_atoms=1)
    for n in (0, 1, 2):
        base = mn.noise_pair(n, 0.9, 1.0, f, h)
        assert mn.noise_pair(n, 0.9, 0.3, f, h) == 0.3 ** (2 * n) * base


def test_reservoir_pair_equal_smears_nonnegative(quadratic_catalog):
    disp, g = quadratic_catalog
    channel = mn.ReservoirChannel(disp, g, 0.7)
    f = mn.gaussian(width=2.0, modulation=-0.3)
    val = mn.reservoir_pair(channel, f, f)
    assert abs(val.imag) < 1e-10
    assert val.real >= 0


def _time_domain_oracle(channel, f_minus, f_plus):
    """Tensor-product quadrature of the two-time kernel at the channel's lambda.

    Entirely independent of the production route: integrates over (t, tau)
    with the momentum kernel spline-sampled on a dense uniform grid.
    """
    from scipy.interpolate import CubicSpline

    disp, g, lam = channel.dispersion, channel.form_factor, channel.lam
    k_lo, k_hi = g.envelope_interval(1e-9)
    kx, kw = leggauss(16)
    k_panels = np.linspace(k_lo, k_hi, 200 + 1)
    mids, halves = 0.5 * (k_panels[:-1] + k_panels[1:]), 0.5 * np.diff(k_panels)
    k_nodes = (mids[:, None] + halves[:, None] * kx[None, :]).ravel()
    k_weights = (halves[:, None] * kw[None, :]).ravel()
    dens = k_weights * np.abs(g(k_nodes)) ** 2
    omega = np.asarray(disp.omega(k_nodes))

    t_lo, t_hi = f_minus.envelope_interval(1e-12)
    s_lo, s_hi = f_plus.envelope_interval(1e-12)
    lo, hi = min(t_lo, s_lo), max(t_hi, s_hi)
    s_max = (hi - lo) / lam ** 2
    s_grid = np.linspace(-s_max, s_max, 8001)
    kernel_vals = np.exp(1j * np.outer(s_grid, omega)) @ dens
    kernel = CubicSpline(s_grid, kernel_vals)

    tx, tw = leggauss(24)
    panels = np.linspace(lo, hi, 24 + 1)
    mids, halves = 0.5 * (panels[:-1] + panels[1:]), 0.5 * np.diff(panels)
    t_nodes = (mids[:, None] + halves[:, None] * tx[None, :]).ravel()
    t_weights = (halves[:, None] * tw[None, :]).ravel()

    fm = np.conj(f_minus(t_nodes))
    fp = f_plus(t_nodes)
    smat = (t_nodes[None, :] - t_nodes[:, None]) / lam ** 2  # tau - t
    kern = kernel(smat)
    return (t_weights * fm) @ kern @ (t_weights * fp) / lam ** 2


def test_reservoir_pair_against_time_domain_oracle(quadratic_catalog):
    disp, g = quadratic_catalog
    channel = mn.ReservoirChannel(disp, g, 1.0)
    f_minus = mn.gaussian(width=2.5)
    f_plus = mn.gaussian(width=2.5, modulation=-0.4)
    fast = mn.reservoir_pair(channel, f_minus, f_plus)
    slow = _time_domain_oracle(channel, f_minus, f_plus)
    assert abs(fast - slow) <= 1e-6 * (1 + abs(fast))


def test_reservoir_pair_small_lambda_approaches_white_noise(quadratic_catalog):
    disp, g = quadratic_catalog
    gammas = mn.gamma_table(disp, g, range(3)).gammas()
    f_minus = mn.gaussian(width=2.5)
    f_plus = mn.gaussian(width=2.5, modulation=-0.4)
    lam = 0.1
    val = mn.reservoir_pair(mn.ReservoirChannel(disp, g, lam), f_minus, f_plus)
    white = gammas[0] * mn.l2_inner(f_minus, f_plus)
    budget = 1.5 * (lam ** 2 * abs(mn.noise_pair(1, gammas[1], 1.0, f_minus, f_plus))
                    + lam ** 4 * abs(mn.noise_pair(2, gammas[2], 1.0, f_minus, f_plus)))
    assert abs(val - white) <= budget


def test_reservoir_pair_radial_reduction_matches_its_gamma():
    """d = 3 channel approaches its own white-noise limit at small lambda."""
    disp = mn.QuadraticDispersion(mass=1.0, offset=2.0, dimension=3)
    g = mn.gaussian(center=2.0, width=0.35)
    gammas = mn.gamma_table(disp, g, range(2)).gammas()
    f = mn.gaussian(width=2.5)
    h = mn.gaussian(width=2.5, modulation=-0.4)
    val = mn.reservoir_pair(mn.ReservoirChannel(disp, g, 0.1), f, h)
    white = gammas[0] * mn.l2_inner(f, h)
    assert abs(val - white) <= 0.05 * abs(white)


def test_correlation_odd_word_vanishes(rng):
    f = random_test_function(rng, n_atoms=1)
    word = [mn.Letter(-1, f, 0), mn.Letter(+1, f, 0), mn.Letter(+1, f, 0)]
    assert mn.correlation(word, gammas={0: 1.0}) == 0


def test_correlation_two_point_word_is_kernel(rng):
    f = random_test_function(rng, n_atoms=1)
    h = random_test_function(rng, n_atoms=1)
    word = [mn.Letter(-1, f, 1), mn.Letter(+1, h, 1)]
    val = mn.correlation(word, gammas={1: 0.8}, lam=1.0)
    assert_allclose(val, mn.indefinite_inner(1, 0.8, f, h), rtol=1e-12)


def test_correlation_cross_channel_is_exact_zero(rng):
    f = random_test_function(rng, n_atoms=1)
    h = random_test_function(rng, n_atoms=1)
    word = [mn.Letter(-1, f, 1), mn.Letter(+1, h, 2)]
    assert mn.correlation(word, gammas={1: 1.0, 2: 1.0}) == 0


def test_four_letter_word_against_fock_oracle(small_sectors, rng):
    gammas = {n: s.gamma for n, s in small_sectors.items()}
    orders = [1, 0, 0, 1]
    signs = [-1, -1, +1, +1]
    coeffs = [random_coefficients(rng, 4) for _ in orders]
    smears = [mn.linear_combination(c, small_sectors[n].basis)
              for c, n in zip(coeffs, orders)]
    word = [mn.Letter(s, f, n) for s, f, n in zip(signs, smears, orders)]
    wick_val = mn.correlation(word, gammas=gammas, lam=1.0)

    state = mn.apply_word(list(zip(signs, orders, coeffs)), mn.vacuum_state(),
                          small_sectors)
    fock_val = mn.multi_inner(mn.vacuum_state(), state)
    assert abs(wick_val - fock_val) <= 1e-8 * (1 + abs(wick_val))


def test_reservoir_word_positivity(quadratic_catalog):
    disp, g = quadratic_catalog
    channel = mn.ReservoirChannel(disp, g, 0.8)
    f = mn.gaussian(width=1.8, modulation=0.2)
    word = [mn.Letter(-1, f), mn.Letter(+1, f)]
    val = mn.correlation(word, channel=channel)
    assert abs(val.imag) < 1e-10
    assert val.real >= 0


def test_mixed_words_rejected(rng):
    f = random_test_function(rng, n_atoms=1)
    word = [mn.Letter(-1, f, 1), mn.Letter(+1, f)]
    with pytest.raises(ValueError):
        mn.correlation(word, gammas={1: 1.0})


def test_letter_validation(rng):
    f = random_test_function(rng, n_atoms=1)
    with pytest.raises(ValueError):
        mn.Letter(0, f, 1)
    with pytest.raises(ValueError):
        mn.Letter(-1, mn.zero(), 1)
    with pytest.raises(ValueError):
        mn.ReservoirChannel(mn.LinearDispersion(), f, 0.0)
    with pytest.raises(ValueError):
        mn.noise_pair(1, 1.0, -0.5, f, f)


def test_channel_carries_its_support_report(quadratic_catalog):
    disp, g = quadratic_catalog
    channel = mn.ReservoirChannel(disp, g, 0.5)
    report = channel.support_report()
    assert report.passes and report.support[0] > 0
