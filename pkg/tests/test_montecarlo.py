"""Monte Carlo oracle: sampling, estimators, and determinism.

Statistical assertions use tolerances of at least five standard errors at
the chosen sample sizes, so with the fixed seeds they are deterministic
and with fresh seeds they would fail with negligible probability.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from cognet import (
    FadingSpec,
    SimWindow,
    SystemParams,
    TsPoint,
    conditional_moments,
    guard_zone_void_prob,
    sample_tsppp,
    simulate_coverage,
    simulate_coverage_table,
    simulate_energy,
    simulate_guard_void,
    simulate_meta,
    simulate_transmit_prob,
)

MEAN_ENERGY = 0.18994062525880187
CHAR_AT_ONE = 0.9637839182671654 + 0.18052568111574557j
CCDF_AT_EPSILON = 0.592928646152637
PRIMARY_COVERAGE = 0.8726087460309989
SECONDARY_COVERAGE = 0.6186305070755755
RICIAN_K5_CCDF_AT_ONE = 0.4410079170996565


def window(seed, n=None):
    return SimWindow(master_seed=seed) if n is None else SimWindow(
        master_seed=seed, replicates=n)


def test_sim_window_validation():
    with pytest.raises(ValueError, match="disk_radius"):
        SimWindow(disk_radius=0.0)
    with pytest.raises(ValueError, match="t_min < t_max"):
        SimWindow(t_min=1.0, t_max=0.0)
    with pytest.raises(ValueError, match="replicates"):
        SimWindow(replicates=0)


def test_fading_spec_validation():
    with pytest.raises(ValueError, match="kind"):
        FadingSpec(kind="nakagami")
    with pytest.raises(ValueError, match="k_factor"):
        FadingSpec(kind="rician", k_factor=-1.0)
    with pytest.raises(ValueError, match="fade"):
        TsPoint(0.0, 0.0, 0.0, -1.0)


def test_fading_ccdf_oracles():
    spec = FadingSpec("rician", 5.0)
    assert float(spec.ccdf(1.0)) == pytest.approx(
        RICIAN_K5_CCDF_AT_ONE, abs=1e-12)
    # zero line-of-sight power reduces to the exponential law
    tau = np.linspace(0.0, 4.0, 17)
    np.testing.assert_allclose(
        FadingSpec("rician", 0.0).ccdf(tau), np.exp(-tau), atol=1e-12)


@pytest.mark.parametrize("spec", [FadingSpec(), FadingSpec("rician", 5.0)])
def test_fading_samples_have_unit_mean(spec):
    rng = np.random.default_rng(3)
    draws = spec.sample(rng, 200_000)
    assert np.all(draws >= 0.0)
    assert float(draws.mean()) == pytest.approx(1.0, abs=0.012)


def test_tsppp_sampling_geometry_and_rate():
    w = SimWindow(disk_radius=20.0, t_min=-0.5, t_max=0.5, master_seed=5)
    rng = np.random.default_rng(11)
    sample = sample_tsppp(0.5, w, rng)
    assert np.all(sample.radius <= 20.0)
    assert np.all((sample.epoch >= -0.5) & (sample.epoch <= 0.5))
    expected = 0.5 * math.pi * 20.0**2  # 628 points; 5 sigma is about 125
    assert abs(len(sample) - expected) < 130
    point = sample[0]
    assert isinstance(point, TsPoint)
    assert point.fade >= 0.0


def test_tsppp_sampling_is_deterministic():
    w = SimWindow(disk_radius=10.0, master_seed=5)
    a = sample_tsppp(1.0, w, np.random.default_rng(7))
    b = sample_tsppp(1.0, w, np.random.default_rng(7))
    np.testing.assert_array_equal(a.x, b.x)
    np.testing.assert_array_equal(a.fade, b.fade)
    c = sample_tsppp(1.0, w, np.random.default_rng(8))
    assert len(c) != len(a) or not np.array_equal(a.x, c.x)


def test_energy_samples_match_the_law(default_params):
    w = window(101)
    samples = simulate_energy(default_params, w, 40_000)
    assert samples.shape == (40_000,)
    assert np.all(samples >= 0.0)
    # sd(E_H) is about 0.21, so the mean is known to about 0.001
    assert float(samples.mean()) == pytest.approx(MEAN_ENERGY, abs=0.0065)
    empirical_cf = np.exp(1j * samples).mean()
    assert abs(empirical_cf - CHAR_AT_ONE) < 0.02
    assert float((samples > 0.1).mean()) == pytest.approx(
        CCDF_AT_EPSILON, abs=0.016)


def test_energy_simulation_is_deterministic(default_params):
    a = simulate_energy(default_params, window(33), 2000)
    b = simulate_energy(default_params, window(33), 2000)
    np.testing.assert_array_equal(a, b)
    c = simulate_energy(default_params, window(34), 2000)
    assert not np.array_equal(a, c)


def test_energy_far_field_compensation_is_deterministic(default_params):
    w = window(33)
    with_far = simulate_energy(default_params, w, 2000)
    without = simulate_energy(default_params, w, 2000,
                              include_far_field=False)
    tail, _ = quad(lambda u: u / (1.0 + u**3), w.disk_radius, np.inf)
    const = (2.0 * math.pi * default_params.lambda1 * default_params.p1
             * default_params.t_e * default_params.t_i * tail)
    np.testing.assert_allclose(with_far - without, const, rtol=1e-6)


def test_guard_void_simulation(default_params):
    est = simulate_guard_void(default_params, window(7), 30_000)
    assert est == pytest.approx(guard_zone_void_prob(default_params),
                                abs=0.011)


def test_transmit_prob_exposes_the_dependence(default_params):
    est = simulate_transmit_prob(default_params, window(7), 20_000)
    assert 0.0 < est.joint < 1.0
    assert est.product == pytest.approx(est.pi_eps * est.pi_rho, rel=1e-12)
    assert est.gap == pytest.approx(est.joint - est.product, rel=1e-12)
    assert est.pi_rho == pytest.approx(
        guard_zone_void_prob(default_params), abs=0.015)
    assert est.pi_eps == pytest.approx(CCDF_AT_EPSILON, abs=0.015)
    # energy-rich geometries are exactly those crowded with primaries, so
    # the joint probability sits well below the independence product
    assert est.gap < -0.03


def test_coverage_simulation_tracks_analytics(default_params):
    w = window(19)
    refs = {"primary": PRIMARY_COVERAGE, "secondary": SECONDARY_COVERAGE}
    for link, ref in refs.items():
        est = simulate_coverage(default_params, 0.1, link, w, n_samples=4000)
        assert 0.0 < est.stderr < 0.01
        assert est.mean == pytest.approx(ref, abs=5.0 * est.stderr + 1e-4)


def test_coverage_table_shares_geometry_with_single_runs(default_params):
    w = window(19)
    single = simulate_coverage(default_params, 0.1, "primary", w,
                               n_samples=3000)
    table = simulate_coverage_table(
        default_params, [(0.1, "primary"), (1.0, "secondary")], w,
        n_samples=3000)
    assert table[(0.1, "primary")].mean == single.mean
    assert table[(1.0, "secondary")].mean < single.mean


def test_meta_samples_match_first_moment(default_params, default_link):
    samples = simulate_meta(default_params, 0.1, "primary", window(23), 2000)
    assert samples.shape == (2000,)
    assert np.all((samples >= 0.0) & (samples <= 1.0))
    mom = conditional_moments(default_link, 0.1, "primary")
    assert float(samples.mean()) == pytest.approx(mom.m1, abs=0.01)
    again = simulate_meta(default_params, 0.1, "primary", window(23), 2000)
    np.testing.assert_array_equal(samples, again)


def test_rician_desired_link_beats_rayleigh_at_low_threshold(default_params):
    est = simulate_coverage(default_params, 0.1, "primary", window(29),
                            n_samples=1500, fading=FadingSpec("rician", 5.0))
    assert est.mean > 0.92
    both = simulate_coverage(default_params, 0.1, "primary", window(29),
                             n_samples=800, fading=FadingSpec("rician", 5.0),
                             rician_interferers=True)
    assert 0.9 < both.mean <= 1.0


def test_coupled_activation_smoke(default_params):
    # activates each secondary from its own harvested energy and guard test;
    # the average-power approximation sits in the same band
    est = simulate_coverage(default_params, 0.1, "secondary", window(41),
                            n_samples=64, coupled=True)
    assert 0.5 < est.mean < 0.85
    assert est.stderr < 0.05
