"""Quadrature, characteristic-function inversion, and the beta function.

The closed-form oracles below are exact integrals of the kernels this
package feeds its quadrature: with g(u) = (1 + u^alpha)^(-1) and
K_alpha = integral_0^inf u (1 + u^alpha)^(-1) du (= 2 pi / (3 sqrt 3) for
alpha = 3, pi / 4 for alpha = 4),

    integral_0^inf [1 - 1/(1 + b g(u))] u du      = K b (1+b)^(2/alpha - 1)
    integral_0^inf [1 - 1/(1 - i b g(u))] u du    = -i b K (1-ib)^(2/alpha - 1)
    integral_0^inf [1 - (1 + b g(u))^(-2)] u du   = K b (1+b)^(2/alpha - 2)
                                                      * (2 + b (alpha+2)/alpha)

each via the substitution u -> c^(1/alpha) w with c = 1 + b (or 1 - ib).
"""

import math

import numpy as np
import pytest
from scipy import stats

from cognet.numerics import (
    NonConvergence,
    QuadratureSpec,
    gil_pelaez_ccdf,
    integrate_adaptive,
    integrate_semi_infinite,
    regularized_incomplete_beta,
)

K_ALPHA = {3.0: 2.0 * math.pi / (3.0 * math.sqrt(3.0)), 4.0: math.pi / 4.0}


def test_adaptive_matches_polynomial():
    value, err = integrate_adaptive(lambda x: x * x, 0.0, 1.0)
    assert value == pytest.approx(1.0 / 3.0, abs=1e-14)
    assert err < 1e-8


def test_adaptive_complex_integrand():
    value, _ = integrate_adaptive(lambda x: np.exp(1j * x), 0.0, math.pi)
    assert value == pytest.approx(2.0j, abs=1e-12)


def test_adaptive_oscillatory():
    value, _ = integrate_adaptive(lambda x: np.cos(40.0 * x), 0.0, 2.0 * math.pi)
    assert value == pytest.approx(0.0, abs=1e-10)


def test_adaptive_vector_integrand_shares_subdivision():
    def f(x):
        return np.stack([x * x, np.cos(x)])

    value, err = integrate_adaptive(f, 0.0, 1.0)
    assert value.shape == (2,)
    np.testing.assert_allclose(value, [1.0 / 3.0, math.sin(1.0)], atol=1e-12)
    assert err.shape == (2,)
    assert np.all(err < 1e-8)


def test_adaptive_reports_non_convergence_with_estimate():
    spec = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-14, max_subdivisions=4)
    with pytest.raises(NonConvergence) as info:
        integrate_adaptive(lambda x: np.abs(x) ** -0.9, 1e-12, 1.0, spec)
    assert info.value.estimate is not None
    assert info.value.error is not None


def test_semi_infinite_exponential_tail():
    for a in (0.0, 0.5, 2.0):
        value, _ = integrate_semi_infinite(lambda u: np.exp(-u), a)
        assert value == pytest.approx(math.exp(-a), rel=1e-9)


@pytest.mark.parametrize("alpha", [3.0, 4.0])
@pytest.mark.parametrize("b", [0.1, 1.0, 10.0])
def test_semi_infinite_interference_kernel(alpha, b):
    k = K_ALPHA[alpha]

    def f(u):
        g = 1.0 / (1.0 + u**alpha)
        return (1.0 - 1.0 / (1.0 + b * g)) * u

    value, _ = integrate_semi_infinite(f, 0.0)
    assert value == pytest.approx(
        k * b * (1.0 + b) ** (2.0 / alpha - 1.0), rel=1e-8)


@pytest.mark.parametrize("alpha", [3.0, 4.0])
@pytest.mark.parametrize("b", [0.25, 1.0, 4.0])
def test_semi_infinite_characteristic_kernel(alpha, b):
    k = K_ALPHA[alpha]

    def f(u):
        g = 1.0 / (1.0 + u**alpha)
        return (1.0 - 1.0 / (1.0 - 1j * b * g)) * u

    value, _ = integrate_semi_infinite(f, 0.0)
    expected = -1j * b * k * (1.0 - 1j * b) ** (2.0 / alpha - 1.0)
    assert value == pytest.approx(expected, abs=1e-8)


@pytest.mark.parametrize("alpha", [3.0, 4.0])
@pytest.mark.parametrize("b", [0.25, 1.0, 4.0])
def test_semi_infinite_second_moment_kernel(alpha, b):
    k = K_ALPHA[alpha]

    def f(u):
        g = 1.0 / (1.0 + u**alpha)
        return (1.0 - (1.0 + b * g) ** -2.0) * u

    value, _ = integrate_semi_infinite(f, 0.0)
    expected = (k * b * (1.0 + b) ** (2.0 / alpha - 2.0)
                * (2.0 + b * (alpha + 2.0) / alpha))
    assert value == pytest.approx(expected, rel=1e-8)


@pytest.mark.parametrize("t", [0.01, 0.1, 0.5, 1.0, 3.0])
def test_gil_pelaez_recovers_exponential_ccdf(t):
    ccdf = gil_pelaez_ccdf(lambda w: 1.0 / (1.0 - 1j * w), t)
    assert ccdf == pytest.approx(math.exp(-t), abs=1e-7)


@pytest.mark.parametrize("t,expected", [(-1.0, stats.norm.sf(-1.0)),
                                        (0.0, 0.5),
                                        (1.0, stats.norm.sf(1.0))])
def test_gil_pelaez_recovers_normal_ccdf(t, expected):
    ccdf = gil_pelaez_ccdf(lambda w: np.exp(-0.5 * w * w), t)
    assert ccdf == pytest.approx(expected, abs=1e-7)


def test_gil_pelaez_point_mass():
    charfn = lambda w: np.exp(0.3j * w)  # noqa: E731 - unit mass at 0.3
    assert gil_pelaez_ccdf(charfn, 0.2) == pytest.approx(1.0, abs=1e-6)
    assert gil_pelaez_ccdf(charfn, 0.4) == pytest.approx(0.0, abs=1e-6)


def test_incomplete_beta_binomial_identity():
    # I_x(2, 5) = P(Binomial(6, x) >= 2) = 1 - (1-x)^6 - 6 x (1-x)^5
    x = 0.3
    expected = 1.0 - 0.7**6 - 6.0 * 0.3 * 0.7**5
    assert expected == pytest.approx(0.579825, abs=1e-12)
    assert regularized_incomplete_beta(x, 2.0, 5.0) == pytest.approx(
        expected, abs=1e-12)


def test_incomplete_beta_edges_symmetry_and_domain():
    assert regularized_incomplete_beta(0.0, 1.7, 2.9) == 0.0
    assert regularized_incomplete_beta(1.0, 1.7, 2.9) == 1.0
    x = np.linspace(0.0, 1.0, 21)
    lhs = regularized_incomplete_beta(x, 1.7, 2.9)
    rhs = 1.0 - regularized_incomplete_beta(1.0 - x, 2.9, 1.7)
    np.testing.assert_allclose(lhs, rhs, atol=1e-14)
    assert np.all(np.diff(lhs) > 0.0)
    with pytest.raises(ValueError):
        regularized_incomplete_beta(-0.1, 2.0, 5.0)
    with pytest.raises(ValueError):
        regularized_incomplete_beta(0.5, 0.0, 5.0)
