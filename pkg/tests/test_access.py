"""Secondary access: guard-zone void, transmit probability, active density."""

import math

import pytest

from cognet import (
    AccessResult,
    QuadratureSpec,
    SystemParams,
    active_secondary_density,
    evaluate_access,
    guard_zone_void_prob,
    transmit_prob,
)

# frozen at the documented operating point
VOID_PROB = 0.5334880910911033  # exp(-0.2 pi)
ACTIVE_DENSITY = 0.31632037158920256
CCDF_AT_EPSILON = 0.592928646152637


@pytest.mark.parametrize("rho,t_i", [(0.5, 0.3), (1.0, 0.5), (2.0, 0.3)])
def test_void_probability_closed_form(rho, t_i):
    p = SystemParams(rho=rho, t_i=t_i)
    expected = math.exp(-p.lambda1 * t_i * math.pi * rho * rho)
    assert guard_zone_void_prob(p) == pytest.approx(expected, rel=1e-15)


def test_void_probability_at_defaults(default_params):
    assert guard_zone_void_prob(default_params) == pytest.approx(
        VOID_PROB, rel=1e-15)
    assert VOID_PROB == pytest.approx(math.exp(-0.2 * math.pi), rel=1e-15)


def test_zero_guard_radius_never_blocks():
    assert guard_zone_void_prob(SystemParams(rho=0.0)) == 1.0


def test_transmit_prob_is_the_product(default_params):
    # a precomputed energy tail skips the inversion and enters the product
    assert transmit_prob(default_params, pi_eps=0.5) == pytest.approx(
        0.5 * VOID_PROB, rel=1e-15)
    full = transmit_prob(default_params, QuadratureSpec())
    assert full == pytest.approx(CCDF_AT_EPSILON * VOID_PROB, abs=1e-9)


def test_evaluate_access_is_consistent(default_params):
    res = evaluate_access(default_params)
    assert isinstance(res, AccessResult)
    assert res.pi_rho == pytest.approx(VOID_PROB, rel=1e-15)
    assert res.pi_eps == pytest.approx(CCDF_AT_EPSILON, abs=1e-9)
    assert res.pi_s == pytest.approx(res.pi_eps * res.pi_rho, abs=1e-12)
    assert res.lambda2_active == pytest.approx(ACTIVE_DENSITY, abs=1e-9)
    assert res.lambda2_active == pytest.approx(
        default_params.lambda2 * res.pi_s, rel=1e-12)


def test_active_density_scales_with_lambda2(default_params):
    lam = active_secondary_density(default_params.replace(lambda2=3.0))
    assert lam == pytest.approx(3.0 * ACTIVE_DENSITY, abs=3e-9)


def test_access_result_validation():
    with pytest.raises(ValueError, match="out of"):
        AccessResult(pi_rho=1.2, pi_eps=0.5, pi_s=0.6, lambda2_active=0.6)
    with pytest.raises(ValueError, match="pi_s must equal"):
        AccessResult(pi_rho=0.5, pi_eps=0.5, pi_s=0.3, lambda2_active=0.3)
    with pytest.raises(ValueError, match="non-negative"):
        AccessResult(pi_rho=0.5, pi_eps=0.5, pi_s=0.25, lambda2_active=-1.0)
