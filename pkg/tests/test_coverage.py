"""Coverage probability and spatial throughput of both links."""

import math

import numpy as np
import pytest

from cognet import (
    LinkAnalysis,
    QuadratureSpec,
    SecondaryUnpowered,
    SystemParams,
)

# frozen at the documented operating point (zeta = 0.1, i.e. -10 dB)
PRIMARY_COVERAGE = 0.8726087460309989
SECONDARY_COVERAGE = 0.6186305070755755
AVG_POWER = 0.26675232661651704
ACTIVE_DENSITY = 0.31632037158920256
CCDF_AT_EPSILON = 0.592928646152637  # active density at rho = 0, lambda2 = 1


@pytest.mark.parametrize("network", ["primary", "secondary"])
@pytest.mark.parametrize("s", [0.05, 0.5, 5.0])
def test_laplace_routes_agree(default_link, network, s):
    closed = default_link.laplace_closed(s, network)
    numeric = default_link.laplace_numeric(s, network)
    assert 0.0 < closed <= 1.0
    assert numeric == pytest.approx(closed, abs=1e-6)


def test_laplace_decreasing_in_s(default_link):
    s = np.logspace(-2, 1, 12)
    vals = [default_link.laplace_closed(float(v), "primary") for v in s]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_coverage_frozen_values(default_link):
    assert default_link.p2 == pytest.approx(AVG_POWER, abs=1e-9)
    assert default_link.lambda2_active == pytest.approx(
        ACTIVE_DENSITY, abs=1e-9)
    assert default_link.coverage_prob(0.1, "primary") == pytest.approx(
        PRIMARY_COVERAGE, abs=1e-9)
    assert default_link.coverage_prob(0.1, "secondary") == pytest.approx(
        SECONDARY_COVERAGE, abs=1e-9)


def test_coverage_orderings(default_link):
    zetas = np.logspace(-1.5, 0.5, 9)
    p1 = [default_link.coverage_prob(float(z), "primary") for z in zetas]
    p2 = [default_link.coverage_prob(float(z), "secondary") for z in zetas]
    # monotone in the threshold, and the weaker transmitter is worse off
    assert all(a > b for a, b in zip(p1, p1[1:]))
    assert all(a > b for a, b in zip(p2, p2[1:]))
    assert all(a > b for a, b in zip(p1, p2))


def test_coverage_limit_at_vanishing_threshold(default_link):
    for network in ("primary", "secondary"):
        assert default_link.coverage_prob(1e-12, network) == pytest.approx(
            1.0, abs=1e-9)


def test_coverage_rejects_bad_arguments(default_link):
    with pytest.raises(ValueError, match="zeta must be positive"):
        default_link.coverage_prob(0.0, "primary")
    with pytest.raises(ValueError, match="network must be"):
        default_link.coverage_prob(0.1, "tertiary")


def test_wider_guard_zone_improves_both_links():
    # same secondary power, but rho = 0 leaves every energized secondary
    # active; frozen access values avoid re-deriving the energy law
    open_zone = LinkAnalysis(
        params=SystemParams(rho=0.0), p2=AVG_POWER,
        lambda2_active=CCDF_AT_EPSILON)
    guarded = LinkAnalysis(
        params=SystemParams(), p2=AVG_POWER, lambda2_active=ACTIVE_DENSITY)
    for z in (0.05, 0.1, 1.0):
        for network in ("primary", "secondary"):
            assert (guarded.coverage_prob(z, network)
                    > open_zone.coverage_prob(z, network))


def test_unpowered_secondary_raises():
    dead = LinkAnalysis(params=SystemParams(), p2=0.0, lambda2_active=0.0)
    with pytest.raises(SecondaryUnpowered):
        dead.coverage_prob(0.1, "secondary")
    # no active transmitters means no carried traffic, not an error
    assert dead.spatial_throughput(0.1, "secondary") == 0.0
    assert dead.coverage_prob(0.1, "primary") > PRIMARY_COVERAGE


def test_link_analysis_validation():
    with pytest.raises(ValueError, match="p2 must be non-negative"):
        LinkAnalysis(params=SystemParams(), p2=-0.1, lambda2_active=0.0)
    with pytest.raises(ValueError, match="lambda2_active must lie"):
        LinkAnalysis(params=SystemParams(), p2=0.3, lambda2_active=2.0)


def test_spatial_throughput_identity(default_link, default_params):
    z = 0.1
    rate = math.log2(1.0 + z)
    expected = (default_params.t_i * rate * default_params.lambda1
                * default_link.coverage_prob(z, "primary"))
    assert default_link.spatial_throughput(z, "primary") == pytest.approx(
        expected, rel=1e-12)
    expected = (default_params.t_i * rate * default_link.lambda2_active
                * default_link.coverage_prob(z, "secondary"))
    assert default_link.spatial_throughput(z, "secondary") == pytest.approx(
        expected, rel=1e-12)


def test_spatial_throughput_honours_fixed_rate(default_link):
    fixed = LinkAnalysis(
        params=SystemParams(rate=2.0), p2=AVG_POWER,
        lambda2_active=ACTIVE_DENSITY)
    ratio = (fixed.spatial_throughput(0.1, "primary")
             / default_link.spatial_throughput(0.1, "primary"))
    assert ratio == pytest.approx(2.0 / math.log2(1.1), rel=1e-12)
