"""Distribution of the conditional coverage probability over geometries.

Conditioned on the point-process realization, the Rayleigh coverage
probability q of the typical link is itself random. Its first moment is
the ordinary coverage probability; its second moment factors the same way
with squared per-interferer terms. A Beta law matched to those two moments
approximates the full distribution, whose complementary CDF F(x) is the
fraction of links achieving reliability at least x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coverage import PRIMARY, SECONDARY, LinkAnalysis, _check_network
from .model import chi
from .numerics import integrate_adaptive, integrate_semi_infinite, regularized_incomplete_beta

__all__ = [
    "BetaMoments",
    "MomentViolation",
    "DegenerateDistribution",
    "laplace_second_moment",
    "conditional_moments",
    "beta_match",
    "meta_distribution",
]

_MOMENT_SLACK = 1e-9


class MomentViolation(RuntimeError):
    """Numerically computed moments violate m1^2 <= m2 <= m1."""


class DegenerateDistribution(RuntimeError):
    """Moment pair has (numerically) zero variance or boundary mass."""


@dataclass(frozen=True)
class BetaMoments:
    """First two conditional-coverage moments, plus matched Beta shapes."""

    m1: float
    m2: float
    gamma: float | None = None
    delta: float | None = None

    def __post_init__(self):
        if not 0.0 < self.m1 <= 1.0:
            raise ValueError("m1 must lie in (0, 1]")
        if self.m2 > self.m1 + _MOMENT_SLACK or self.m2 < self.m1**2 - _MOMENT_SLACK:
            raise MomentViolation(
                f"moments m1={self.m1}, m2={self.m2} violate m1^2 <= m2 <= m1"
            )
        if (self.gamma is not None and self.gamma <= 0.0) or (
            self.delta is not None and self.delta <= 0.0
        ):
            raise ValueError("matched shapes must be positive")


def _second_inner(b, alpha, spec):
    """integral of (1 - (1 + b (1+u^alpha)^(-1))^(-2)) u du over [0, inf).

    Equals b (2w + b) / (w + b)^2 * u with w = 1 + u^alpha; same shared-tree
    vectorization as the first-moment inner integral.
    """
    flat = np.asarray(b, dtype=float).reshape(-1)
    c = np.maximum(1.0, flat) ** (1.0 / alpha)

    def g(v):
        u = c[:, None] * v[None, :]
        w = 1.0 + u**alpha
        bb = flat[:, None]
        return bb * (2.0 * w + bb) / (w + bb) ** 2 * u * c[:, None]

    val, _ = integrate_semi_infinite(g, 0.0, spec)
    return val.reshape(np.shape(b))


def laplace_second_moment(link: LinkAnalysis, s, network):
    """Second moment of the per-geometry interference Laplace factor.

    exp(-4 pi lambda * integral over t in [0, T_I], u in [0, inf) of
    (1 - (1 + s P_n chi(t) (1+u^alpha)^(-1))^(-2)) u du dt); the halved
    time range with doubled prefactor uses the symmetry of chi.
    """
    lam, power = link._network(network)
    if not s >= 0:
        raise ValueError("s must be non-negative")
    if lam == 0.0 or power == 0.0 or s == 0.0:
        return 1.0
    p = link.params

    def outer(t):
        b = power * s * chi(t, p.t_i)
        return _second_inner(b[None, :], p.alpha, link.quad)[0]

    val, _ = integrate_adaptive(outer, 0.0, p.t_i, link.quad)
    return math.exp(-4.0 * math.pi * lam * val)


def conditional_moments(link: LinkAnalysis, zeta, link_kind) -> BetaMoments:
    """First and second moments of the conditional coverage probability."""
    if not zeta > 0:
        raise ValueError("zeta must be positive")
    _check_network(link_kind)
    s = link._sinr_scale(zeta, link_kind)
    m1 = link.coverage_prob(zeta, link_kind)
    m2 = (
        laplace_second_moment(link, s, PRIMARY)
        * laplace_second_moment(link, s, SECONDARY)
        * math.exp(-2.0 * link.params.sigma2 * s)
    )
    if m2 > m1 + _MOMENT_SLACK or m2 < m1 * m1 - _MOMENT_SLACK:
        raise MomentViolation(
            f"computed moments m1={m1}, m2={m2} are inconsistent; "
            "quadrature likely failed"
        )
    return BetaMoments(m1=m1, m2=min(m1, max(m2, m1 * m1)))


def beta_match(m1, m2):
    """Shape parameters (gamma, delta) of the Beta law with these moments.

    gamma = m1 (m1 - m2) / (m2 - m1^2), delta = (1 - m1) (m1 - m2) /
    (m2 - m1^2); the matched mean and second moment reproduce (m1, m2)
    exactly by construction.
    """
    if not 0.0 < m1 < 1.0:
        raise ValueError("m1 must lie in (0, 1)")
    variance = m2 - m1 * m1
    if variance <= _MOMENT_SLACK * 1e-3:
        raise DegenerateDistribution(f"zero variance: m1={m1}, m2={m2}")
    if m2 >= m1 - _MOMENT_SLACK * 1e-3:
        raise DegenerateDistribution(f"boundary mass: m1={m1}, m2={m2}")
    spread = (m1 - m2) / variance
    return m1 * spread, (1.0 - m1) * spread


def meta_distribution(link: LinkAnalysis, x, zeta, link_kind):
    """F(x) = P(conditional coverage > x), via the matched Beta law.

    Vectorized over x in [0, 1]. Degenerate moment pairs (no point-process
    randomness, e.g. both densities zero) fall back to the step function
    1{x < m1}.
    """
    moments = conditional_moments(link, zeta, link_kind)
    x_arr = np.asarray(x, dtype=float)
    if np.any((x_arr < 0) | (x_arr > 1)):
        raise ValueError("x must lie in [0, 1]")
    try:
        gamma, delta = beta_match(moments.m1, moments.m2)
    except DegenerateDistribution:
        out = np.where(x_arr < moments.m1, 1.0, 0.0)
        return out if out.ndim else float(out)
    out = 1.0 - regularized_incomplete_beta(x_arr, gamma, delta)
    return out if np.ndim(out) else float(out)
