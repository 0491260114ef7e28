"""SINR coverage and spatial throughput for both networks.

Interference at a typical receiver is time-averaged over its slot: an
interferer activating at epoch t contributes through the triangular overlap
chi(t). Under Rayleigh fading the coverage probability factors into the two
networks' interference Laplace transforms times the noise term, evaluated
at s = zeta (1 + d^alpha) / P_link. The Laplace transform is implemented
twice on purpose: a closed form and a direct double quadrature of the
generating-functional integral, each serving as the other's oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import SystemParams, chi
from .numerics import QuadratureSpec, integrate_adaptive, integrate_semi_infinite

__all__ = ["LinkAnalysis", "SecondaryUnpowered"]

PRIMARY = "primary"
SECONDARY = "secondary"


class SecondaryUnpowered(RuntimeError):
    """Secondary link requested while the average secondary power is zero."""


def _check_network(network):
    if network not in (PRIMARY, SECONDARY):
        raise ValueError(f"network must be '{PRIMARY}' or '{SECONDARY}'")


def _interference_inner(b, alpha, spec):
    """integral of (1 - 1/(1 + b (1+u^alpha)^(-1))) u du over [0, inf).

    The integrand equals b*u / (1 + u^alpha + b); columns of b share one
    subdivision tree with per-column rescaling as in the energy module.
    """
    flat = np.asarray(b, dtype=float).reshape(-1)
    c = np.maximum(1.0, flat) ** (1.0 / alpha)

    def g(w):
        u = c[:, None] * w[None, :]
        return (flat[:, None] * u * c[:, None]) / (1.0 + u**alpha + flat[:, None])

    val, _ = integrate_semi_infinite(g, 0.0, spec)
    return val.reshape(np.shape(b))


@dataclass(frozen=True)
class LinkAnalysis:
    """Coverage/throughput calculator for a fixed parameter set.

    p2 and lambda2_active summarize the secondary network's state; they are
    produced by the energy and access modules (see derive()) but can be set
    directly, which keeps tests and sweeps cheap.
    """

    params: SystemParams
    p2: float
    lambda2_active: float
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self):
        if self.p2 < 0.0:
            raise ValueError("p2 must be non-negative")
        if not 0.0 <= self.lambda2_active <= self.params.lambda2:
            raise ValueError("lambda2_active must lie in [0, lambda2]")

    @classmethod
    def derive(cls, params: SystemParams,
               quad: QuadratureSpec | None = None) -> "LinkAnalysis":
        """Build from params alone, deriving p2 and the active density."""
        from .access import evaluate_access
        from .energy import EnergyLaw

        quad = quad or QuadratureSpec()
        law = EnergyLaw(params, quad)
        access = evaluate_access(params, quad)
        return cls(
            params=params,
            p2=law.avg_secondary_power(),
            lambda2_active=access.lambda2_active,
            quad=quad,
        )

    def _network(self, network):
        _check_network(network)
        if network == PRIMARY:
            return self.params.lambda1, self.params.p1
        return self.lambda2_active, self.p2

    def laplace_closed(self, s, network):
        """Closed-form Laplace transform of the time-averaged interference.

        exp(-2 lambda pi^2 T_I csc(2 pi/alpha) *
            [(1+b)^(2/alpha) (2b - alpha) + alpha] / (b (2 + alpha))),
        b = P_n s. The bracket is evaluated by series for small b where the
        direct expression cancels catastrophically.
        """
        lam, power = self._network(network)
        if not s >= 0:
            raise ValueError("s must be non-negative")
        if lam == 0.0 or power == 0.0 or s == 0.0:
            return 1.0
        al = self.params.alpha
        b = power * s
        if b < 1e-4:
            bracket = b / al + 2.0 * (2.0 - al) / (3.0 * al * al) * b * b
        else:
            bracket = ((1.0 + b) ** (2.0 / al) * (2.0 * b - al) + al) / (
                b * (2.0 + al)
            )
        exponent = (
            -2.0 * lam * math.pi**2 * self.params.t_i
            / math.sin(2.0 * math.pi / al) * bracket
        )
        return math.exp(exponent)

    def laplace_numeric(self, s, network):
        """Same transform by direct double quadrature (the oracle route).

        exp(-2 pi lambda * integral over t in [-T_I, T_I], u in [0, inf) of
        (1 - 1/(1 + s P_n chi(t) (1+u^alpha)^(-1))) u du dt).
        """
        lam, power = self._network(network)
        if not s >= 0:
            raise ValueError("s must be non-negative")
        if lam == 0.0 or power == 0.0 or s == 0.0:
            return 1.0
        p = self.params

        def outer(t):
            b = power * s * chi(t, p.t_i)
            return _interference_inner(b[None, :], p.alpha, self.quad)[0]

        total = 0.0
        for lo, hi in ((-p.t_i, 0.0), (0.0, p.t_i)):
            val, _ = integrate_adaptive(outer, lo, hi, self.quad)
            total += val
        return math.exp(-2.0 * math.pi * lam * total)

    def _sinr_scale(self, zeta, link):
        _check_network(link)
        p = self.params
        power = p.p1 if link == PRIMARY else self.p2
        if link == SECONDARY and power == 0.0:
            raise SecondaryUnpowered(
                "secondary link has zero average transmit power"
            )
        return zeta * (1.0 + p.d**p.alpha) / power

    def coverage_prob(self, zeta, link):
        """P(SINR >= zeta) at the typical receiver of the given link.

        Product of both networks' Laplace transforms and the noise factor
        exp(-sigma2 s), s = zeta (1 + d^alpha) / P_link.
        """
        if not zeta > 0:
            raise ValueError("zeta must be positive")
        s = self._sinr_scale(zeta, link)
        return (
            self.laplace_closed(s, PRIMARY)
            * self.laplace_closed(s, SECONDARY)
            * math.exp(-self.params.sigma2 * s)
        )

    def spatial_throughput(self, zeta, network):
        """Successfully carried traffic density, bpcu per m^2 per s.

        T_I * R * lambda1 * p1c for the primary network and
        T_I * R * lambda2_active * p2c for the secondary one.
        """
        _check_network(network)
        p = self.params
        if network == PRIMARY:
            density = p.lambda1
        else:
            density = self.lambda2_active
            if density > 0.0 and self.p2 == 0.0:
                raise SecondaryUnpowered(
                    "secondary link has zero average transmit power"
                )
            if density == 0.0:
                return 0.0
        if density == 0.0:
            return 0.0
        rate = p.spectral_efficiency(zeta)
        return p.t_i * rate * density * self.coverage_prob(zeta, network)
