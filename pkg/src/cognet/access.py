"""Channel-access probabilities of the secondary network.

A secondary transmitter goes on air only if it harvested enough energy and
its guard zone holds no active primary receiver at the decision instant.
Active primaries at that instant form a plain PPP of density lambda1*T_I
(those whose slot straddles the instant), so the void probability is the
usual exponential; the two criteria are multiplied as if independent,
which is the approximation the analysis side commits to (the simulator can
measure the joint probability, see montecarlo.simulate_transmit_prob).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .energy import EnergyLaw
from .model import SystemParams
from .numerics import QuadratureSpec

__all__ = [
    "AccessResult",
    "guard_zone_void_prob",
    "transmit_prob",
    "active_secondary_density",
    "evaluate_access",
]


@dataclass(frozen=True)
class AccessResult:
    """Access probabilities and the resulting active-secondary density."""

    pi_rho: float
    pi_eps: float
    pi_s: float
    lambda2_active: float

    def __post_init__(self):
        for name in ("pi_rho", "pi_eps", "pi_s"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} out of [0, 1]: {v}")
        if self.lambda2_active < 0.0:
            raise ValueError("lambda2_active must be non-negative")
        if abs(self.pi_s - self.pi_eps * self.pi_rho) > 1e-12:
            raise ValueError("pi_s must equal pi_eps * pi_rho")


def guard_zone_void_prob(params: SystemParams) -> float:
    """P(no active primary receiver within rho) = exp(-lambda1 T_I pi rho^2)."""
    return math.exp(-params.lambda1 * params.t_i * math.pi * params.rho**2)


def transmit_prob(params: SystemParams, quad: QuadratureSpec | None = None,
                  pi_eps: float | None = None) -> float:
    """Probability a secondary transmitter initiates a transmission.

    Product of the energy-threshold tail pi(epsilon) and the guard-zone
    void probability. pi_eps may be passed in when already computed (the
    inversion is the expensive part).
    """
    if pi_eps is None:
        pi_eps = EnergyLaw(params, quad or QuadratureSpec()).energy_ccdf(
            params.epsilon
        )
    return pi_eps * guard_zone_void_prob(params)


def active_secondary_density(params: SystemParams,
                             quad: QuadratureSpec | None = None,
                             pi_eps: float | None = None) -> float:
    """Density of secondaries that actually transmit: lambda2 * pi_s."""
    return params.lambda2 * transmit_prob(params, quad, pi_eps)


def evaluate_access(params: SystemParams,
                    quad: QuadratureSpec | None = None) -> AccessResult:
    """Compute all access quantities with a single energy inversion."""
    pi_eps = EnergyLaw(params, quad or QuadratureSpec()).energy_ccdf(
        params.epsilon
    )
    pi_rho = guard_zone_void_prob(params)
    pi_s = pi_eps * pi_rho
    return AccessResult(
        pi_rho=pi_rho,
        pi_eps=pi_eps,
        pi_s=pi_s,
        lambda2_active=params.lambda2 * pi_s,
    )
