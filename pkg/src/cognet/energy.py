"""Distribution of the energy harvested from the primary network.

A secondary transmitter listening for T_E seconds collects energy
P1 * sum_x h_x (1 + r_x^alpha)^(-1) psi(t_x) over the primary transmitters,
where psi weights each by its slot overlap with the harvesting window.
This module carries the characteristic function of that shot-noise sum,
its tail probability via Gil-Pelaez inversion, its closed-form mean, and
the resulting average transmit power of a secondary node under the
threshold/saturation power tiers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import SystemParams, psi, psi_breakpoints
from .numerics import (
    QuadratureSpec,
    gil_pelaez_ccdf,
    integrate_adaptive,
    integrate_semi_infinite,
)

__all__ = ["EnergyLaw"]


def _harvest_inner(b, alpha, spec):
    """inner integral i*b*u / (1 + u^alpha - i*b) du over u in [0, inf).

    b is a real array of frequency-overlap products z*P1*psi(t); all entries
    share one subdivision tree. Each column is rescaled by its transition
    radius max(1, |b|)^(1/alpha) so heterogeneous magnitudes subdivide
    together.
    """
    flat = np.asarray(b, dtype=float).reshape(-1)
    c = np.maximum(1.0, np.abs(flat)) ** (1.0 / alpha)
    ib = 1j * flat

    def g(w):
        u = c[:, None] * w[None, :]
        return (ib[:, None] * u * c[:, None]) / (1.0 + u**alpha - ib[:, None])

    val, _ = integrate_semi_infinite(g, 0.0, spec)
    return val.reshape(np.shape(b))


@dataclass(frozen=True)
class EnergyLaw:
    """Harvested-energy distribution machinery for a parameter set."""

    params: SystemParams
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)

    def char_fn(self, z):
        """Characteristic function E[exp(i z E_H)], vectorized over z.

        exp(2 pi lambda1 * double integral of i z P1 psi(t) u /
        (1 + u^alpha - i z P1 psi(t))), the outer t-integral split at the
        kinks of psi so each panel is smooth.
        """
        p = self.params
        z_arr = np.atleast_1d(np.asarray(z, dtype=float))
        if p.lambda1 == 0.0 or p.p1 == 0.0:
            out = np.ones(z_arr.shape, dtype=complex)
            return out if np.ndim(z) else complex(out[0])
        total = np.zeros(z_arr.shape, dtype=complex)
        pts = psi_breakpoints(p.t_e, p.t_i)
        for lo, hi in zip(pts[:-1], pts[1:]):
            if hi <= lo:
                continue

            def outer(t):
                b = z_arr[:, None] * (p.p1 * psi(t, p.t_e, p.t_i))[None, :]
                return _harvest_inner(b, p.alpha, self.quad)

            val, _ = integrate_adaptive(outer, lo, hi, self.quad)
            total += val
        out = np.exp(2.0 * math.pi * p.lambda1 * total)
        return out if np.ndim(z) else complex(out[0])

    def energy_ccdf(self, threshold):
        """P(E_H > threshold) by Gil-Pelaez inversion of char_fn."""
        if not threshold > 0:
            raise ValueError("threshold must be positive")
        p = self.params
        if p.lambda1 == 0.0 or p.p1 == 0.0:
            return 0.0
        return gil_pelaez_ccdf(self.char_fn, threshold, self.quad)

    def mean_harvested_energy(self):
        """E[E_H] = 2 pi^2 lambda1 T_E T_I (P1/alpha) csc(2 pi/alpha)."""
        p = self.params
        return (
            2.0 * math.pi**2 * p.lambda1 * p.t_e * p.t_i
            * p.p1 / (p.alpha * math.sin(2.0 * math.pi / p.alpha))
        )

    def avg_secondary_power(self):
        """Average transmit power of a secondary node, in watts.

        The node is silent below the activation threshold, transmits with
        the mean-energy power E[E_H]/T_I between threshold and saturation,
        and with the saturation power E_sat/T_I above it:
        P2 = (E[E_H]/T_I) (pi(eps) - pi(E_sat)) + (E_sat/T_I) pi(E_sat).
        """
        p = self.params
        if p.lambda1 == 0.0 or p.p1 == 0.0:
            return 0.0
        pi_eps = self.energy_ccdf(p.epsilon)
        pi_sat = self.energy_ccdf(p.e_sat)
        mid = max(0.0, pi_eps - pi_sat)  # CCDF monotone up to quadrature noise
        return (self.mean_harvested_energy() / p.t_i) * mid + (
            p.e_sat / p.t_i
        ) * pi_sat
