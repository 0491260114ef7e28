"""Shared model parameters and the two time-overlap kernels.

Every analytical integral and every simulation in this package is built on
three ingredients defined here: the parameter set of the two networks, the
triangular overlap chi(t) between two information slots of length T_I, and
the overlap psi(t) between an information slot and a harvesting window of
length T_E. Units are SI throughout (watts, meters, seconds, joules); dBm
values must be converted by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Reference defaults used by the experiment presets: d = 1 m,
# sigma2 = -50 dBm, alpha = 3, lambda1 = 0.1, lambda2 = 1, P1 = 1 W,
# epsilon = 0.1 J, E_sat = 0.5 J, T_I = T_E = 0.5 s, zeta = -10 dB.
DEFAULTS = {
    "lambda1": 0.1,
    "lambda2": 1.0,
    "p1": 1.0,
    "t_i": 0.5,
    "t_e": 0.5,
    "d": 1.0,
    "alpha": 3.0,
    "sigma2": 1e-8,
    "epsilon": 0.1,
    "e_sat": 0.5,
    "rho": 2.0,
    "zeta": 0.1,
}


@dataclass(frozen=True)
class SystemParams:
    """Physical and model constants for the coexisting networks.

    Attributes:
        lambda1: primary transmitter density, per m^2 per s.
        lambda2: secondary transmitter density, per m^2 per s.
        p1: primary transmit power, W.
        t_i: information transmission duration, s.
        t_e: energy harvesting duration, s.
        d: transmitter-receiver pair separation, m.
        alpha: path-loss exponent (> 2).
        sigma2: AWGN power, W.
        epsilon: energy activation threshold, J.
        e_sat: harvester saturation level, J.
        rho: guard-zone radius, m.
        zeta: SINR decoding threshold (linear).
        rate: spectral efficiency in bpcu; None means log2(1 + zeta),
            evaluated at the zeta actually used in a throughput call.
    """

    lambda1: float = DEFAULTS["lambda1"]
    lambda2: float = DEFAULTS["lambda2"]
    p1: float = DEFAULTS["p1"]
    t_i: float = DEFAULTS["t_i"]
    t_e: float = DEFAULTS["t_e"]
    d: float = DEFAULTS["d"]
    alpha: float = DEFAULTS["alpha"]
    sigma2: float = DEFAULTS["sigma2"]
    epsilon: float = DEFAULTS["epsilon"]
    e_sat: float = DEFAULTS["e_sat"]
    rho: float = DEFAULTS["rho"]
    zeta: float = DEFAULTS["zeta"]
    rate: float | None = None

    def __post_init__(self):
        if not self.alpha > 2:
            raise ValueError(f"alpha must exceed 2, got {self.alpha}")
        # densities and powers may be zero (empty or silent network) but not
        # negative; durations and pair distance must be strictly positive
        for name in ("lambda1", "lambda2", "p1"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        for name in ("t_i", "t_e", "d"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("sigma2", "rho"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if not 0 < self.epsilon < self.e_sat:
            raise ValueError(
                f"need 0 < epsilon < e_sat, got epsilon={self.epsilon}, "
                f"e_sat={self.e_sat}"
            )
        if not self.zeta > 0:
            raise ValueError("zeta must be positive")
        if self.rate is not None and not self.rate > 0:
            raise ValueError("rate must be positive when given")

    def spectral_efficiency(self, zeta: float) -> float:
        """Rate in bpcu for threshold zeta: fixed value or log2(1 + zeta)."""
        if self.rate is not None:
            return self.rate
        return math.log2(1.0 + zeta)

    def replace(self, **changes) -> "SystemParams":
        from dataclasses import replace

        return replace(self, **changes)


def path_gain(l, alpha):
    """Bounded path loss (1 + l^alpha)^(-1); equals 1 at l = 0."""
    l = np.asarray(l, dtype=float)
    if np.any(l < 0):
        raise ValueError("distance must be non-negative")
    if not alpha > 2:
        raise ValueError("alpha must exceed 2")
    out = 1.0 / (1.0 + l**alpha)
    return out if out.ndim else float(out)


def chi(t, t_i):
    """Fractional slot overlap between two transmissions offset by t.

    Triangular on [-T_I, T_I]: a transmitter activating at epoch t overlaps
    the typical slot [0, T_I] over a fraction (T_I - |t|)/T_I of it.
    """
    t = np.asarray(t, dtype=float)
    out = np.maximum(0.0, (t_i - np.abs(t)) / t_i)
    return out if out.ndim else float(out)


def psi(t, t_e, t_i):
    """Duration overlap between slot [t, t + T_I] and harvest window [0, T_E].

    Piecewise linear and continuous, zero outside (-T_I, T_E), with peak
    min(T_E, T_I). The single expression below reproduces every branch of
    the trapezoid/tent for any ordering of T_E and T_I.
    """
    t = np.asarray(t, dtype=float)
    out = np.maximum(0.0, np.minimum(t + t_i, t_e) - np.maximum(t, 0.0))
    return out if out.ndim else float(out)


def psi_breakpoints(t_e, t_i):
    """Kink locations of psi, in increasing order (middle pair may coincide)."""
    return (-t_i, min(0.0, t_e - t_i), max(0.0, t_e - t_i), t_e)
