"""Monte Carlo oracle over time-space Poisson point processes.

Every analytic quantity in the package has an empirical counterpart here,
estimated from sampled realizations of the two networks. Realizations are
truncated to a finite disk; the discarded far field is restored by adding
its exact ensemble mean (for energy and interference sums) or multiplying
by its exact mean factTor (for the product-form coverage estimator), both
computed with the same quadrature kernel the analysis uses. The truncation
bias of the compensated estimators is the far field's fluctuation around
its mean, which decays like radius^(1 - alpha) and is far below every
tolerance used in the tests; the doubling-insensitivity test makes that
observable rather than assumed.

Randomness is drawn from counter-based streams keyed by (master seed,
operation, batch index), so estimates are bit-reproducible regardless of
evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .model import SystemParams, chi, path_gain, psi
from .numerics import QuadratureSpec, integrate_adaptive, integrate_semi_infinite

__all__ = [
    "TsPoint",
    "TsSample",
    "SimWindow",
    "FadingSpec",
    "CoverageEstimate",
    "TransmitProbEstimate",
    "sample_tsppp",
    "simulate_energy",
    "simulate_coverage",
    "simulate_coverage_table",
    "simulate_meta",
    "simulate_guard_void",
    "simulate_transmit_prob",
]

# operation codes for stream derivation
_OP_TSPPP = 0
_OP_ENERGY = 1
_OP_COVERAGE = 2
_OP_META = 3
_OP_VOID = 4
_OP_TRANSMIT = 5
_OP_COUPLED = 6

_ENERGY_BATCH = 8192
_GEOM_BATCH = 1024
_VOID_BATCH = 8192
_COUPLED_BATCH = 32
_NEIGHBOR_RADIUS = 10.0  # energy neighborhood for per-secondary harvesting


def _stream(master_seed, op, batch):
    seq = np.random.SeedSequence(master_seed, spawn_key=(op, batch))
    return np.random.Generator(np.random.Philox(seq))


@dataclass(frozen=True)
class TsPoint:
    """One transmitter: location, activation epoch, channel power gain."""

    x: float
    y: float
    epoch: float
    fade: float

    def __post_init__(self):
        if self.fade < 0:
            raise ValueError("fade must be non-negative")


@dataclass(frozen=True)
class TsSample:
    """A time-space point process realization as parallel arrays."""

    x: np.ndarray
    y: np.ndarray
    epoch: np.ndarray
    fade: np.ndarray

    def __len__(self):
        return self.x.size

    def __getitem__(self, i) -> TsPoint:
        return TsPoint(
            float(self.x[i]), float(self.y[i]),
            float(self.epoch[i]), float(self.fade[i]),
        )

    @property
    def radius(self):
        return np.hypot(self.x, self.y)


@dataclass(frozen=True)
class SimWindow:
    """Finite observation window and reproducibility contract.

    disk_radius bounds the sampled region; t_min/t_max bound epochs for
    sample_tsppp (the simulate_* operations use the epoch span implied by
    the parameters instead, e.g. [-T_I, T_E] for harvesting). replicates is
    the default sample count for runners that do not specify one.
    """

    disk_radius: float = 50.0
    t_min: float = -0.5
    t_max: float = 0.5
    replicates: int = 100_000
    master_seed: int = 0

    def __post_init__(self):
        if not self.disk_radius > 0:
            raise ValueError("disk_radius must be positive")
        if not self.t_min < self.t_max:
            raise ValueError("need t_min < t_max")
        if self.replicates < 1:
            raise ValueError("replicates must be at least 1")


@dataclass(frozen=True)
class FadingSpec:
    """Fading law of the desired link, always with unit mean power."""

    kind: str = "rayleigh"
    k_factor: float = 0.0

    def __post_init__(self):
        if self.kind not in ("rayleigh", "rician"):
            raise ValueError("kind must be 'rayleigh' or 'rician'")
        if self.k_factor < 0:
            raise ValueError("k_factor must be non-negative")

    def sample(self, rng, n):
        """Draw n unit-mean power gains."""
        if self.kind == "rayleigh":
            return rng.exponential(1.0, n)
        k = self.k_factor
        los = math.sqrt(k / (k + 1.0))
        sd = math.sqrt(0.5 / (k + 1.0))
        re = rng.normal(los, sd, n)
        im = rng.normal(0.0, sd, n)
        return re * re + im * im

    def ccdf(self, tau):
        """P(gain > tau), vectorized."""
        tau = np.asarray(tau, dtype=float)
        if self.kind == "rayleigh":
            return np.exp(-tau)
        k = self.k_factor
        return stats.ncx2.sf(2.0 * (k + 1.0) * tau, 2, 2.0 * k)


@dataclass(frozen=True)
class CoverageEstimate:
    mean: float
    stderr: float


@dataclass(frozen=True)
class TransmitProbEstimate:
    """Joint activity probability vs. the independence approximation."""

    joint: float
    pi_eps: float
    pi_rho: float
    stderr: float

    @property
    def product(self):
        return self.pi_eps * self.pi_rho

    @property
    def gap(self):
        return self.joint - self.product


def sample_tsppp(density, window: SimWindow, rng,
                 fading: FadingSpec = FadingSpec()) -> TsSample:
    """Draw one realization on the window's disk and epoch interval."""
    if density < 0:
        raise ValueError("density must be non-negative")
    span = window.t_max - window.t_min
    mean_count = density * math.pi * window.disk_radius**2 * span
    n = int(rng.poisson(mean_count))
    r = window.disk_radius * np.sqrt(rng.random(n))
    theta = 2.0 * math.pi * rng.random(n)
    return TsSample(
        x=r * np.cos(theta),
        y=r * np.sin(theta),
        epoch=window.t_min + span * rng.random(n),
        fade=fading.sample(rng, n),
    )


def _tail_mean(radius, alpha, spec=None):
    """integral of u (1+u^alpha)^(-1) du over [radius, inf)."""
    val, _ = integrate_semi_infinite(
        lambda u: u / (1.0 + u**alpha), radius, spec or QuadratureSpec()
    )
    return val


def _far_log_laplace(s, power, lam, radius, t_i, alpha, spec=None):
    """Exponent of E[product-form factor] over interferers beyond radius.

    2 pi lambda * integral over t in [-T_I, T_I], u in [radius, inf) of
    (1 - 1/(1 + s P chi(t) (1+u^alpha)^(-1))) u du dt. Multiplying the
    truncated product estimator by exp(-this) makes it exactly unbiased.
    """
    spec = spec or QuadratureSpec()
    if lam == 0.0 or power == 0.0 or s == 0.0:
        return 0.0

    def outer(t):
        b = s * power * chi(t, t_i)

        def g(u):
            pg = 1.0 / (1.0 + u**alpha)
            frac = b[:, None] * pg[None, :]
            return frac * u[None, :] / (1.0 + frac)

        val, _ = integrate_semi_infinite(g, radius, spec)
        return val

    val, _ = integrate_adaptive(outer, -t_i, t_i, spec)
    return 2.0 * math.pi * lam * val


def _segment_sums(values, counts):
    """Sum `values` over consecutive segments of the given lengths."""
    idx = np.repeat(np.arange(counts.size), counts)
    return np.bincount(idx, weights=values, minlength=counts.size)


def simulate_energy(params: SystemParams, window: SimWindow, n_samples,
                    include_far_field=True) -> np.ndarray:
    """Sample the harvested energy E_H, n_samples independent draws.

    Per realization E_H = P1 sum_x h_x psi(t_x) (1 + r_x^alpha)^(-1) over
    primaries with epochs in [-T_I, T_E] inside the disk, plus the far
    field's deterministic mean unless include_far_field is False.
    """
    p = params
    span = p.t_i + p.t_e
    mean_count = p.lambda1 * math.pi * window.disk_radius**2 * span
    far = 0.0
    if include_far_field and p.lambda1 > 0.0:
        far = (
            2.0 * math.pi * p.lambda1 * p.p1 * p.t_e * p.t_i
            * _tail_mean(window.disk_radius, p.alpha)
        )
    out = np.empty(n_samples)
    done = 0
    batch_idx = 0
    while done < n_samples:
        take = min(_ENERGY_BATCH, n_samples - done)
        rng = _stream(window.master_seed, _OP_ENERGY, batch_idx)
        counts = rng.poisson(mean_count, take)
        total = int(counts.sum())
        r = window.disk_radius * np.sqrt(rng.random(total))
        t = -p.t_i + span * rng.random(total)
        h = rng.exponential(1.0, total)
        contrib = p.p1 * h * psi(t, p.t_e, p.t_i) * path_gain(r, p.alpha)
        out[done:done + take] = _segment_sums(contrib, counts) + far
        done += take
        batch_idx += 1
    return out


def simulate_guard_void(params: SystemParams, window: SimWindow,
                        n_samples) -> float:
    """Empirical probability that the guard disk holds no active receiver.

    Primaries active at the decision instant are those with epochs in the
    trailing interval of length T_I; each receiver sits at distance d from
    its transmitter at an independent uniform angle.
    """
    p = params
    if window.disk_radius < p.rho + p.d:
        raise ValueError("disk_radius must cover rho + d")
    mean_count = p.lambda1 * p.t_i * math.pi * window.disk_radius**2
    hits = 0
    done = 0
    batch_idx = 0
    while done < n_samples:
        take = min(_VOID_BATCH, n_samples - done)
        rng = _stream(window.master_seed, _OP_VOID, batch_idx)
        counts = rng.poisson(mean_count, take)
        total = int(counts.sum())
        r = window.disk_radius * np.sqrt(rng.random(total))
        theta = 2.0 * math.pi * rng.random(total)
        phi = 2.0 * math.pi * rng.random(total)
        rx = r * np.cos(theta) + p.d * np.cos(phi)
        ry = r * np.sin(theta) + p.d * np.sin(phi)
        inside = (rx * rx + ry * ry <= p.rho * p.rho).astype(float)
        hits += int(np.count_nonzero(_segment_sums(inside, counts) == 0))
        done += take
        batch_idx += 1
    return hits / n_samples


def simulate_transmit_prob(params: SystemParams, window: SimWindow,
                           n_samples) -> TransmitProbEstimate:
    """Joint probability of the two activity criteria of a secondary node.

    The typical secondary harvests over [-T_E, 0] and senses at 0, both
    against the same primary realization, so this measures the dependence
    the analytic product pi(eps) * pi_rho ignores.
    """
    p = params
    if window.disk_radius < p.rho + p.d:
        raise ValueError("disk_radius must cover rho + d")
    span = p.t_e + p.t_i
    mean_count = p.lambda1 * math.pi * window.disk_radius**2 * span
    far = (
        2.0 * math.pi * p.lambda1 * p.p1 * p.t_e * p.t_i
        * _tail_mean(window.disk_radius, p.alpha)
    ) if p.lambda1 > 0.0 else 0.0
    joint = 0
    n_energy = 0
    n_void = 0
    done = 0
    batch_idx = 0
    while done < n_samples:
        take = min(_ENERGY_BATCH, n_samples - done)
        rng = _stream(window.master_seed, _OP_TRANSMIT, batch_idx)
        counts = rng.poisson(mean_count, take)
        total = int(counts.sum())
        r = window.disk_radius * np.sqrt(rng.random(total))
        theta = 2.0 * math.pi * rng.random(total)
        t = -span + span * rng.random(total)
        h = rng.exponential(1.0, total)
        phi = 2.0 * math.pi * rng.random(total)
        contrib = (
            p.p1 * h * psi(t + p.t_e, p.t_e, p.t_i) * path_gain(r, p.alpha)
        )
        energy_ok = _segment_sums(contrib, counts) + far >= p.epsilon
        rx = r * np.cos(theta) + p.d * np.cos(phi)
        ry = r * np.sin(theta) + p.d * np.sin(phi)
        active = (t >= -p.t_i) & (t <= 0.0)
        inside = ((rx * rx + ry * ry <= p.rho * p.rho) & active).astype(float)
        void_ok = _segment_sums(inside, counts) == 0
        joint += int(np.count_nonzero(energy_ok & void_ok))
        n_energy += int(np.count_nonzero(energy_ok))
        n_void += int(np.count_nonzero(void_ok))
        done += take
        batch_idx += 1
    joint_hat = joint / n_samples
    return TransmitProbEstimate(
        joint=joint_hat,
        pi_eps=n_energy / n_samples,
        pi_rho=n_void / n_samples,
        stderr=math.sqrt(joint_hat * (1.0 - joint_hat) / n_samples),
    )


def _resolve_secondary_state(params, p2, lambda2_active, quad=None):
    """Fill in missing (p2, lambda2_active) from the analytic pipeline."""
    if p2 is not None and lambda2_active is not None:
        return float(p2), float(lambda2_active)
    if params.lambda2 == 0.0 or params.lambda1 == 0.0 or params.p1 == 0.0:
        return (0.0 if p2 is None else float(p2),
                0.0 if lambda2_active is None else float(lambda2_active))
    from .coverage import LinkAnalysis

    link = LinkAnalysis.derive(params, quad)
    if p2 is None:
        p2 = link.p2
    if lambda2_active is None:
        lambda2_active = link.lambda2_active
    return float(p2), float(lambda2_active)


def _sinr_scale(params, zeta, link, p2):
    from .coverage import PRIMARY, SecondaryUnpowered, _check_network

    _check_network(link)
    if not zeta > 0:
        raise ValueError("zeta must be positive")
    power = params.p1 if link == PRIMARY else p2
    if power == 0.0:
        raise SecondaryUnpowered(
            "secondary link has zero average transmit power"
        )
    return zeta * (1.0 + params.d**params.alpha) / power


def _conditional_coverage(params, s_arr, window, n_samples, fading,
                          p2, lam2a, rician_interferers, op):
    """Conditional coverage samples, shape (len(s_arr), n_samples).

    One geometry batch serves every SINR scale in s_arr, which keeps grid
    sweeps and the two links on common random numbers. With a Rayleigh
    desired link and analytic interferer fading the per-geometry coverage
    is the exact product over interferers of (1 + s P w)^(-1) times the
    noise factor; otherwise interferer fades are sampled and the desired
    fade's ccdf is evaluated at the realized interference.
    """
    p = params
    radius = window.disk_radius
    span = 2.0 * p.t_i
    mean1 = p.lambda1 * math.pi * radius**2 * span
    mean2 = lam2a * math.pi * radius**2 * span
    product_form = fading.kind == "rayleigh" and not rician_interferers
    ispec = fading if rician_interferers else FadingSpec()
    quad = QuadratureSpec()
    if product_form:
        consts = np.empty(s_arr.size)
        for j, s in enumerate(s_arr):
            lg = _far_log_laplace(s, p.p1, p.lambda1, radius, p.t_i,
                                  p.alpha, quad)
            lg += _far_log_laplace(s, p2, lam2a, radius, p.t_i, p.alpha, quad)
            consts[j] = math.exp(-p.sigma2 * s - lg)
    else:
        far_i = (
            2.0 * math.pi * p.t_i * _tail_mean(radius, p.alpha, quad)
            * (p.p1 * p.lambda1 + p2 * lam2a)
        )

    q = np.empty((s_arr.size, n_samples))
    done = 0
    batch_idx = 0
    while done < n_samples:
        take = min(_GEOM_BATCH, n_samples - done)
        rng = _stream(window.master_seed, op, batch_idx)
        counts1 = rng.poisson(mean1, take)
        n1 = int(counts1.sum())
        r1 = radius * np.sqrt(rng.random(n1))
        t1 = -p.t_i + span * rng.random(n1)
        w1 = chi(t1, p.t_i) * path_gain(r1, p.alpha)
        idx1 = np.repeat(np.arange(take), counts1)
        w2 = None
        if mean2 > 0.0:
            counts2 = rng.poisson(mean2, take)
            n2 = int(counts2.sum())
            r2 = radius * np.sqrt(rng.random(n2))
            t2 = -p.t_i + span * rng.random(n2)
            w2 = chi(t2, p.t_i) * path_gain(r2, p.alpha)
            idx2 = np.repeat(np.arange(take), counts2)
        sl = slice(done, done + take)
        if product_form:
            for j, s in enumerate(s_arr):
                acc = np.bincount(idx1, weights=np.log1p(s * p.p1 * w1),
                                  minlength=take)
                if w2 is not None:
                    acc += np.bincount(idx2, weights=np.log1p(s * p2 * w2),
                                       minlength=take)
                q[j, sl] = consts[j] * np.exp(-acc)
        else:
            h1 = ispec.sample(rng, n1)
            i_tot = np.bincount(idx1, weights=p.p1 * h1 * w1, minlength=take)
            if w2 is not None:
                h2 = ispec.sample(rng, n2)
                i_tot += np.bincount(idx2, weights=p2 * h2 * w2,
                                     minlength=take)
            i_tot += far_i
            for j, s in enumerate(s_arr):
                q[j, sl] = fading.ccdf(s * (p.sigma2 + i_tot))
        done += take
        batch_idx += 1
    return q


def simulate_coverage_table(params: SystemParams, combos, window: SimWindow,
                            n_samples=None, fading: FadingSpec = FadingSpec(),
                            p2=None, lambda2_active=None,
                            rician_interferers=False):
    """Estimate coverage for many (zeta, link) pairs on shared geometries.

    combos is an iterable of (zeta, link) pairs with link in {"primary",
    "secondary"}. Returns {(zeta, link): CoverageEstimate}. Sharing the
    sampled geometries across the grid makes curve comparisons far less
    noisy than independent runs of the same size.
    """
    combos = [(float(z), link) for z, link in combos]
    if n_samples is None:
        n_samples = window.replicates
    p2, lam2a = _resolve_secondary_state(params, p2, lambda2_active)
    s_arr = np.array([_sinr_scale(params, z, link, p2) for z, link in combos])
    q = _conditional_coverage(params, s_arr, window, n_samples, fading,
                              p2, lam2a, rician_interferers, _OP_COVERAGE)
    out = {}
    for j, combo in enumerate(combos):
        row = q[j]
        out[combo] = CoverageEstimate(
            mean=float(row.mean()),
            stderr=float(row.std(ddof=1) / math.sqrt(n_samples))
            if n_samples > 1 else float("inf"),
        )
    return out


def simulate_coverage(params: SystemParams, zeta, link, window: SimWindow,
                      n_samples=None, fading: FadingSpec = FadingSpec(),
                      coupled=False, p2=None, lambda2_active=None,
                      rician_interferers=False) -> CoverageEstimate:
    """Estimate P(SINR >= zeta) for the typical link of the given network.

    Uncoupled mode mirrors the analytic model: active secondaries form an
    independent thinned process of density lambda2_active transmitting at
    the constant average power p2 (both derived from the parameters when
    not supplied). Coupled mode instead activates each sampled secondary
    from its own harvested energy and guard-zone test against the shared
    primary realization, with per-node two-tier transmit power, so the
    difference between the modes measures everything the independence and
    average-power approximations discard.
    """
    if n_samples is None:
        n_samples = window.replicates
    if coupled:
        return _coupled_coverage(params, zeta, link, window, n_samples,
                                 fading)
    table = simulate_coverage_table(
        params, [(zeta, link)], window, n_samples, fading,
        p2, lambda2_active, rician_interferers,
    )
    return table[(float(zeta), link)]


def simulate_meta(params: SystemParams, zeta, link, window: SimWindow,
                  n_geometry, n_fading=32, fading: FadingSpec = FadingSpec(),
                  p2=None, lambda2_active=None,
                  rician_interferers=False) -> np.ndarray:
    """Sample the conditional coverage P(SINR >= zeta | geometry).

    Returns one value per sampled geometry; its empirical distribution is
    what the beta approximation targets. For a Rayleigh desired link the
    conditioning integrates all fading exactly (n_fading is ignored);
    otherwise each geometry averages the desired-fade ccdf over n_fading
    independent interferer fade draws.
    """
    p2, lam2a = _resolve_secondary_state(params, p2, lambda2_active)
    s = _sinr_scale(params, zeta, link, p2)
    if fading.kind == "rayleigh" and not rician_interferers:
        return _conditional_coverage(
            params, np.array([s]), window, n_geometry, fading,
            p2, lam2a, rician_interferers, _OP_META,
        )[0]
    if n_fading < 1:
        raise ValueError("n_fading must be at least 1")
    p = params
    radius = window.disk_radius
    span = 2.0 * p.t_i
    mean1 = p.lambda1 * math.pi * radius**2 * span
    mean2 = lam2a * math.pi * radius**2 * span
    ispec = fading if rician_interferers else FadingSpec()
    far_i = (
        2.0 * math.pi * p.t_i * _tail_mean(radius, p.alpha)
        * (p.p1 * p.lambda1 + p2 * lam2a)
    )
    q = np.empty(n_geometry)
    done = 0
    batch_idx = 0
    while done < n_geometry:
        take = min(_GEOM_BATCH, n_geometry - done)
        rng = _stream(window.master_seed, _OP_META, batch_idx)
        counts1 = rng.poisson(mean1, take)
        n1 = int(counts1.sum())
        r1 = radius * np.sqrt(rng.random(n1))
        t1 = -p.t_i + span * rng.random(n1)
        w1 = p.p1 * chi(t1, p.t_i) * path_gain(r1, p.alpha)
        idx1 = np.repeat(np.arange(take), counts1)
        w2 = None
        if mean2 > 0.0:
            counts2 = rng.poisson(mean2, take)
            n2 = int(counts2.sum())
            r2 = radius * np.sqrt(rng.random(n2))
            t2 = -p.t_i + span * rng.random(n2)
            w2 = p2 * chi(t2, p.t_i) * path_gain(r2, p.alpha)
            idx2 = np.repeat(np.arange(take), counts2)
        acc = np.zeros(take)
        for _ in range(n_fading):
            i_tot = np.bincount(idx1, weights=ispec.sample(rng, n1) * w1,
                                minlength=take)
            if w2 is not None:
                i_tot += np.bincount(idx2, weights=ispec.sample(rng, n2) * w2,
                                     minlength=take)
            acc += fading.ccdf(s * (p.sigma2 + i_tot + far_i))
        q[done:done + take] = acc / n_fading
        done += take
        batch_idx += 1
    return q


_PAIR_CHUNK = 2048


def _coupled_coverage(params: SystemParams, zeta, link, window: SimWindow,
                      n_samples, fading: FadingSpec) -> CoverageEstimate:
    """Coverage with secondary activity driven by the sampled primaries.

    Each candidate secondary harvests from the realized primary process
    (pairwise fades, neighbors within _NEIGHBOR_RADIUS plus the far-field
    mean), checks its guard disk against the realized active primary
    receivers, and transmits at its energy tier's power. The typical
    primary pair participates: its transmitter powers nearby candidates
    and its receiver's guard presence suppresses them. For a secondary
    typical link the geometry is rejection-conditioned on the typical
    transmitter itself qualifying, and its realized tier sets the desired
    power. Rayleigh fading only.
    """
    from .coverage import PRIMARY, SECONDARY, SecondaryUnpowered, \
        _check_network
    from .energy import EnergyLaw

    _check_network(link)
    if fading.kind != "rayleigh":
        raise ValueError("coupled mode supports Rayleigh fading only")
    if not zeta > 0:
        raise ValueError("zeta must be positive")
    p = params
    if link == SECONDARY and (p.lambda1 == 0.0 or p.p1 == 0.0):
        raise SecondaryUnpowered("no primary energy to harvest")

    quad = QuadratureSpec()
    radius = window.disk_radius
    scale = zeta * (1.0 + p.d**p.alpha)
    powered = p.lambda1 > 0.0 and p.p1 > 0.0 and p.lambda2 > 0.0
    if powered:
        law = EnergyLaw(p, quad)
        p_mid = law.mean_harvested_energy() / p.t_i
        p_sat = p.e_sat / p.t_i
        pi_eps = law.energy_ccdf(p.epsilon)
        pi_sat = law.energy_ccdf(p.e_sat)
        pi_rho = math.exp(-p.lambda1 * p.t_i * math.pi * p.rho**2)
    else:
        p_mid = p_sat = pi_eps = pi_sat = 0.0
        pi_rho = 1.0

    def far_const(s):
        lg = _far_log_laplace(s, p.p1, p.lambda1, radius, p.t_i, p.alpha,
                              quad)
        if powered:
            lg += _far_log_laplace(
                s, p_mid, p.lambda2 * (pi_eps - pi_sat) * pi_rho,
                radius, p.t_i, p.alpha, quad,
            )
            lg += _far_log_laplace(
                s, p_sat, p.lambda2 * pi_sat * pi_rho,
                radius, p.t_i, p.alpha, quad,
            )
        return -p.sigma2 * s - lg

    if link == PRIMARY:
        s_by_tier = {0: scale / p.p1}
    else:
        s_by_tier = {0: scale / p_mid, 1: scale / p_sat}
    log_far = {tier: far_const(s) for tier, s in s_by_tier.items()}

    e_far = 0.0
    if p.lambda1 > 0.0:
        e_far = (
            2.0 * math.pi * p.lambda1 * p.p1 * p.t_e * p.t_i
            * _tail_mean(_NEIGHBOR_RADIUS, p.alpha, quad)
        )

    span1 = 3.0 * p.t_i + p.t_e
    mean1 = p.lambda1 * math.pi * radius**2 * span1
    mean2 = p.lambda2 * math.pi * radius**2 * 2.0 * p.t_i
    nbr2 = _NEIGHBOR_RADIUS**2

    def pair_energy(xc, yc, tc, xs, ys, ts, rng):
        """Harvested energy of each candidate from the listed sources."""
        total = np.zeros(xc.size)
        for lo in range(0, xc.size, _PAIR_CHUNK):
            hi = min(lo + _PAIR_CHUNK, xc.size)
            dx = xc[lo:hi, None] - xs[None, :]
            dy = yc[lo:hi, None] - ys[None, :]
            d2 = dx * dx + dy * dy
            tau = ts[None, :] - tc[lo:hi, None] + p.t_e
            ci, si = np.nonzero((d2 <= nbr2) & (tau > -p.t_i) & (tau < p.t_e))
            if ci.size:
                ov = psi(tau[ci, si], p.t_e, p.t_i)
                gain = path_gain(np.sqrt(d2[ci, si]), p.alpha)
                h = rng.exponential(1.0, ci.size)
                total[lo:hi] = np.bincount(
                    ci, weights=p.p1 * h * ov * gain, minlength=hi - lo,
                )
        return total + e_far

    def guard_blocked(xc, yc, tc, rx, ry, ts):
        """Whether an active receiver sits in each candidate's guard disk."""
        blocked = np.zeros(xc.size, dtype=bool)
        if p.rho == 0.0 or rx.size == 0:
            return blocked
        rho2 = p.rho * p.rho
        for lo in range(0, xc.size, _PAIR_CHUNK):
            hi = min(lo + _PAIR_CHUNK, xc.size)
            dx = xc[lo:hi, None] - rx[None, :]
            dy = yc[lo:hi, None] - ry[None, :]
            near = dx * dx + dy * dy <= rho2
            active = (
                (ts[None, :] >= tc[lo:hi, None] - p.t_i)
                & (ts[None, :] <= tc[lo:hi, None])
            )
            blocked[lo:hi] = np.any(near & active, axis=1)
        return blocked

    samples = []
    total_geoms = 0
    max_geoms = 20 * n_samples
    batch_idx = 0
    while len(samples) < n_samples and total_geoms < max_geoms:
        take = min(_COUPLED_BATCH, n_samples - len(samples))
        rng = _stream(window.master_seed, _OP_COUPLED, batch_idx)
        for _ in range(take):
            total_geoms += 1
            n1 = int(rng.poisson(mean1))
            rr = radius * np.sqrt(rng.random(n1))
            th = 2.0 * math.pi * rng.random(n1)
            x1, y1 = rr * np.cos(th), rr * np.sin(th)
            t1 = -(2.0 * p.t_i + p.t_e) + span1 * rng.random(n1)
            phi = 2.0 * math.pi * rng.random(n1)
            rx1 = x1 + p.d * np.cos(phi)
            ry1 = y1 + p.d * np.sin(phi)

            n2 = int(rng.poisson(mean2)) if powered else 0
            rr2 = radius * np.sqrt(rng.random(n2))
            th2 = 2.0 * math.pi * rng.random(n2)
            x2, y2 = rr2 * np.cos(th2), rr2 * np.sin(th2)
            t2 = -p.t_i + 2.0 * p.t_i * rng.random(n2)

            if link == PRIMARY:
                # the typical transmitter powers candidates, its receiver
                # at the origin repels them
                xs = np.append(x1, p.d)
                ys = np.append(y1, 0.0)
                ts = np.append(t1, 0.0)
                rx = np.append(rx1, 0.0)
                ry = np.append(ry1, 0.0)
                tier = 0
            else:
                xs, ys, ts = x1, y1, t1
                rx, ry = rx1, ry1
                e_typ = pair_energy(
                    np.array([p.d]), np.array([0.0]), np.array([0.0]),
                    xs, ys, ts, rng,
                )[0]
                if e_typ < p.epsilon:
                    continue
                if guard_blocked(
                    np.array([p.d]), np.array([0.0]), np.array([0.0]),
                    rx, ry, ts,
                )[0]:
                    continue
                tier = 1 if e_typ >= p.e_sat else 0

            log_q = log_far[tier]
            s = s_by_tier[tier]
            if n1:
                w1 = chi(t1, p.t_i) * path_gain(rr, p.alpha)
                log_q -= float(np.log1p(s * p.p1 * w1).sum())
            if n2:
                energy = pair_energy(x2, y2, t2, xs, ys, ts, rng)
                active = (energy >= p.epsilon) & ~guard_blocked(
                    x2, y2, t2, rx, ry, ts,
                )
                if np.any(active):
                    p_y = np.where(energy[active] >= p.e_sat, p_sat, p_mid)
                    w2 = (
                        chi(t2[active], p.t_i)
                        * path_gain(rr2[active], p.alpha)
                    )
                    log_q -= float(np.log1p(s * p_y * w2).sum())
            samples.append(math.exp(log_q))
        batch_idx += 1

    n_used = len(samples)
    if n_used < max(2, n_samples // 5):
        raise RuntimeError(
            "conditioning on an active typical secondary rejected almost "
            "every geometry; the secondary network is effectively silent"
        )
    arr = np.array(samples)
    return CoverageEstimate(
        mean=float(arr.mean()),
        stderr=float(arr.std(ddof=1) / math.sqrt(n_used)),
    )
