"""Cognitive underlay network analysis.

Analytic performance of an asynchronous primary ad hoc network sharing
spectrum with a wireless-powered secondary network, plus an independent
Monte Carlo simulator of the same model. The analytic chain is: harvested
energy law (characteristic function and tail inversion), secondary access
probabilities, coverage and spatial throughput of both links, and the beta
approximation of the conditional coverage distribution.
"""

from .access import (
    AccessResult,
    active_secondary_density,
    evaluate_access,
    guard_zone_void_prob,
    transmit_prob,
)
from .coverage import PRIMARY, SECONDARY, LinkAnalysis, SecondaryUnpowered
from .energy import EnergyLaw
from .meta import (
    BetaMoments,
    DegenerateDistribution,
    MomentViolation,
    beta_match,
    conditional_moments,
    laplace_second_moment,
    meta_distribution,
)
from .model import (
    DEFAULTS,
    SystemParams,
    chi,
    path_gain,
    psi,
    psi_breakpoints,
)
from .montecarlo import (
    CoverageEstimate,
    FadingSpec,
    SimWindow,
    TransmitProbEstimate,
    TsPoint,
    TsSample,
    sample_tsppp,
    simulate_coverage,
    simulate_coverage_table,
    simulate_energy,
    simulate_guard_void,
    simulate_meta,
    simulate_transmit_prob,
)
from .numerics import (
    NonConvergence,
    QuadratureSpec,
    gil_pelaez_ccdf,
    integrate_adaptive,
    integrate_semi_infinite,
    regularized_incomplete_beta,
)

__version__ = "0.1.0"

__all__ = [
    "AccessResult",
    "BetaMoments",
    "CoverageEstimate",
    "DEFAULTS",
    "DegenerateDistribution",
    "EnergyLaw",
    "FadingSpec",
    "LinkAnalysis",
    "MomentViolation",
    "NonConvergence",
    "PRIMARY",
    "QuadratureSpec",
    "SECONDARY",
    "SecondaryUnpowered",
    "SimWindow",
    "SystemParams",
    "TransmitProbEstimate",
    "TsPoint",
    "TsSample",
    "active_secondary_density",
    "beta_match",
    "chi",
    "conditional_moments",
    "evaluate_access",
    "gil_pelaez_ccdf",
    "guard_zone_void_prob",
    "integrate_adaptive",
    "integrate_semi_infinite",
    "laplace_second_moment",
    "meta_distribution",
    "path_gain",
    "psi",
    "psi_breakpoints",
    "regularized_incomplete_beta",
    "sample_tsppp",
    "simulate_coverage",
    "simulate_coverage_table",
    "simulate_energy",
    "simulate_guard_void",
    "simulate_meta",
    "simulate_transmit_prob",
    "transmit_prob",
    "__version__",
]
