"""Shared fixtures: the documented operating point, derived once per run."""

import pytest

from cognet import EnergyLaw, LinkAnalysis, QuadratureSpec, SystemParams


@pytest.fixture(scope="session")
def default_params():
    return SystemParams()


@pytest.fixture(scope="session")
def default_law(default_params):
    return EnergyLaw(default_params, QuadratureSpec())


@pytest.fixture(scope="session")
def default_link(default_params):
    return LinkAnalysis.derive(default_params)
