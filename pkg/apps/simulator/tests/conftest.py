"""
Shared fixtures for the simulator tests.
"""

import json
from pathlib import Path

import pytest

from core.units import thz_to_omega
from models.environment import Environment
from models.material import GrapheneParams
from models.tolerances import DEFAULT_TOLERANCES


@pytest.fixture
def tol():
    return DEFAULT_TOLERANCES


@pytest.fixture
def omega_15():
    """15 THz in rad/s."""
    return thz_to_omega(15.0)


@pytest.fixture
def graphene():
    return GrapheneParams.from_units(mu_c_ev=0.1, tau_ps=0.35)


@pytest.fixture
def env_vacuum():
    return Environment(eps_r1=1.0, eps_r2=1.0)


@pytest.fixture
def env_r(graphene):
    """Reciprocal graphene between eps_r = 4 claddings."""
    return Environment(eps_r1=4.0, eps_r2=4.0, sheet=graphene)


@pytest.fixture
def env_nr(graphene):
    """Graphene with drift v_d = -v_F / 2."""
    return Environment(eps_r1=4.0, eps_r2=4.0, sheet=GrapheneParams.from_units(0.1, 0.35, -0.5))


@pytest.fixture
def write_config(tmp_path: Path):
    """Write a JSON config into tmp_path and return its path."""

    def _write(payload: dict, name: str = "config.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path

    return _write
