"""
Tests for the local and drift-biased graphene conductivity.
"""

import math

import numpy as np
import pytest

from core.exceptions import ConductivityDomainError, DopplerSingularityError, InvalidInputError
from core.units import HBAR, VF
from models.material import GrapheneParams
from services.conductivity_service import ConductivityService


def test_local_conductivity_is_inductive_below_interband(graphene, omega_15):
    """Test Im sigma > 0 (TM support) at 15 THz for mu_c = 0.1 eV."""
    sigma = ConductivityService.local_conductivity(omega_15, graphene).sigma
    assert sigma.real > 0
    assert sigma.imag > 0
    assert ConductivityService.supports_tm(omega_15, 0.0, graphene)


def test_drude_limit(graphene):
    """Test the intraband term dominates far below the interband edge."""
    omega = 1e11
    sigma = ConductivityService.local_conductivity(omega, graphene).sigma
    drude_dc = 1.602176634e-19**2 * graphene.mu_c * graphene.tau / (math.pi * HBAR**2)
    assert sigma.real == pytest.approx(drude_dc / (1.0 + (omega * graphene.tau) ** 2), rel=1e-2)


def test_interband_threshold_raises(graphene):
    """Test hbar*omega = 2 mu_c is rejected."""
    omega = 2.0 * graphene.mu_c / HBAR
    with pytest.raises(ConductivityDomainError):
        ConductivityService.local_conductivity(omega, graphene)


def test_nonpositive_omega_raises(graphene):
    """Test omega must be positive."""
    with pytest.raises(InvalidInputError):
        ConductivityService.local_conductivity(0.0, graphene)


def test_zero_drift_is_local(graphene, omega_15):
    """Test sigma_d is independent of q_x when v_d = 0."""
    local = ConductivityService.local_conductivity(omega_15, graphene).sigma
    for q_x in (-5e7, 0.0, 5e7):
        assert ConductivityService.doppler_conductivity(omega_15, q_x, graphene).sigma == local


def test_doppler_symmetry(omega_15):
    """Test sigma_d(v_d, q_x) == sigma_d(-v_d, -q_x)."""
    forward = GrapheneParams.from_units(0.1, 0.35, -0.5)
    backward = forward.with_drift(-forward.v_d)
    for q_x in (-3e7, 1e6, 4e7):
        a = ConductivityService.doppler_conductivity(omega_15, q_x, forward).sigma
        b = ConductivityService.doppler_conductivity(omega_15, -q_x, backward).sigma
        assert a == b


def test_doppler_singularity_raises(omega_15):
    """Test omega - q_x v_d = 0 raises."""
    params = GrapheneParams.from_units(0.1, 0.35, 0.5)
    with pytest.raises(DopplerSingularityError):
        ConductivityService.doppler_conductivity(omega_15, omega_15 / params.v_d, params)


def test_vectorized_matches_scalar_and_flags_singular_nodes(omega_15):
    """Test the array form agrees with the scalar form and marks singular nodes NaN."""
    params = GrapheneParams.from_units(0.1, 0.35, 0.5)
    q_x = np.array([-2e7, 1e7, omega_15 / params.v_d])
    sigma = ConductivityService.doppler_sigma_array(omega_15, q_x, params)
    for q, s in zip(q_x[:2], sigma[:2]):
        assert s == pytest.approx(ConductivityService.doppler_conductivity(omega_15, q, params).sigma, rel=1e-12)
    assert np.isnan(sigma[2])


def test_drift_must_stay_below_fermi_velocity():
    """Test |v_d| < v_F is enforced."""
    with pytest.raises(ValueError):
        GrapheneParams(mu_c=1.6e-20, tau=3.5e-13, v_d=VF)


def test_drift_tilts_inductance_against_the_drift(omega_15):
    """Test Im sigma_d is larger for q_x < 0 than for q_x > 0 when v_d = -v_F/2."""
    params = GrapheneParams.from_units(0.1, 0.35, -0.5)
    for q_x in (1e7, 3e7, 5e7):
        backward = ConductivityService.doppler_conductivity(omega_15, -q_x, params).sigma
        forward = ConductivityService.doppler_conductivity(omega_15, q_x, params).sigma
        assert backward.imag > forward.imag


@pytest.mark.parametrize("energy_over_mu", [3.0, 20.0])
def test_no_tm_support_above_interband_edge(graphene, energy_over_mu):
    """Test hbar*omega above 2 mu_c makes the sheet capacitive."""
    omega = energy_over_mu * graphene.mu_c / HBAR
    assert ConductivityService.local_conductivity(omega, graphene).sigma.imag < 0
    assert not ConductivityService.supports_tm(omega, 0.0, graphene)


def test_doppler_symmetry_on_random_grid(omega_15):
    """Test sigma_d(v_d, q_x) == sigma_d(-v_d, -q_x) over random drifts and wavenumbers."""
    rng = np.random.default_rng(11)
    for fraction, q_x in zip(rng.uniform(-0.9, 0.9, 25), rng.uniform(-8e7, 8e7, 25)):
        params = GrapheneParams.from_units(0.1, 0.35, float(fraction))
        reversed_params = params.with_drift(-params.v_d)
        a = ConductivityService.doppler_conductivity(omega_15, float(q_x), params).sigma
        b = ConductivityService.doppler_conductivity(omega_15, -float(q_x), reversed_params).sigma
        assert a == b
