"""
Tests for the two-qubit master equation.
"""

import numpy as np
import pytest

from core.exceptions import InvalidInputError, NonUniqueSteadyStateError
from models.dynamics import DensityMatrix, DynamicsParams
from services.dynamics_service import DynamicsService, sandwich, spost, spre, unvec, vec
from services.entanglement_service import EntanglementService


@pytest.fixture
def times():
    return np.linspace(0.0, 5.0, 11)


def test_vectorization_convention():
    """Test vec(A rho B) == sandwich(A, B) vec(rho) with column stacking."""
    rng = np.random.default_rng(7)
    a, b, rho = (rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)) for _ in range(3))
    assert np.allclose(sandwich(a, b) @ vec(rho), vec(a @ rho @ b))
    assert np.allclose(spre(a) @ vec(rho), vec(a @ rho))
    assert np.allclose(spost(b) @ vec(rho), vec(rho @ b))
    assert np.array_equal(unvec(vec(rho)), rho)


def test_uncoupled_decay(times):
    """Test rho_44(t) = exp(-t) for an isolated excited emitter."""
    L = DynamicsService.build_liouvillian(DynamicsParams())
    states = DynamicsService.evolve(DynamicsService.initial_state(), L, times)
    for t, rho in zip(times, states):
        assert rho.population(3) == pytest.approx(np.exp(-t), abs=1e-8)
        assert rho.population(0) == pytest.approx(1.0 - np.exp(-t), abs=1e-8)


def test_rk_agrees_with_expm(times, tol):
    """Test both evolution methods give the same trajectory."""
    params = DynamicsParams(gamma12=0.4, gamma21=0.1, g12=0.3, g21=-0.2, omega1_drive=0.2)
    L = DynamicsService.build_liouvillian(params)
    rho0 = DynamicsService.initial_state()
    exact = DynamicsService.evolve(rho0, L, times, method="expm")
    integrated = DynamicsService.evolve(rho0, L, times, method="rk", tol=tol)
    for a, b in zip(exact, integrated):
        assert np.allclose(a.data, b.data, atol=1e-8)


def test_ideal_coupling_dark_state():
    """Test C(t = 50) = 0.5 when Gamma_12 = Gamma_21 = Gamma_11 and g = 0."""
    L = DynamicsService.build_liouvillian(DynamicsParams(gamma12=1.0, gamma21=1.0))
    rho = DynamicsService.evolve(DynamicsService.initial_state(), L, [50.0])[0]
    assert EntanglementService.concurrence(rho).value == pytest.approx(0.5, abs=1e-3)


def test_trace_and_hermiticity_preserved():
    """Test every trajectory state keeps unit trace and stays Hermitian."""
    params = DynamicsParams(gamma12=0.6, gamma21=-0.3, g12=0.5, g21=0.1, omega1_drive=0.4, omega2_drive=0.1)
    L = DynamicsService.build_liouvillian(params)
    for rho in DynamicsService.evolve(DynamicsService.initial_state(), L, np.linspace(0.0, 20.0, 41)):
        assert rho.trace == pytest.approx(1.0, abs=1e-10)
        assert rho.hermiticity_error < 1e-10


def test_driven_single_emitter_steady_state():
    """Test the resonantly driven two-level steady state."""
    omega = 0.3
    L = DynamicsService.build_liouvillian(DynamicsParams(omega1_drive=omega))
    rho = DynamicsService.steady_state(L).data
    denominator = 1.0 + 8.0 * omega**2
    assert rho[3, 3].real == pytest.approx(4.0 * omega**2 / denominator, abs=1e-9)
    assert rho[3, 0] == pytest.approx(2j * omega / denominator, abs=1e-9)
    assert np.trace(rho) == pytest.approx(1.0, abs=1e-12)


def test_steady_state_is_null_vector():
    """Test L vec(rho_ss) = 0 for a driven nonreciprocal pair."""
    params = DynamicsParams(gamma12=0.5, gamma21=0.2, g12=0.1, g21=0.3, omega1_drive=0.43)
    L = DynamicsService.build_liouvillian(params)
    rho = DynamicsService.steady_state(L)
    assert np.linalg.norm(L.matrix @ vec(rho.data)) < 1e-10


@pytest.mark.parametrize("gamma_cross", [1.0, -1.0])
def test_degenerate_steady_state_raises(gamma_cross):
    """Test a decoupled dark state makes the steady state non-unique."""
    L = DynamicsService.build_liouvillian(DynamicsParams(gamma12=gamma_cross, gamma21=gamma_cross))
    with pytest.raises(NonUniqueSteadyStateError) as info:
        DynamicsService.steady_state(L)
    assert len(info.value.extra["smallest_singular_values"]) == 4


@pytest.mark.parametrize("grid", [[], [1.0, 0.5], [-1.0, 1.0]])
def test_invalid_time_grid(grid):
    """Test empty, descending and negative grids are rejected."""
    L = DynamicsService.build_liouvillian(DynamicsParams())
    with pytest.raises(InvalidInputError):
        DynamicsService.evolve(DynamicsService.initial_state(), L, grid)


def test_density_matrix_shape_enforced():
    """Test non-4x4 data is rejected."""
    with pytest.raises(ValueError):
        DensityMatrix(data=np.eye(2))
