"""
Tests for the Wootters concurrence.
"""

import numpy as np
import pytest

from core.exceptions import NumericalInstabilityError
from services.entanglement_service import EntanglementService

# basis order |gg>, |ee>, |ge>, |eg>; PERM maps it onto |gg>, |ge>, |eg>, |ee>
PERM = [0, 3, 1, 2]


def _bell() -> np.ndarray:
    psi = np.array([1.0, 1.0, 0.0, 0.0]) / np.sqrt(2.0)
    return np.outer(psi, psi.conj())


def _random_unitary(rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_bell_state():
    """Test a maximally entangled state has C = 1."""
    assert EntanglementService.concurrence(_bell()).value == pytest.approx(1.0, abs=1e-10)


def test_product_state():
    """Test |e g> is unentangled."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[3, 3] = 1.0
    assert EntanglementService.concurrence(rho).value == 0.0


@pytest.mark.parametrize("p, expected", [(0.2, 0.0), (0.5, 0.25), (0.9, 0.85)])
def test_werner_states(p, expected):
    """Test C = max(0, (3p - 1) / 2) for Werner states."""
    rho = p * _bell() + (1.0 - p) * np.eye(4) / 4.0
    assert EntanglementService.concurrence(rho).value == pytest.approx(expected, abs=1e-9)


def test_local_unitary_invariance():
    """Test C is unchanged by U1 x U2."""
    rng = np.random.default_rng(11)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    rho = 0.2 * rho + 0.8 * _bell()
    u = np.kron(_random_unitary(rng), _random_unitary(rng))[np.ix_(PERM, PERM)]
    before = EntanglementService.concurrence(rho).value
    after = EntanglementService.concurrence(u @ rho @ u.conj().T).value
    assert before > 0
    assert after == pytest.approx(before, abs=1e-9)


def test_pure_state_shortcut():
    """Test 2|a_gg a_ee - a_ge a_eg| against the mixed-state formula."""
    rng = np.random.default_rng(3)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    closed_form = 2.0 * abs(psi[0] * psi[1] - psi[2] * psi[3])
    assert EntanglementService.pure_state_concurrence(psi) == pytest.approx(closed_form, abs=1e-12)
    assert EntanglementService.concurrence(np.outer(psi, psi.conj())).value == pytest.approx(closed_form, abs=1e-7)


def test_spin_flip_is_an_involution():
    """Test flipping twice returns the state and preserves the trace."""
    rho = 0.7 * _bell() + 0.3 * np.eye(4) / 4.0
    flipped = EntanglementService.spin_flip(rho)
    assert np.trace(flipped) == pytest.approx(1.0)
    assert np.allclose(EntanglementService.spin_flip(flipped), rho)


def test_unphysical_state_rejected():
    """Test a strongly non-positive matrix is rejected rather than cleaned up."""
    rho = np.diag([0.5, 0.5, -0.5, 0.5]).astype(complex)
    with pytest.raises(NumericalInstabilityError):
        EntanglementService.concurrence(rho)
