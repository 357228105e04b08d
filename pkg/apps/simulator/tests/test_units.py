"""
Tests for unit conversions and constants.
"""

import math

import pytest

from core.exceptions import InvalidInputError
from core.units import C, SIGMA_MIN, VF, omega_to_thz, thz_to_omega, um_to_m, vacuum_wavelength, wavenumber


def test_vacuum_wavelength_at_15_thz():
    """Test c/f at 15 THz against 19.986 um."""
    assert vacuum_wavelength(15.0) == pytest.approx(19.986e-6, rel=1e-4)


def test_frequency_round_trip():
    """Test THz -> rad/s -> THz."""
    assert omega_to_thz(thz_to_omega(7.5)) == pytest.approx(7.5, rel=1e-15)
    assert thz_to_omega(1.0) == pytest.approx(2.0 * math.pi * 1e12)


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_nonpositive_frequency_rejected(bad):
    """Test that frequencies must be positive."""
    with pytest.raises(InvalidInputError):
        thz_to_omega(bad)
    with pytest.raises(InvalidInputError):
        vacuum_wavelength(bad)


def test_wavenumber_scales_with_index():
    """Test k = omega sqrt(eps_r) / c."""
    omega = thz_to_omega(15.0)
    assert wavenumber(omega, 4.0) == pytest.approx(2.0 * omega / C)


def test_constants():
    """Test derived constants."""
    assert VF == pytest.approx(C / 300.0)
    assert SIGMA_MIN == pytest.approx(6.0853e-5, rel=1e-4)
    assert um_to_m(0.106) == pytest.approx(1.06e-7)
