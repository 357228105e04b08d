"""
Physical constants and unit conversions.

Everything inside the simulator is SI (rad/s, m, S, J, s). The CLI accepts
THz, eV, ps and um and converts on ingestion through the helpers below.
Constants are CODATA-2018, frozen here so golden values never drift with the
installed scipy release.
"""

import math

from core.exceptions import InvalidInputError

C = 299792458.0
H = 6.62607015e-34
HBAR = H / (2.0 * math.pi)
E_CHARGE = 1.602176634e-19
EPS0 = 8.8541878128e-12
VF = C / 300.0

# pi e^2 / (2 h), the normalization used for conductivity plots
SIGMA_MIN = math.pi * E_CHARGE**2 / (2.0 * H)


def thz_to_omega(f_thz: float) -> float:
    """Frequency in THz to angular frequency in rad/s."""
    if not f_thz > 0:
        raise InvalidInputError(f"frequency must be positive, got {f_thz} THz")
    return 2.0 * math.pi * f_thz * 1e12


def omega_to_thz(omega: float) -> float:
    if not omega > 0:
        raise InvalidInputError(f"angular frequency must be positive, got {omega} rad/s")
    return omega / (2.0 * math.pi * 1e12)


def ev_to_joule(energy_ev: float) -> float:
    return energy_ev * E_CHARGE


def ps_to_seconds(t_ps: float) -> float:
    return t_ps * 1e-12


def um_to_m(length_um: float) -> float:
    return length_um * 1e-6


def vacuum_wavelength(f_thz: float) -> float:
    """Free-space wavelength c/f in meters."""
    if not f_thz > 0:
        raise InvalidInputError(f"frequency must be positive, got {f_thz} THz")
    return C / (f_thz * 1e12)


def wavenumber(omega: float, eps_r: float) -> float:
    """k = omega * sqrt(eps_r) / c for a lossless, non-magnetic medium."""
    return omega * math.sqrt(eps_r) / C
