"""Physical constants and unit conversions.

All internal computations use SI units with angular frequencies:
rad/s for frequencies and rates, kelvin for temperatures, seconds for
times, joules for energies.  User-facing quantities (GHz, mK, us, ueV,
MHz) are converted at the boundary by the helpers below.

Rates and lifetimes are related by the angular convention tau = 2*pi/gamma:
a channel with angular rate gamma (rad/s) produces an exponential 1/e decay
time of 2*pi/gamma seconds.  ``rate_to_per_second`` owns this factor; every
place a rate meets a wall-clock time goes through it.  The alternative plain
convention tau = 1/gamma is available for cross-checks.
"""

from __future__ import annotations

import math

# Exact SI defining constants (2019 redefinition).
H = 6.62607015e-34          # Planck constant, J*s
HBAR = H / (2.0 * math.pi)  # reduced Planck constant, J*s
KB = 1.380649e-23           # Boltzmann constant, J/K
QE = 1.602176634e-19        # elementary charge, C

TWO_PI = 2.0 * math.pi

# Conductance quantum g_K = e^2/h, siemens.
G_K = QE * QE / H


def ghz_to_rad_per_s(f_ghz: float) -> float:
    """Convert an ordinary frequency in GHz to angular frequency in rad/s."""
    return TWO_PI * f_ghz * 1e9


def rad_per_s_to_ghz(omega: float) -> float:
    """Convert angular frequency in rad/s to ordinary frequency in GHz."""
    return omega / (TWO_PI * 1e9)


def mk_to_kelvin(t_mk: float) -> float:
    return t_mk * 1e-3


def kelvin_to_mk(t_k: float) -> float:
    return t_k * 1e3


def us_to_s(t_us: float) -> float:
    return t_us * 1e-6


def s_to_us(t_s: float) -> float:
    return t_s * 1e6


def uev_to_joule(e_uev: float) -> float:
    """Convert an energy given in micro-electronvolts to joules."""
    return e_uev * 1e-6 * QE


def mhz_to_joule(f_mhz: float) -> float:
    """Convert an energy given as a frequency E/h in MHz to joules."""
    return H * f_mhz * 1e6


def rate_to_per_second(gamma: float, convention: str = "angular") -> float:
    """Convert an angular rate (rad/s) to an exponential decay rate (1/s).

    ``angular`` follows tau = 2*pi/gamma, so the per-second rate is
    gamma/(2*pi).  ``plain`` treats gamma as already per-second
    (tau = 1/gamma) and is provided for cross-checks only.
    """
    if convention == "angular":
        return gamma / TWO_PI
    if convention == "plain":
        return gamma
    raise ValueError(f"unknown rate convention {convention!r}")


def lifetime_from_rate(gamma: float, convention: str = "angular") -> float:
    """1/e lifetime in seconds of a channel with angular rate gamma."""
    if gamma <= 0.0:
        raise ValueError("rate must be positive to define a lifetime")
    return 1.0 / rate_to_per_second(gamma, convention)


def rate_from_lifetime(tau: float, convention: str = "angular") -> float:
    """Angular rate (rad/s) of a channel with 1/e lifetime tau seconds."""
    if tau <= 0.0:
        raise ValueError("lifetime must be positive")
    if convention == "angular":
        return TWO_PI / tau
    if convention == "plain":
        return 1.0 / tau
    raise ValueError(f"unknown rate convention {convention!r}")
