"""Thermal-bath physics for a qubit transition.

Bose-Einstein occupations, detailed-balance transition rates for single and
multiple uncorrelated ohmic baths, effective temperatures, and the
thermalization relations used in the gamma_1-vs-photon-number analysis.

A bath at temperature T coupled to a transition at angular frequency omega
with base rate gamma produces

    Gamma_down = gamma * [n(omega, T) + 1],    Gamma_up = gamma * n(omega, T),

with n the Bose-Einstein occupation.  Detailed balance
Gamma_up/Gamma_down = exp(-hbar*omega/kB*T) holds per bath; for several
baths the steady state is thermal-like with an effective temperature set by
the summed rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .constants import HBAR, KB
from .state import PopulationVector


def _check_positive_finite(value: float, name: str) -> None:
    if not math.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be positive and finite, got {value}")


@dataclass(frozen=True)
class BathSpec:
    """One uncorrelated thermal bath: temperature (K) and coupling rate (rad/s)."""

    temperature: float
    base_rate: float

    def __post_init__(self):
        _check_positive_finite(self.temperature, "bath temperature")
        if not math.isfinite(self.base_rate) or self.base_rate < 0.0:
            raise ValueError(f"bath base_rate must be >= 0, got {self.base_rate}")


@dataclass(frozen=True)
class SteadyState:
    """Steady-state summary of a transition coupled to one or more baths."""

    pe_over_pg: float
    mean_photon_number: float
    total_gamma1: float
    effective_temperature: float


def bose_einstein(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation n = 1/(exp(hbar*omega/kB*T) - 1)."""
    _check_positive_finite(omega, "omega")
    _check_positive_finite(temperature, "temperature")
    x = HBAR * omega / (KB * temperature)
    return 1.0 / math.expm1(x)


def bath_rates(bath: BathSpec, omega: float) -> tuple[float, float]:
    """Excitation and relaxation rates (Gamma_up, Gamma_down) from one bath."""
    n = bose_einstein(omega, bath.temperature)
    return bath.base_rate * n, bath.base_rate * (n + 1.0)


def teff_from_ratio(ratio: float, omega: float) -> float:
    """Effective temperature from a Boltzmann population ratio p_e/p_g.

    Inverts p_e/p_g = exp(-hbar*omega/kB*T).  Ratios outside (0, 1) have no
    positive temperature (population inversion or degenerate input) and raise.
    """
    _check_positive_finite(omega, "omega")
    if not math.isfinite(ratio) or ratio <= 0.0 or ratio >= 1.0:
        raise ValueError(f"population ratio must lie in (0, 1), got {ratio}")
    return HBAR * omega / (KB * (-math.log(ratio)))


def aggregate_baths(baths: Sequence[BathSpec], omega: float) -> SteadyState:
    """Steady state of a transition coupled to several uncorrelated baths.

    Rates add: the population ratio is sum(Gamma_up)/sum(Gamma_down), the
    mean photon number sum(Gamma_up)/sum(Gamma_down - Gamma_up), and the
    total relaxation rate sum over baths of gamma_i*(2 n_i + 1).
    """
    if not baths:
        raise ValueError("at least one bath is required")
    up = down = 0.0
    for bath in baths:
        g_up, g_down = bath_rates(bath, omega)
        up += g_up
        down += g_down
    if down <= 0.0:
        raise ValueError("all bath coupling rates are zero")
    ratio = up / down
    n_mean = up / (down - up)
    return SteadyState(
        pe_over_pg=ratio,
        mean_photon_number=n_mean,
        total_gamma1=up + down,
        effective_temperature=teff_from_ratio(ratio, omega),
    )


def boltzmann_populations(level_energies: Sequence[float], temperature: float) -> PopulationVector:
    """Thermal populations p_i = exp(-E_i/kB*T)/Z for the three lowest levels.

    Energies must be sorted ascending; the ground-state energy is subtracted
    before exponentiation so large absolute energies stay well conditioned.
    """
    _check_positive_finite(temperature, "temperature")
    energies = list(level_energies)
    if len(energies) != 3:
        raise ValueError(f"expected 3 level energies, got {len(energies)}")
    if any(not math.isfinite(e) for e in energies):
        raise ValueError("level energies must be finite")
    if not (energies[0] <= energies[1] <= energies[2]):
        raise ValueError("level energies must be sorted ascending")
    beta = 1.0 / (KB * temperature)
    weights = [math.exp(-(e - energies[0]) * beta) for e in energies]
    z = sum(weights)
    return PopulationVector(weights[0] / z, weights[1] / z, weights[2] / z)


def gamma1_vs_T(gamma1_base: float, omega: float, temperature: float) -> float:
    """Thermally enhanced relaxation rate gamma_1(T) = gamma_1^0 * coth(hbar*omega/2*kB*T).

    Equals gamma_1^0 * [2 n(omega, T) + 1]; approaches gamma_1^0 as T -> 0.
    """
    _check_positive_finite(gamma1_base, "gamma1_base")
    _check_positive_finite(omega, "omega")
    _check_positive_finite(temperature, "temperature")
    x = HBAR * omega / (2.0 * KB * temperature)
    return gamma1_base / math.tanh(x)


def photon_mixing_relation(n_mxc: float, slope: float, n0: float) -> float:
    """Affine thermalization map n_eff = slope * n_mxc + n0.

    ``slope`` is the fraction of the total coupling due to the controlled
    bath and ``n0`` the residual occupation at base temperature.
    """
    if not 0.0 <= slope <= 1.0:
        raise ValueError(f"slope must lie in [0, 1], got {slope}")
    if n0 < 0.0:
        raise ValueError(f"offset occupation must be >= 0, got {n0}")
    if n_mxc < 0.0:
        raise ValueError(f"photon number must be >= 0, got {n_mxc}")
    return slope * n_mxc + n0


def resonator_teff(n_mean: float, omega_r: float) -> float:
    """Effective temperature of a mode with mean occupation n_mean.

    Inverts the Bose-Einstein distribution: T = (hbar*omega/kB)/ln((n+1)/n).
    """
    _check_positive_finite(omega_r, "omega_r")
    if not math.isfinite(n_mean) or n_mean <= 0.0:
        raise ValueError(f"mean photon number must be positive, got {n_mean}")
    return HBAR * omega_r / (KB * math.log1p(1.0 / n_mean))
