"""Quasiparticle relaxation and dephasing channels of a transmon junction.

Thermally excited quasiparticles tunneling across the junction relax the
qubit at a rate

    gamma_1^qp = (1/pi) (omega_p^2/omega_ge) { x_qp sqrt(2 Delta / hbar omega_ge)
                 + 4 exp(-Delta/kB T) cosh(hbar omega_ge / 2 kB T)
                   K_0(hbar omega_ge / 2 kB T) },

with plasma frequency omega_p = sqrt(8 E_J E_c)/hbar, equilibrium density
x_qp = sqrt(2 pi kB T / Delta) exp(-Delta/kB T) and the modified Bessel
function K_0.  Quasiparticle tunneling also dephases the qubit, and
quasiparticles trapped in Andreev bound states produce Josephson-frequency
fluctuations with a much stronger dephasing contribution.

All rates returned here are angular (rad/s) and convert to lifetimes via
tau = 2*pi/gamma (see constants.rate_to_per_second).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import G_K, HBAR, KB

EULER_GAMMA = 0.5772156649015329

# Chebyshev coefficients of exp(x)*sqrt(x)*K0(x) on t = 4/x - 1, x in [2, inf).
# Generated from 50-digit reference values at Chebyshev nodes; max relative
# error below 5e-16 on x in [2, 1e6].
_K0_LARGE_CHEB = np.array([
    1.2201515410329777,
    -0.031448101311964516,
    0.0015698838857300316,
    -0.0001284954958162581,
    1.3949813718859602e-05,
    -1.8317555227473494e-06,
    2.7668136393147163e-07,
    -4.660489900398527e-08,
    8.574034002408438e-09,
    -1.6975345242651156e-09,
    3.577397231052668e-10,
    -7.957491630384088e-11,
    1.8559484541203874e-11,
    -4.5146480821397994e-12,
    1.1403311192028265e-12,
    -2.9801061508148797e-13,
    8.028135013299423e-14,
    -2.2317009440208734e-14,
    6.3293568178134414e-15,
    -1.84723852900842e-15,
    5.629988378201017e-16,
    -1.6008745915025426e-16,
    6.571839462741338e-17,
])


@dataclass(frozen=True)
class JunctionParams:
    """Static tunnel-junction parameters.

    ``josephson_energy`` may be left None and derived from the qubit
    frequency with :func:`josephson_energy_from_qubit`.  The subgap
    transparency factor zeta^-1 is only known as a range (1e3 to 1e5); its
    default is the geometric midpoint.
    """

    gap: float                              # superconducting gap Delta, J
    charging_energy: float                  # E_c, J
    josephson_energy: float | None = None   # E_J, J
    normal_resistance: float = 5.0e3        # R_n, ohm
    subgap_transparency_inverse: float = 1.0e4  # zeta^-1, dimensionless

    def __post_init__(self):
        for name in ("gap", "charging_energy", "normal_resistance",
                     "subgap_transparency_inverse"):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0.0:
                raise ValueError(f"{name} must be positive and finite, got {v}")
        if self.josephson_energy is not None:
            if not math.isfinite(self.josephson_energy) or self.josephson_energy <= 0.0:
                raise ValueError("josephson_energy must be positive and finite")
            ratio = self.josephson_energy / self.charging_energy
            if ratio < 20.0:
                warnings.warn(
                    f"E_J/E_c = {ratio:.1f} is below the transmon regime (>= 20)",
                    stacklevel=2,
                )


def josephson_energy_from_qubit(omega_ge: float, charging_energy: float) -> float:
    """Josephson energy implied by hbar*omega_ge = sqrt(8 E_J E_c) - E_c."""
    if omega_ge <= 0.0 or charging_energy <= 0.0:
        raise ValueError("omega_ge and charging_energy must be positive")
    return (HBAR * omega_ge + charging_energy) ** 2 / (8.0 * charging_energy)


def plasma_frequency(params: JunctionParams) -> float:
    """Junction plasma frequency omega_p = sqrt(8 E_J E_c)/hbar in rad/s."""
    if params.josephson_energy is None:
        raise ValueError(
            "josephson_energy is not set; derive it with josephson_energy_from_qubit"
        )
    return math.sqrt(8.0 * params.josephson_energy * params.charging_energy) / HBAR


def xqp_equilibrium(temperature: float, gap: float) -> float:
    """Equilibrium quasiparticle density x_qp = sqrt(2 pi kB T/Delta) exp(-Delta/kB T)."""
    if temperature <= 0.0 or gap <= 0.0:
        raise ValueError("temperature and gap must be positive")
    u = gap / (KB * temperature)
    return math.sqrt(2.0 * math.pi / u) * math.exp(-u)


def bessel_k0(x: float) -> float:
    """Modified Bessel function of the second kind, order zero.

    For x <= 2 the ascending series
    K_0 = -(ln(x/2) + gamma) I_0(x) + sum_k H_k (x^2/4)^k / (k!)^2
    is summed to machine precision; for x > 2 a Chebyshev expansion of
    exp(x)*sqrt(x)*K_0(x) in 4/x is evaluated.  Relative accuracy is below
    1e-14 across both branches.
    """
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"bessel_k0 requires x > 0, got {x}")
    if x <= 2.0:
        z = 0.25 * x * x
        i0 = 1.0
        term = 1.0
        harmonic = 0.0
        series = 0.0
        for k in range(1, 60):
            term *= z / (k * k)
            harmonic += 1.0 / k
            i0 += term
            series += term * harmonic
            if term * (harmonic + 1.0) < 1e-19 * (i0 + series):
                break
        return -(math.log(0.5 * x) + EULER_GAMMA) * i0 + series
    t = 4.0 / x - 1.0
    scaled = float(np.polynomial.chebyshev.chebval(t, _K0_LARGE_CHEB))
    return scaled * math.exp(-x) / math.sqrt(x)


def gamma1_qp(qubit, junction: JunctionParams, temperature: float) -> float:
    """Quasiparticle-induced relaxation rate of the g-e transition, rad/s.

    Both terms (direct tunneling proportional to x_qp, and the thermal
    K_0 term) are individually non-negative and vanish exponentially as
    T -> 0.
    """
    if temperature <= 0.0:
        raise ValueError("temperature must be positive")
    omega_ge = qubit.omega_ge
    omega_p = plasma_frequency(junction)
    hw = HBAR * omega_ge
    u = junction.gap / (KB * temperature)
    arg = hw / (2.0 * KB * temperature)
    tunneling = xqp_equilibrium(temperature, junction.gap) * math.sqrt(2.0 * junction.gap / hw)
    thermal = 4.0 * math.exp(-u) * math.cosh(arg) * bessel_k0(arg)
    return (omega_p ** 2 / omega_ge) / math.pi * (tunneling + thermal)


def gamma_phi_qp_tunneling(junction: JunctionParams, temperature: float) -> float:
    """Pure dephasing rate from tunneling of equilibrium quasiparticles, rad/s.

    gamma_phi = (E_c/pi*hbar) (kB T/Delta) exp(-Delta/kB T); negligible below
    ~300 mK for aluminium junctions.
    """
    if temperature <= 0.0:
        raise ValueError("temperature must be positive")
    u = junction.gap / (KB * temperature)
    return junction.charging_energy / (math.pi * HBAR) / u * math.exp(-u)


def gamma_phi_andreev(qubit, junction: JunctionParams, temperature: float) -> float:
    """Dephasing rate from quasiparticles in Andreev bound states, rad/s.

    gamma_phi ~ 4 pi (omega_p^2/omega_ge) sqrt(x_qp^A / N_e) with
    x_qp^A = exp(-Delta/kB T) and N_e = zeta^-1 g_T/(2 g_K) the effective
    number of conduction channels.  This is an order-of-magnitude relation;
    the stated prefactor is used as-is, so treat results as estimates.
    """
    if temperature <= 0.0:
        raise ValueError("temperature must be positive")
    omega_p = plasma_frequency(junction)
    g_t = 1.0 / junction.normal_resistance
    n_e = junction.subgap_transparency_inverse * g_t / (2.0 * G_K)
    if n_e <= 0.0:
        raise ValueError("effective channel number must be positive")
    x_a = math.exp(-junction.gap / (KB * temperature))
    return 4.0 * math.pi * (omega_p ** 2 / qubit.omega_ge) * math.sqrt(x_a / n_e)


def dephasing_from_decoherence(gamma2: float, gamma1: float) -> float:
    """Pure dephasing rate gamma_phi = gamma_2 - gamma_1/2 from fitted decays.

    gamma_2 below gamma_1/2 is unphysical (it would mean negative pure
    dephasing) and signals a bad fit; equality is the lifetime-limited case
    and returns exactly zero.
    """
    if not math.isfinite(gamma2) or not math.isfinite(gamma1) or gamma1 < 0.0:
        raise ValueError("rates must be finite and gamma1 >= 0")
    if gamma2 < 0.5 * gamma1:
        raise ValueError(
            f"gamma2 = {gamma2} below gamma1/2 = {0.5 * gamma1}; unphysical fit"
        )
    return gamma2 - 0.5 * gamma1
