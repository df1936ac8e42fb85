"""Device parameter records and canned presets.

The presets mirror the four measured devices: transition frequencies and
charging energies are the measured values; base relaxation rates come from
the measured low-temperature offsets where available (R3-II was not
reported, so a mid-range value is assumed).  All devices share the
aluminium gap Delta/e = 180 uV.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .constants import (
    HBAR,
    ghz_to_rad_per_s,
    mhz_to_joule,
    rate_from_lifetime,
    uev_to_joule,
    us_to_s,
)
from .quasiparticle import JunctionParams, josephson_energy_from_qubit

ALUMINIUM_GAP = uev_to_joule(180.0)


@dataclass(frozen=True)
class DeviceParams:
    """Static qubit parameters, all in internal SI units."""

    omega_ge: float             # g-e transition, rad/s
    omega_ef: float             # e-f transition, rad/s
    gamma1_base: float          # base-temperature g-e relaxation rate, rad/s
    readout_window: float       # readout pulse length, s
    junction: JunctionParams | None = None
    label: str = ""

    def __post_init__(self):
        for name in ("omega_ge", "omega_ef", "gamma1_base"):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0.0:
                raise ValueError(f"{name} must be positive and finite, got {v}")
        if self.readout_window < 0.0:
            raise ValueError("readout_window must be >= 0")

    @property
    def omega_gf(self) -> float:
        """g-f transition frequency, the sum of the two measured transitions."""
        return self.omega_ge + self.omega_ef

    @property
    def anharmonicity(self) -> float:
        """alpha/hbar = omega_ef - omega_ge in rad/s (negative for a transmon)."""
        return self.omega_ef - self.omega_ge

    @property
    def level_energies(self) -> tuple[float, float, float]:
        """Energies of |g>, |e>, |f> in joules with E_g = 0."""
        return (0.0, HBAR * self.omega_ge, HBAR * self.omega_gf)


def _make_device(label: str, f_ge_ghz: float, f_ef_ghz: float, ec_mhz: float,
                 gamma1_base_mhz: float) -> DeviceParams:
    omega_ge = ghz_to_rad_per_s(f_ge_ghz)
    ec = mhz_to_joule(ec_mhz)
    junction = JunctionParams(
        gap=ALUMINIUM_GAP,
        charging_energy=ec,
        josephson_energy=josephson_energy_from_qubit(omega_ge, ec),
    )
    return DeviceParams(
        omega_ge=omega_ge,
        omega_ef=ghz_to_rad_per_s(f_ef_ghz),
        gamma1_base=ghz_to_rad_per_s(gamma1_base_mhz * 1e-3),
        readout_window=us_to_s(2.0),
        junction=junction,
        label=label,
    )


# label: (f_ge GHz, f_ef GHz, E_c/h MHz, gamma1_base/2pi MHz)
_PRESET_TABLE = {
    "R2-I": (6.422, 6.221, 201.0, 0.41),
    "R4-I": (6.649, 6.417, 232.0, 0.19),
    "R3-II": (6.732, 6.513, 219.0, 0.30),   # base rate not reported; assumed
    "Q2-III": (7.042, 6.835, 207.0, 0.37),
}


def preset_names() -> list[str]:
    return list(_PRESET_TABLE)


def preset(name: str) -> DeviceParams:
    """Return a canned device by label (R2-I, R4-I, R3-II, Q2-III)."""
    try:
        args = _PRESET_TABLE[name]
    except KeyError:
        raise ValueError(
            f"unknown device preset {name!r}; available: {', '.join(_PRESET_TABLE)}"
        ) from None
    return _make_device(name, *args)


def fig3_device() -> DeviceParams:
    """R4-I with the base lifetime tau_1(T->0) = 5.5 us used in the
    population-evolution simulations."""
    dev = preset("R4-I")
    return replace(dev, gamma1_base=rate_from_lifetime(us_to_s(5.5)), label="R4-I-fig3")
