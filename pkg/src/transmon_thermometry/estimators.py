"""Nine ratio estimators of the effective qubit temperature.

Three temperature-dependent population ratios,

    A = (p_g - p_e)/(p_g - p_f),
    B = (p_e - p_f)/(p_g - p_e),
    C = (p_e - p_f)/(p_g - p_f),

can each be formed from the six readout outcomes in three ways (methods
1..3) that are all independent of the pure-state responses in the ideal
protocol limit:

    method   A             B             C
      1   (x0-x1)/(y0-y1)  (x2-y2)/(x0-x1)  (x2-y2)/(y0-y1)
      2   (y0-x2)/(x0-y2)  (x1-y1)/(y0-x2)  (x1-y1)/(x0-y2)
      3   (y1-y2)/(x1-x2)  (x0-y0)/(y1-y2)  (x0-y0)/(x1-x2)

For a Boltzmann-distributed qubit the closed forms in temperature are

    A = (1 - exp(-x_ge))/(1 - exp(-x_gf)),
    B = (exp(-x_ge) - exp(-x_gf))/(1 - exp(-x_ge)),
    C = (exp(-x_ge) - exp(-x_gf))/(1 - exp(-x_gf)),

with x = hbar*omega/kB*T, so A_i * B_i = C_i identically.  A decreases
from 1 toward omega_ge/omega_gf with temperature; B and C increase from 0.
Temperatures are recovered by bisecting the strictly monotone closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import HBAR, KB
from .protocol import OutcomeSextuple

FAMILIES = ("A", "B", "C")
METHODS = (1, 2, 3)
KINDS = ("A1", "A2", "A3", "B1", "B2", "B3", "C1", "C2", "C3")

STATUS_OK = "ok"
STATUS_OUT_OF_RANGE = "out_of_range"
STATUS_NON_MONOTONE = "non_monotone_input"

# numerator and denominator outcome pairs per estimator
RATIO_DEFINITIONS: dict[str, tuple[str, str, str, str]] = {
    "A1": ("x0", "x1", "y0", "y1"),
    "A2": ("y0", "x2", "x0", "y2"),
    "A3": ("y1", "y2", "x1", "x2"),
    "B1": ("x2", "y2", "x0", "x1"),
    "B2": ("x1", "y1", "y0", "x2"),
    "B3": ("x0", "y0", "y1", "y2"),
    "C1": ("x2", "y2", "y0", "y1"),
    "C2": ("x1", "y1", "x0", "y2"),
    "C3": ("x0", "y0", "x1", "x2"),
}


class EstimateError(ValueError):
    """Estimator failure carrying a machine-readable status flag."""

    status = STATUS_OUT_OF_RANGE


class OutOfRangeError(EstimateError):
    """Ratio beyond its infinite-temperature limit or ill-conditioned."""

    status = STATUS_OUT_OF_RANGE


class NonMonotoneInputError(EstimateError):
    """Ratio implying inverted population ordering (p_e < p_f or p_g < p_e)."""

    status = STATUS_NON_MONOTONE


@dataclass(frozen=True)
class RatioKind:
    """One of the nine estimators: family A/B/C, method 1/2/3."""

    family: str
    method: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method}")

    @property
    def key(self) -> str:
        return f"{self.family}{self.method}"

    @classmethod
    def from_key(cls, key: str) -> "RatioKind":
        if len(key) != 2 or key not in KINDS:
            raise ValueError(f"unknown estimator key {key!r}")
        return cls(key[0], int(key[1]))


@dataclass(frozen=True)
class Estimate:
    """One estimator's ratio value, inverted temperature, and status flag."""

    ratio: float
    temperature: float
    status: str


@dataclass(frozen=True)
class EstimateReport:
    """All nine ratio values and temperatures, with per-estimator statuses."""

    entries: dict[str, Estimate]

    def temperature(self, key: str) -> float:
        return self.entries[key].temperature

    def ratio(self, key: str) -> float:
        return self.entries[key].ratio

    def status(self, key: str) -> str:
        return self.entries[key].status

    def ok_temperatures(self) -> dict[str, float]:
        return {k: v.temperature for k, v in self.entries.items()
                if v.status == STATUS_OK}


def ratio_from_outcomes(kind: RatioKind, o: OutcomeSextuple,
                        denominator_floor: float = 1e-12) -> float:
    """The estimator's quotient of outcome differences.

    The denominator must exceed ``denominator_floor`` times the overall
    outcome spread; below that the two populations it separates coincide
    (temperature too high for this method) and :class:`OutOfRangeError`
    is raised.
    """
    values = o.as_dict()
    n1, n2, d1, d2 = RATIO_DEFINITIONS[kind.key]
    numerator = values[n1] - values[n2]
    denominator = values[d1] - values[d2]
    scale = max(values.values()) - min(values.values())
    if abs(denominator) <= denominator_floor * max(scale, 1e-300):
        raise OutOfRangeError(
            f"{kind.key}: denominator {d1}-{d2} = {denominator:.3e} below floor"
        )
    return numerator / denominator


def _exponents_at(temperature: float, omega_ge: float, omega_gf: float) -> tuple[float, float]:
    if temperature <= 0.0:
        raise ValueError("temperature must be positive")
    if not 0.0 < omega_ge < omega_gf:
        raise ValueError("need 0 < omega_ge < omega_gf")
    e_ge = math.exp(-HBAR * omega_ge / (KB * temperature))
    e_gf = math.exp(-HBAR * omega_gf / (KB * temperature))
    return e_ge, e_gf


def ratio_closed_form(family: str, temperature: float,
                      omega_ge: float, omega_gf: float) -> float:
    """Boltzmann value of ratio family A, B or C at the given temperature."""
    e_ge, e_gf = _exponents_at(temperature, omega_ge, omega_gf)
    if family == "A":
        return (1.0 - e_ge) / (1.0 - e_gf)
    if family == "B":
        return (e_ge - e_gf) / (1.0 - e_ge)
    if family == "C":
        return (e_ge - e_gf) / (1.0 - e_gf)
    raise ValueError(f"unknown family {family!r}")


def low_T_approximation(family: str, temperature: float, omega_ge: float) -> float:
    """Leading low-temperature behavior: A ~ 1 - exp(-x), B ~ C ~ exp(-x)."""
    if temperature <= 0.0:
        raise ValueError("temperature must be positive")
    if omega_ge <= 0.0:
        raise ValueError("omega_ge must be positive")
    boltzmann = math.exp(-HBAR * omega_ge / (KB * temperature))
    if family == "A":
        return 1.0 - boltzmann
    if family in ("B", "C"):
        return boltzmann
    raise ValueError(f"unknown family {family!r}")


def attainable_range(family: str, omega_ge: float, omega_gf: float) -> tuple[float, float]:
    """Open interval of ratio values reached for temperatures in (0, inf).

    The infinite-temperature suprema follow from expanding the closed forms:
    A -> omega_ge/omega_gf, B -> omega_ef/omega_ge, C -> omega_ef/omega_gf.
    """
    if not 0.0 < omega_ge < omega_gf:
        raise ValueError("need 0 < omega_ge < omega_gf")
    omega_ef = omega_gf - omega_ge
    if family == "A":
        return (omega_ge / omega_gf, 1.0)
    if family == "B":
        return (0.0, omega_ef / omega_ge)
    if family == "C":
        return (0.0, omega_ef / omega_gf)
    raise ValueError(f"unknown family {family!r}")


T_BISECT_LOW = 1e-4   # kelvin
T_BISECT_HIGH = 10.0  # kelvin
BISECT_ITERATIONS = 80
RATIO_RESIDUAL_TOL = 1e-10


def invert_ratio(family: str, value: float, omega_ge: float, omega_gf: float) -> float:
    """Temperature at which the family's closed form equals ``value``.

    Bisection on [0.1 mK, 10 K] exploiting strict monotonicity.  Values at or
    beyond the infinite-temperature limit raise :class:`OutOfRangeError`;
    values on the wrong side of the zero-temperature limit imply inverted
    populations and raise :class:`NonMonotoneInputError`.  Out-of-range
    values are reported, never clamped.
    """
    low, high = attainable_range(family, omega_ge, omega_gf)
    if not math.isfinite(value):
        raise OutOfRangeError(f"{family}: non-finite ratio value")
    if family == "A":
        if value >= high:
            raise OutOfRangeError(
                f"A = {value} at or above the zero-temperature supremum 1")
        if value <= low:
            raise OutOfRangeError(
                f"A = {value} at or below the infinite-temperature limit {low:.6f}")
    else:
        if value <= low:
            raise NonMonotoneInputError(
                f"{family} = {value} <= 0 implies p_e < p_f (inverted populations)")
        if value >= high:
            raise OutOfRangeError(
                f"{family} = {value} at or above the infinite-temperature limit {high:.6f}")

    t_lo, t_hi = T_BISECT_LOW, T_BISECT_HIGH
    f_lo = ratio_closed_form(family, t_lo, omega_ge, omega_gf) - value
    f_hi = ratio_closed_form(family, t_hi, omega_ge, omega_gf) - value
    if (f_lo <= 0.0) == (f_hi <= 0.0):
        # attainable in principle but beyond the inversion bracket
        raise OutOfRangeError(
            f"{family} = {value} corresponds to a temperature outside"
            f" [{T_BISECT_LOW * 1e3:g} mK, {T_BISECT_HIGH:g} K]"
        )
    for _ in range(BISECT_ITERATIONS):
        t_mid = 0.5 * (t_lo + t_hi)
        f_mid = ratio_closed_form(family, t_mid, omega_ge, omega_gf) - value
        if (f_lo <= 0.0) == (f_mid <= 0.0):
            t_lo, f_lo = t_mid, f_mid
        else:
            t_hi = t_mid
    t = 0.5 * (t_lo + t_hi)
    residual = ratio_closed_form(family, t, omega_ge, omega_gf) - value
    if abs(residual) > RATIO_RESIDUAL_TOL:
        raise ArithmeticError(
            f"bisection residual {residual:.3e} for {family} = {value};"
            " ratio too close to an attainable-range boundary"
        )
    return t


def full_report(o: OutcomeSextuple, qubit,
                denominator_floor: float = 1e-12) -> EstimateReport:
    """Evaluate all nine estimators, flagging failures instead of aborting."""
    entries: dict[str, Estimate] = {}
    for key in KINDS:
        kind = RatioKind.from_key(key)
        try:
            ratio = ratio_from_outcomes(kind, o, denominator_floor)
        except EstimateError as err:
            entries[key] = Estimate(math.nan, math.nan, err.status)
            continue
        try:
            temperature = invert_ratio(kind.family, ratio,
                                       qubit.omega_ge, qubit.omega_gf)
        except EstimateError as err:
            entries[key] = Estimate(ratio, math.nan, err.status)
            continue
        entries[key] = Estimate(ratio, temperature, STATUS_OK)
    return EstimateReport(entries=entries)
