"""Time evolution of the three-level population vector.

Only sequential decay and excitation between adjacent levels are modeled:

    dp_f/dt = p_e G_ef_up - p_f G_ef_down
    dp_e/dt = p_g G_ge_up + p_f G_ef_down - p_e (G_ge_down + G_ef_up)
    dp_g/dt = p_e G_ge_down - p_g G_ge_up

where the G's are the per-second forms of the four angular rates in a
:class:`RateSet`.  The generator has eigenvalues 0 > alpha_0 > alpha_1, so
every trajectory is a biexponential relaxing to the detailed-balance steady
state:

    p_i(t) = zeta_i exp(alpha_0 t) + eta_i exp(alpha_1 t) + xi_i.

``evolve_analytic`` evaluates this closed form; ``evolve_numeric`` is the
independent fixed-step RK4 route used to cross-check it.  Pi-pulses enter as
instantaneous doubly stochastic maps on the populations.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .bath import bose_einstein
from .constants import rate_to_per_second
from .state import PopulationVector

DEGENERACY_RTOL = 1e-9


class DegenerateExponentsError(ValueError):
    """Raised when the two decay exponents coincide and the closed form is ill-posed."""


@dataclass(frozen=True)
class RateSet:
    """The four transition rates of the g-e and e-f channels, rad/s (angular)."""

    ge_up: float
    ge_down: float
    ef_up: float
    ef_down: float

    def __post_init__(self):
        for name in ("ge_up", "ge_down", "ef_up", "ef_down"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0.0:
                raise ValueError(f"rate {name} must be finite and >= 0, got {v}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.ge_up, self.ge_down, self.ef_up, self.ef_down)

    @property
    def gamma1_ge(self) -> float:
        """Total angular relaxation rate of the g-e transition."""
        return self.ge_up + self.ge_down

    @property
    def gamma1_ef(self) -> float:
        return self.ef_up + self.ef_down


@dataclass(frozen=True)
class EvolutionCoefficients:
    """Closed-form solution pieces: decay exponents (1/s) and three 3-vectors.

    The exponents are per-second quantities (they multiply wall-clock time
    directly); they derive from the angular rates through the tau = 2*pi/gamma
    convention.  zeta + eta + xi reproduces the initial populations, and xi is
    the steady state.
    """

    alpha0: float
    alpha1: float
    zeta: np.ndarray
    eta: np.ndarray
    xi: np.ndarray


def rate_set(qubit, temperature: float,
             extra_relaxation: tuple[float, float] = (0.0, 0.0),
             ef_rate_factor: float = 2.0) -> RateSet:
    """Thermal-bath rates for both transitions, plus extra relaxation channels.

    The bath part obeys detailed balance at ``temperature`` for each
    transition, with the e-f base rate ``ef_rate_factor`` times the g-e one
    (default 2, the transmon matrix-element ratio, equivalent to
    tau_1_ef = tau_1_ge / 2).  ``extra_relaxation`` adds unbalanced angular
    rates (e.g. the quasiparticle channel) to the two downward rates only.
    """
    if temperature <= 0.0:
        raise ValueError("temperature must be positive")
    extra_ge, extra_ef = extra_relaxation
    if extra_ge < 0.0 or extra_ef < 0.0:
        raise ValueError("extra relaxation rates must be >= 0")
    n_ge = bose_einstein(qubit.omega_ge, temperature)
    n_ef = bose_einstein(qubit.omega_ef, temperature)
    g_ge = qubit.gamma1_base
    g_ef = ef_rate_factor * qubit.gamma1_base
    return RateSet(
        ge_up=g_ge * n_ge,
        ge_down=g_ge * (n_ge + 1.0) + extra_ge,
        ef_up=g_ef * n_ef,
        ef_down=g_ef * (n_ef + 1.0) + extra_ef,
    )


def steady_state(rates: RateSet) -> PopulationVector:
    """Stationary populations xi = (1, r_ge, r_ge*r_ef)/Z with r = up/down.

    Z = 1 + r_ge + r_ge*r_ef is the partition-function normalization; for
    detailed-balance rates this is exactly the Boltzmann distribution.
    """
    if rates.ge_down <= 0.0 or rates.ef_down <= 0.0:
        raise ValueError("down rates must be positive for a steady state")
    r_ge = rates.ge_up / rates.ge_down
    r_ef = rates.ef_up / rates.ef_down
    z = 1.0 + r_ge + r_ge * r_ef
    return PopulationVector(1.0 / z, r_ge / z, r_ge * r_ef / z)


def _generator(rates: RateSet) -> np.ndarray:
    """Per-second generator matrix L with dp/dt = L p, ordered (g, e, f)."""
    gu, gd, eu, ed = (rate_to_per_second(v) for v in rates.as_tuple())
    return np.array([
        [-gu, gd, 0.0],
        [gu, -(gd + eu), ed],
        [0.0, eu, -ed],
    ])


def _exponents(rates: RateSet) -> tuple[float, float]:
    """The two nonzero eigenvalues from the characteristic quadratic.

    alpha_{0,1} = (-S +/- sqrt(S^2 - 4P))/2 with S the sum of the four
    per-second rates and P = Gge_down*Gef_down + Gge_up*Gef_up +
    Gge_up*Gef_down (Vieta: alpha_0*alpha_1 = P, alpha_0+alpha_1 = -S).
    """
    gu, gd, eu, ed = (rate_to_per_second(v) for v in rates.as_tuple())
    s = gu + gd + eu + ed
    p = gd * ed + gu * eu + gu * ed
    disc = s * s - 4.0 * p
    root = math.sqrt(disc) if disc > 0.0 else 0.0
    return 0.5 * (-s + root), 0.5 * (-s - root)


def _eigenvector(generator: np.ndarray, alpha: float) -> np.ndarray:
    """Null vector of (L - alpha*I) via the largest cross product of two rows."""
    m = generator - alpha * np.eye(3)
    candidates = [
        np.cross(m[0], m[1]),
        np.cross(m[0], m[2]),
        np.cross(m[1], m[2]),
    ]
    return max(candidates, key=lambda v: float(np.abs(v).max()))


def evolution_coefficients(p0: PopulationVector, rates: RateSet) -> EvolutionCoefficients:
    """Biexponential amplitudes for the trajectory starting at ``p0``.

    Raises :class:`DegenerateExponentsError` when the two exponents agree to
    within ``DEGENERACY_RTOL`` relative; callers fall back to the numerical
    integrator in that measure-zero configuration.
    """
    alpha0, alpha1 = _exponents(rates)
    if abs(alpha0 - alpha1) < DEGENERACY_RTOL * abs(alpha1):
        raise DegenerateExponentsError(
            f"decay exponents are degenerate: alpha0={alpha0}, alpha1={alpha1}"
        )
    xi = steady_state(rates).as_array()
    gen = _generator(rates)
    v0 = _eigenvector(gen, alpha0)
    v1 = _eigenvector(gen, alpha1)
    basis = np.column_stack([v0, v1])
    coeff, *_ = np.linalg.lstsq(basis, p0.as_array() - xi, rcond=None)
    return EvolutionCoefficients(
        alpha0=alpha0,
        alpha1=alpha1,
        zeta=coeff[0] * v0,
        eta=coeff[1] * v1,
        xi=xi,
    )


def _is_frozen(rates: RateSet) -> bool:
    return all(v == 0.0 for v in rates.as_tuple())


def evolve_analytic(p0: PopulationVector, rates: RateSet, t: float) -> PopulationVector:
    """Populations after free evolution for ``t`` seconds, closed form."""
    if t < 0.0:
        raise ValueError("evolution time must be >= 0")
    if t == 0.0 or _is_frozen(rates):
        return p0
    try:
        c = evolution_coefficients(p0, rates)
    except DegenerateExponentsError:
        warnings.warn("degenerate decay exponents; using numerical evolution",
                      stacklevel=2)
        return _evolve_numeric_auto(p0, rates, t)
    out = c.zeta * math.exp(c.alpha0 * t) + c.eta * math.exp(c.alpha1 * t) + c.xi
    return PopulationVector.from_array(out)


def _rk4_step_matrix(generator: np.ndarray, dt: float) -> np.ndarray:
    """One-step propagator of classical RK4; for this linear system the four
    stages collapse exactly to the degree-4 Taylor polynomial of exp(L*dt)."""
    a = generator * dt
    a2 = a @ a
    return np.eye(3) + a + a2 / 2.0 + (a2 @ a) / 6.0 + (a2 @ a2) / 24.0


def evolve_numeric(p0: PopulationVector, rates: RateSet, t: float, dt: float) -> PopulationVector:
    """Fixed-step classical RK4 integration of the rate equations.

    ``dt`` must resolve the fastest per-second rate (dt * max_rate < 0.1).
    The n repeated applications of the one-step map are evaluated by binary
    exponentiation, which is algebraically identical to sequential stepping
    and keeps conservation drift at rounding level even for 1e8 steps.
    """
    if t < 0.0:
        raise ValueError("evolution time must be >= 0")
    if dt <= 0.0:
        raise ValueError("step size must be positive")
    if t == 0.0 or _is_frozen(rates):
        return p0
    max_rate = max(rate_to_per_second(v) for v in rates.as_tuple())
    if dt * max_rate >= 0.1:
        raise ValueError(
            f"step {dt} too coarse for max per-second rate {max_rate:.3e};"
            " need dt * rate < 0.1"
        )
    gen = _generator(rates)
    n = int(math.floor(t / dt))
    remainder = t - n * dt
    out = p0.as_array()
    if n > 0:
        out = np.linalg.matrix_power(_rk4_step_matrix(gen, dt), n) @ out
    if remainder > 0.0:
        out = _rk4_step_matrix(gen, remainder) @ out
    return PopulationVector.from_array(out)


def _evolve_numeric_auto(p0: PopulationVector, rates: RateSet, t: float) -> PopulationVector:
    max_rate = max(rate_to_per_second(v) for v in rates.as_tuple())
    if max_rate == 0.0:
        return p0
    return evolve_numeric(p0, rates, t, 0.02 / max_rate)


def average_populations(p0: PopulationVector, rates: RateSet, duration: float) -> PopulationVector:
    """Time-averaged populations (1/T) integral_0^T p(t) dt, closed form.

    Each biexponential term averages to zeta_i (exp(alpha T) - 1)/(alpha T).
    Degenerate-exponent configurations use a scaling-and-squaring evaluation
    of the averaged propagator instead.
    """
    if duration < 0.0:
        raise ValueError("duration must be >= 0")
    if duration == 0.0 or _is_frozen(rates):
        return p0
    try:
        c = evolution_coefficients(p0, rates)
    except DegenerateExponentsError:
        warnings.warn("degenerate decay exponents; averaging numerically",
                      stacklevel=2)
        return _average_numeric(p0, rates, duration)
    out = (c.zeta * _expm1_over_x(c.alpha0 * duration)
           + c.eta * _expm1_over_x(c.alpha1 * duration)
           + c.xi)
    return PopulationVector.from_array(out)


def _expm1_over_x(x: float) -> float:
    if abs(x) < 1e-12:
        return 1.0 + 0.5 * x
    return math.expm1(x) / x


def _average_numeric(p0: PopulationVector, rates: RateSet, duration: float) -> PopulationVector:
    """Averaged propagator by doubling: avg over [0, 2T] = (I + P(T)) avg(T)/2."""
    gen = _generator(rates)
    max_rate = max(rate_to_per_second(v) for v in rates.as_tuple())
    doublings = max(0, math.ceil(math.log2(max(duration * max_rate, 1e-30) / 0.01)))
    h = duration / (1 << doublings)
    a = gen * h
    a2 = a @ a
    # phi_1 series: average of exp(L t) over one base step
    avg = np.eye(3) + a / 2.0 + a2 / 6.0 + (a2 @ a) / 24.0 + (a2 @ a2) / 120.0
    prop = _rk4_step_matrix(gen, h)
    for _ in range(doublings):
        avg = 0.5 * (np.eye(3) + prop) @ avg
        prop = prop @ prop
    return PopulationVector.from_array(avg @ p0.as_array())


def pulse_matrix(kind: str, efficiency: float) -> np.ndarray:
    """Doubly stochastic population map of a pi-pulse with finite efficiency."""
    if not 0.0 <= efficiency <= 1.0:
        raise ValueError(f"pulse efficiency must lie in [0, 1], got {efficiency}")
    d = efficiency
    if kind == "ge":
        return np.array([
            [1.0 - d, d, 0.0],
            [d, 1.0 - d, 0.0],
            [0.0, 0.0, 1.0],
        ])
    if kind == "ef":
        return np.array([
            [1.0, 0.0, 0.0],
            [0.0, 1.0 - d, d],
            [0.0, d, 1.0 - d],
        ])
    raise ValueError(f"unknown pulse kind {kind!r}; expected 'ge' or 'ef'")


def apply_pulse(p: PopulationVector, kind: str, efficiency: float = 1.0) -> PopulationVector:
    """Swap the populations of one adjacent level pair with probability
    ``efficiency``, leaving the third level untouched."""
    out = pulse_matrix(kind, efficiency) @ p.as_array()
    return PopulationVector.from_array(out)
