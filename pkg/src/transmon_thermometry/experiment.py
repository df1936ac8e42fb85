"""Synthetic end-to-end experiments.

Temperature sweeps of the full measurement chain (thermal initialization,
pulse sequences, finite readout, nine-way temperature extraction, error
budget), seeded Monte Carlo shot noise, and the weighted linear fits of the
thermalization analysis.

Reproducibility contract: every stochastic quantity derives from an explicit
64-bit master seed through numpy's PCG64 generator; sweep points use
independent substreams keyed by (master seed, point index), so results are
bit-identical regardless of evaluation order.  Gaussians use numpy's
ziggurat-based ``Generator.normal``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .bath import BathSpec, bath_rates, bose_einstein
from .device import DeviceParams
from .dynamics import RateSet, apply_pulse, steady_state
from .errors import ErrorReport, NoiseModel, error_report
from .estimators import EstimateReport, full_report
from .protocol import (
    DEFAULT_RESPONSES,
    OUTCOME_LABELS,
    OutcomeSextuple,
    ProtocolConfig,
    PulseSequence,
    PureStateResponses,
    sequence_populations,
    simulate_protocol,
)
from .quasiparticle import gamma1_qp
from .state import PopulationVector


@dataclass(frozen=True)
class SweepRecord:
    """One sweep point: configuration inputs and every derived result."""

    temperature: float                  # set temperature, K
    rates: RateSet
    populations: PopulationVector       # initial thermal populations
    outcomes: OutcomeSextuple
    estimates: EstimateReport
    errors: ErrorReport | None
    seed: int | None

    @property
    def gamma1_ge(self) -> float:
        return self.rates.gamma1_ge


@dataclass(frozen=True)
class FitResult:
    """Weighted-least-squares line fit with parameter standard errors."""

    slope: float
    offset: float
    slope_error: float
    offset_error: float


def thermal_rate_set(omega_ge: float, omega_ef: float, baths,
                     ef_rate_factor: float = 2.0,
                     extra_relaxation: tuple[float, float] = (0.0, 0.0)) -> RateSet:
    """Multi-bath transition rates for both transitions.

    Each bath contributes detailed-balance rates at its own temperature; the
    e-f coupling is ``ef_rate_factor`` times the g-e one per bath.  Extra
    unbalanced relaxation (quasiparticles) adds to the two downward rates.
    """
    ge_up = ge_down = ef_up = ef_down = 0.0
    for bath in baths:
        up, down = bath_rates(bath, omega_ge)
        ge_up += up
        ge_down += down
        up, down = bath_rates(BathSpec(bath.temperature,
                                       ef_rate_factor * bath.base_rate), omega_ef)
        ef_up += up
        ef_down += down
    return RateSet(ge_up=ge_up, ge_down=ge_down + extra_relaxation[0],
                   ef_up=ef_up, ef_down=ef_down + extra_relaxation[1])


def mc_outcomes(p: PopulationVector, phi: PureStateResponses, sigma_voltage: float,
                shots: int, seed, rates: RateSet | None = None,
                config: ProtocolConfig | None = None
                ) -> tuple[OutcomeSextuple, dict[str, float]]:
    """Monte Carlo means and unbiased variances of the six sequences.

    Each shot projects the qubit onto a level drawn from the post-sequence
    populations and adds Gaussian voltage noise.  With ``rates`` and
    ``config`` given, the per-sequence populations include finite pulse
    efficiency and inter-pulse relaxation; otherwise the ideal permutations
    are sampled.  Sampling is projective (populations at the start of the
    readout window); identical seeds give bit-identical results.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if sigma_voltage < 0.0:
        raise ValueError("sigma_voltage must be >= 0")
    rng = np.random.default_rng(seed)
    phi_arr = phi.as_array()
    means: dict[str, float] = {}
    variances: dict[str, float] = {}
    for label in OUTCOME_LABELS:
        seq = PulseSequence.from_label(label)
        if rates is not None and config is not None:
            base = sequence_populations(seq, p, rates, config)
        else:
            base = p
            for kind in seq.kinds:
                base = apply_pulse(base, kind, 1.0)
        weights = np.clip(base.as_array(), 0.0, None)
        weights = weights / weights.sum()
        levels = rng.choice(3, size=shots, p=weights)
        values = phi_arr[levels]
        if sigma_voltage > 0.0:
            values = values + rng.normal(0.0, sigma_voltage, size=shots)
        means[label] = float(values.mean())
        variances[label] = float(values.var(ddof=1)) if shots > 1 else 0.0
    return OutcomeSextuple(**means), variances


def _point_seed(master_seed, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=master_seed, spawn_key=(index,))


def build_rates(device: DeviceParams, temperature: float,
                extra_baths=(), include_quasiparticle: bool = True,
                ef_rate_factor: float = 2.0) -> tuple[RateSet, RateSet]:
    """(full rates, thermal-only rates) at one sweep temperature.

    The thermal part couples the device's base rate to a bath at the set
    temperature plus any fixed extra baths.  The quasiparticle channel is an
    unbalanced addition to the downward rates, with the e-f contribution
    scaled like the base coupling.
    """
    baths = [BathSpec(temperature, device.gamma1_base), *extra_baths]
    if include_quasiparticle:
        if device.junction is None:
            raise ValueError("device has no junction parameters for the"
                             " quasiparticle channel")
        qp = gamma1_qp(device, device.junction, temperature)
        extra = (qp, ef_rate_factor * qp)
    else:
        extra = (0.0, 0.0)
    thermal = thermal_rate_set(device.omega_ge, device.omega_ef, baths,
                               ef_rate_factor)
    full = thermal_rate_set(device.omega_ge, device.omega_ef, baths,
                            ef_rate_factor, extra_relaxation=extra)
    return full, thermal


def sweep(temperatures, device: DeviceParams, protocol: ProtocolConfig,
          phi: PureStateResponses = DEFAULT_RESPONSES,
          noise: NoiseModel | None = None, seed=None,
          extra_baths=(), include_quasiparticle: bool = True,
          ef_rate_factor: float = 2.0, error_column: int = 1,
          t_meas: float = 29.0) -> list[SweepRecord]:
    """Run the full measurement chain over a temperature grid.

    Per point: build the transition rates (thermal baths plus quasiparticle
    channel), initialize the qubit in the thermal steady state of the bath
    part, simulate the six sequences (deterministically, or via Monte Carlo
    when a noise model with shot sampling is given), extract all nine
    temperature estimates, and propagate the error budget.  Records are
    emitted in input order; estimator failures are flagged per point, never
    fatal.
    """
    records: list[SweepRecord] = []
    for index, temperature in enumerate(temperatures):
        rates, thermal = build_rates(device, temperature, extra_baths,
                                     include_quasiparticle, ef_rate_factor)
        p0 = steady_state(thermal)
        stochastic = noise is not None and (noise.sigma_voltage > 0.0
                                            or noise.shots > 1)
        if stochastic:
            outcomes, _variances = mc_outcomes(
                p0, phi, noise.sigma_voltage, noise.shots,
                _point_seed(seed if seed is not None else 0, index),
                rates, protocol)
        else:
            outcomes = simulate_protocol(p0, rates, phi, protocol)
        estimates = full_report(outcomes, device)
        err = error_report(p0, phi, noise or NoiseModel(), device.omega_ge,
                           temperature, column=error_column, t_meas=t_meas)
        records.append(SweepRecord(
            temperature=temperature,
            rates=rates,
            populations=p0,
            outcomes=outcomes,
            estimates=estimates,
            errors=err,
            seed=None if seed is None else index,
        ))
    return records


def efficiency_error_surface(temperature: float, efficiencies_ge, efficiencies_ef,
                             device: DeviceParams, protocol: ProtocolConfig,
                             phi: PureStateResponses = DEFAULT_RESPONSES,
                             extra_baths=(), include_quasiparticle: bool = True,
                             ef_rate_factor: float = 2.0) -> np.ndarray:
    """Mean relative temperature error versus the two pulse efficiencies.

    Entry [i, j] averages (T_est(d_ge_i, d_ef_j) - T_ref)/T_ref over the nine
    estimators, where T_ref is the same estimator's value with ideal pulses
    under otherwise identical conditions.  Estimators flagged in either run
    are excluded from the average; the (1, 1) entry is exactly zero.
    """
    rates, thermal = build_rates(device, temperature, extra_baths,
                                 include_quasiparticle, ef_rate_factor)
    p0 = steady_state(thermal)

    def nine(cfg: ProtocolConfig) -> dict[str, float]:
        outcomes = simulate_protocol(p0, rates, phi, cfg)
        return full_report(outcomes, device).ok_temperatures()

    reference = nine(replace(protocol, efficiency_ge=1.0, efficiency_ef=1.0))
    surface = np.empty((len(efficiencies_ge), len(efficiencies_ef)))
    for i, d_ge in enumerate(efficiencies_ge):
        for j, d_ef in enumerate(efficiencies_ef):
            if d_ge == 1.0 and d_ef == 1.0:
                surface[i, j] = 0.0
                continue
            trial = nine(replace(protocol, efficiency_ge=d_ge, efficiency_ef=d_ef))
            common = [k for k in trial if k in reference]
            if not common:
                surface[i, j] = math.nan
                continue
            surface[i, j] = float(np.mean(
                [(trial[k] - reference[k]) / reference[k] for k in common]))
    return surface


def weighted_linear_fit(xs, ys, y_sigmas=None) -> FitResult:
    """Closed-form weighted least squares for y = slope * x + offset.

    Parameter errors come from the covariance of the normal equations.
    Requires at least three points and a non-degenerate abscissa spread.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be 1-d arrays of equal length")
    if x.size < 3:
        raise ValueError(f"need at least 3 points, got {x.size}")
    if y_sigmas is None:
        sigma = np.ones_like(x)
    else:
        sigma = np.asarray(y_sigmas, dtype=float)
        if sigma.shape != x.shape:
            raise ValueError("y_sigmas must match xs in shape")
        if np.any(sigma <= 0.0):
            raise ValueError("y_sigmas must be positive")
    w = 1.0 / sigma ** 2
    s = w.sum()
    sx = (w * x).sum()
    sy = (w * y).sum()
    sxx = (w * x * x).sum()
    sxy = (w * x * y).sum()
    delta = s * sxx - sx * sx
    if delta <= 1e-28 * max(s * sxx, 1e-300):
        raise ValueError("abscissa spread is degenerate; cannot fit a line")
    slope = (s * sxy - sx * sy) / delta
    offset = (sxx * sy - sx * sxy) / delta
    return FitResult(
        slope=float(slope),
        offset=float(offset),
        slope_error=math.sqrt(s / delta),
        offset_error=math.sqrt(sxx / delta),
    )


def thermalization_analysis(records, device: DeviceParams, estimator: str = "A2",
                            cutoff: float = 0.170,
                            gamma1_sigmas=None, n_sigmas=None
                            ) -> tuple[FitResult, FitResult]:
    """The two linear fits of the thermalization analysis.

    Fit 1: measured relaxation rate gamma_1 versus photon number at the
    measured effective temperature, restricted to set temperatures below the
    quasiparticle-onset ``cutoff`` (the linear bath regime, where the slope
    is twice the offset).  Fit 2: photon number at the effective temperature
    versus photon number at the set temperature over the same regime (slope
    one and offset zero mean perfect thermalization to the controlled bath).

    Only records whose chosen estimator returned an ``ok`` status enter the
    fits.  Optional per-point sigmas weight the respective fit.
    """
    t_set = []
    t_eff = []
    gammas = []
    kept = []
    for i, rec in enumerate(records):
        if rec.temperature >= cutoff:
            continue
        if rec.estimates.status(estimator) != "ok":
            continue
        t_set.append(rec.temperature)
        t_eff.append(rec.estimates.temperature(estimator))
        gammas.append(rec.rates.gamma1_ge)
        kept.append(i)
    if len(kept) < 3:
        raise ValueError(
            f"only {len(kept)} usable records below the {cutoff * 1e3:.0f} mK"
            " cutoff; need at least 3"
        )
    n_eff = [bose_einstein(device.omega_ge, t) for t in t_eff]
    n_set = [bose_einstein(device.omega_ge, t) for t in t_set]

    def select(sigmas):
        if sigmas is None:
            return None
        sigmas = np.asarray(sigmas, dtype=float)
        return sigmas[kept] if sigmas.size == len(records) else sigmas

    fit_gamma = weighted_linear_fit(n_eff, gammas, select(gamma1_sigmas))
    fit_mixing = weighted_linear_fit(n_set, n_eff, select(n_sigmas))
    return fit_gamma, fit_mixing
