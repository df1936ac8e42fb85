"""The six-sequence population-measurement protocol.

Each measurement prepares the thermalized qubit, applies one of six canonical
pi-pulse sequences, and reads out a signal that is linear in the populations
with weights given by the pure-state responses phi_i:

    x0 = p_g phi_g + p_e phi_e + p_f phi_f        (no pulse)
    x1 = p_e phi_g + p_g phi_e + p_f phi_f        (ge)
    x2 = p_e phi_g + p_f phi_e + p_g phi_f        (ge, ef)
    y0 = p_g phi_g + p_f phi_e + p_e phi_f        (ef)
    y1 = p_f phi_g + p_g phi_e + p_e phi_f        (ef, ge)
    y2 = p_f phi_g + p_e phi_e + p_g phi_f        (ef, ge, ef)

``ideal_outcomes`` evaluates these exact permutation rows.
``simulate_protocol`` additionally models finite pulse efficiency, relaxation
between pulses, and population decay during the finite readout window.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dynamics import RateSet, apply_pulse, average_populations, evolve_analytic
from .state import PopulationVector

CANONICAL_SEQUENCES: dict[str, tuple[str, ...]] = {
    "x0": (),
    "x1": ("ge",),
    "x2": ("ge", "ef"),
    "y0": ("ef",),
    "y1": ("ef", "ge"),
    "y2": ("ef", "ge", "ef"),
}

OUTCOME_LABELS = ("x0", "x1", "x2", "y0", "y1", "y2")

READOUT_MODES = ("time_averaged", "initial_value")
PULSE_TIMINGS = ("delay_before", "delay_after", "none")


@dataclass(frozen=True)
class PureStateResponses:
    """Mean readout signal for the qubit projected in |g>, |e>, |f>."""

    phi_g: float
    phi_e: float
    phi_f: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.phi_g, self.phi_e, self.phi_f)):
            raise ValueError("pure state responses must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.phi_g, self.phi_e, self.phi_f])


#: Arbitrary-units default used for simulation-only runs; the ideal-limit
#: ratios are independent of this choice.
DEFAULT_RESPONSES = PureStateResponses(0.0, 1.0, 2.0)


@dataclass(frozen=True)
class PulseSequence:
    """One canonical sequence: its outcome label and ordered pulse kinds."""

    label: str
    kinds: tuple[str, ...]

    def __post_init__(self):
        if self.label not in CANONICAL_SEQUENCES:
            raise ValueError(f"unknown sequence label {self.label!r}")
        if tuple(self.kinds) != CANONICAL_SEQUENCES[self.label]:
            raise ValueError(
                f"sequence for {self.label!r} must be {CANONICAL_SEQUENCES[self.label]}"
            )

    @classmethod
    def from_label(cls, label: str) -> "PulseSequence":
        return cls(label, CANONICAL_SEQUENCES[label])


@dataclass(frozen=True)
class OutcomeSextuple:
    """The six readout means produced by the canonical sequences."""

    x0: float
    x1: float
    x2: float
    y0: float
    y1: float
    y2: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in self.as_tuple()):
            raise ValueError("outcomes must be finite")

    def as_tuple(self) -> tuple[float, ...]:
        return (self.x0, self.x1, self.x2, self.y0, self.y1, self.y2)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(OUTCOME_LABELS, self.as_tuple()))

    def __getitem__(self, label: str) -> float:
        return self.as_dict()[label]


@dataclass(frozen=True)
class ProtocolConfig:
    """Timing and imperfection parameters of one protocol execution.

    ``pulse_timing`` selects where the pi-pulse duration enters as free
    evolution: ``delay_before`` inserts it before each instantaneous map
    after the first, ``delay_after`` inserts it after every map, and
    ``none`` applies the maps back to back (ignoring the duration, the
    idealized reading of instantaneous pulses).
    """

    pi_pulse_duration: float = 165e-9
    readout_duration: float = 2e-6
    efficiency_ge: float = 1.0
    efficiency_ef: float = 1.0
    readout_mode: str = "time_averaged"
    pulse_timing: str = "delay_before"

    def __post_init__(self):
        if self.pi_pulse_duration < 0.0 or self.readout_duration < 0.0:
            raise ValueError("durations must be >= 0")
        for name in ("efficiency_ge", "efficiency_ef"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.readout_mode not in READOUT_MODES:
            raise ValueError(f"readout_mode must be one of {READOUT_MODES}")
        if self.pulse_timing not in PULSE_TIMINGS:
            raise ValueError(f"pulse_timing must be one of {PULSE_TIMINGS}")

    def efficiency(self, kind: str) -> float:
        return self.efficiency_ge if kind == "ge" else self.efficiency_ef


IDEAL_CONFIG = ProtocolConfig(pi_pulse_duration=0.0, readout_duration=0.0)


def ideal_outcomes(p: PopulationVector, phi: PureStateResponses) -> OutcomeSextuple:
    """Exact instantaneous-protocol outcomes: the six permutation rows."""
    pg, pe, pf = p.p_g, p.p_e, p.p_f
    g, e, f = phi.phi_g, phi.phi_e, phi.phi_f
    return OutcomeSextuple(
        x0=pg * g + pe * e + pf * f,
        x1=pe * g + pg * e + pf * f,
        x2=pe * g + pf * e + pg * f,
        y0=pg * g + pf * e + pe * f,
        y1=pf * g + pg * e + pe * f,
        y2=pf * g + pe * e + pg * f,
    )


def sequence_populations(seq: PulseSequence, p0: PopulationVector, rates: RateSet,
                         cfg: ProtocolConfig) -> PopulationVector:
    """Populations at the start of the readout window for one sequence."""
    p = p0
    for i, kind in enumerate(seq.kinds):
        if (cfg.pulse_timing == "delay_before" and i > 0
                and cfg.pi_pulse_duration > 0.0):
            p = evolve_analytic(p, rates, cfg.pi_pulse_duration)
        p = apply_pulse(p, kind, cfg.efficiency(kind))
        if cfg.pulse_timing == "delay_after" and cfg.pi_pulse_duration > 0.0:
            p = evolve_analytic(p, rates, cfg.pi_pulse_duration)
    return p


def simulate_outcome(seq: PulseSequence, p0: PopulationVector, rates: RateSet,
                     phi: PureStateResponses, cfg: ProtocolConfig) -> float:
    """Readout value of one sequence with finite pulses and readout window.

    In ``time_averaged`` mode the signal is the response-weighted population
    averaged over the readout window (closed-form integral of the
    biexponential solution); ``initial_value`` uses the populations at the
    start of the window.
    """
    p = sequence_populations(seq, p0, rates, cfg)
    if cfg.readout_mode == "time_averaged" and cfg.readout_duration > 0.0:
        p = average_populations(p, rates, cfg.readout_duration)
    return float(np.dot(p.as_array(), phi.as_array()))


def simulate_protocol(p0: PopulationVector, rates: RateSet, phi: PureStateResponses,
                      cfg: ProtocolConfig) -> OutcomeSextuple:
    """All six sequences under one configuration."""
    values = {
        label: simulate_outcome(PulseSequence.from_label(label), p0, rates, phi, cfg)
        for label in OUTCOME_LABELS
    }
    return OutcomeSextuple(**values)


def _design_matrix(phi: PureStateResponses) -> np.ndarray:
    g, e, f = phi.phi_g, phi.phi_e, phi.phi_f
    return np.array([
        [g, e, f],   # x0
        [e, g, f],   # x1
        [f, g, e],   # x2
        [g, f, e],   # y0
        [e, f, g],   # y1
        [f, e, g],   # y2
    ])


def populations_from_outcomes(o: OutcomeSextuple, phi: PureStateResponses,
                              residual_warn: float = 1e-6
                              ) -> tuple[PopulationVector, float]:
    """Invert the six linear outcome equations for the populations.

    Solves the least-squares problem over the probability simplex (the
    normalization sum p = 1 is enforced exactly) and returns the populations
    together with the outcome-space residual norm.  A residual large
    relative to the response spread signals populations that changed during
    readout, and triggers a warning.
    """
    a = _design_matrix(phi)
    center = np.full(3, 1.0 / 3.0)
    # orthonormal basis of the sum-zero subspace
    basis = np.array([
        [1.0 / math.sqrt(2.0), 1.0 / math.sqrt(6.0)],
        [-1.0 / math.sqrt(2.0), 1.0 / math.sqrt(6.0)],
        [0.0, -2.0 / math.sqrt(6.0)],
    ])
    reduced = a @ basis
    singular_values = np.linalg.svd(reduced, compute_uv=False)
    scale = float(np.abs(a).max())
    if singular_values[-1] <= 1e-12 * max(scale, 1.0):
        raise ValueError(
            "pure state responses are degenerate; populations are not identifiable"
        )
    target = np.array(o.as_tuple()) - a @ center
    coeff, *_ = np.linalg.lstsq(reduced, target, rcond=None)
    p = center + basis @ coeff
    residual = float(np.linalg.norm(a @ p - np.array(o.as_tuple())))
    spread = float(np.ptp(phi.as_array()))
    if spread > 0.0 and residual > residual_warn * spread:
        warnings.warn(
            f"outcome residual {residual:.3e} exceeds {residual_warn:.1e} of the"
            " response spread; populations likely decayed during readout",
            stacklevel=2,
        )
    return PopulationVector.from_array(p), residual
