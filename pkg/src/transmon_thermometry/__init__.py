"""Transmon-based quantum thermometry simulator.

Models the diagonal three-level dynamics of a transmon coupled to thermal
baths and quasiparticle channels, simulates the six-sequence pi-pulse
population-measurement protocol, inverts the outcomes to an effective
temperature through nine ratio estimators, and propagates statistical errors
down to the quantum-Fisher-information limit.
"""

from .bath import (
    BathSpec,
    SteadyState,
    aggregate_baths,
    bath_rates,
    boltzmann_populations,
    bose_einstein,
    gamma1_vs_T,
    photon_mixing_relation,
    resonator_teff,
    teff_from_ratio,
)
from .device import DeviceParams, fig3_device, preset, preset_names
from .dynamics import (
    EvolutionCoefficients,
    RateSet,
    apply_pulse,
    average_populations,
    evolution_coefficients,
    evolve_analytic,
    evolve_numeric,
    rate_set,
    steady_state,
)
from .errors import (
    ErrorReport,
    NoiseModel,
    abc_error_composition,
    abc_relative_errors,
    abc_variances,
    error_report,
    f_function,
    net,
    qfi_bound_three_level,
    qfi_bound_two_level,
    temp_error_from_ratio,
)
from .estimators import (
    Estimate,
    EstimateReport,
    RatioKind,
    full_report,
    invert_ratio,
    low_T_approximation,
    ratio_closed_form,
    ratio_from_outcomes,
)
from .experiment import (
    FitResult,
    SweepRecord,
    efficiency_error_surface,
    mc_outcomes,
    sweep,
    thermalization_analysis,
    weighted_linear_fit,
)
from .protocol import (
    OutcomeSextuple,
    ProtocolConfig,
    PulseSequence,
    PureStateResponses,
    ideal_outcomes,
    populations_from_outcomes,
    simulate_outcome,
    simulate_protocol,
)
from .quasiparticle import (
    JunctionParams,
    bessel_k0,
    dephasing_from_decoherence,
    gamma1_qp,
    gamma_phi_andreev,
    gamma_phi_qp_tunneling,
    plasma_frequency,
    xqp_equilibrium,
)
from .state import PopulationVector

__version__ = "0.1.0"
