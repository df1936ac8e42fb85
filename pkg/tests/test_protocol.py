import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transmon_thermometry import (
    OutcomeSextuple,
    PopulationVector,
    ProtocolConfig,
    PulseSequence,
    PureStateResponses,
    RateSet,
    boltzmann_populations,
    fig3_device,
    ideal_outcomes,
    populations_from_outcomes,
    preset,
    simulate_outcome,
    simulate_protocol,
)
from transmon_thermometry.constants import TWO_PI
from transmon_thermometry.dynamics import pulse_matrix, rate_set
from transmon_thermometry.experiment import build_rates
from transmon_thermometry.protocol import CANONICAL_SEQUENCES, OUTCOME_LABELS

from oracles import averaged_populations_quadrature, evolve_ivp

PHI = PureStateResponses(0.0, 1.0, 2.0)
P_HAND = PopulationVector(0.7, 0.2, 0.1)


class TestIdealOutcomes:
    def test_hand_evaluated_sextuple(self):
        o = ideal_outcomes(P_HAND, PHI)
        assert o.as_tuple() == pytest.approx((0.4, 0.9, 1.5, 0.5, 1.1, 1.6), abs=1e-15)

    def test_pure_ground_state_tracking(self):
        phi = PureStateResponses(0.3, -1.2, 2.5)
        o = ideal_outcomes(PopulationVector(1.0, 0.0, 0.0), phi)
        # the two-pulse x2 and three-pulse y2 sequences both park g in f
        expected = (phi.phi_g, phi.phi_e, phi.phi_f,
                    phi.phi_g, phi.phi_e, phi.phi_f)
        assert o.as_tuple() == pytest.approx(expected, abs=1e-15)

    def test_indistinguishable_responses(self):
        o = ideal_outcomes(P_HAND, PureStateResponses(0.7, 0.7, 0.7))
        assert o.as_tuple() == pytest.approx((0.7,) * 6, abs=1e-15)

    def test_rows_match_pulse_matrix_products(self):
        # exhaustive label algebra: each outcome row equals phi . (M_seq e_i)
        phi = PureStateResponses(0.5, 1.7, -0.4)
        for label, kinds in CANONICAL_SEQUENCES.items():
            m = np.eye(3)
            for kind in kinds:
                m = pulse_matrix(kind, 1.0) @ m
            for i in range(3):
                basis = np.zeros(3)
                basis[i] = 1.0
                coeff = float(phi.as_array() @ (m @ basis))
                p = PopulationVector.from_array(basis)
                assert ideal_outcomes(p, phi).as_dict()[label] == pytest.approx(
                    coeff * 1.0, abs=1e-15)


class TestPulseSequence:
    def test_canonical_label_map(self):
        assert PulseSequence.from_label("x2").kinds == ("ge", "ef")
        assert PulseSequence.from_label("y2").kinds == ("ef", "ge", "ef")

    def test_rejects_wrong_assignment(self):
        with pytest.raises(ValueError):
            PulseSequence("x1", ("ef",))
        with pytest.raises(ValueError):
            PulseSequence("z0", ())


class TestSimulateOutcome:
    def test_ideal_limit_reproduces_rows(self):
        cfg = ProtocolConfig(pi_pulse_duration=0.0, readout_duration=0.0)
        rates = rate_set(preset("R4-I"), 0.15)
        ideal = ideal_outcomes(P_HAND, PHI)
        for label in OUTCOME_LABELS:
            seq = PulseSequence.from_label(label)
            value = simulate_outcome(seq, P_HAND, rates, PHI, cfg)
            assert value == pytest.approx(ideal.as_dict()[label], abs=1e-14)

    def test_frozen_dynamics_makes_modes_agree(self):
        tiny = RateSet(1e-20, 1e-12, 1e-20, 2e-12)
        cfg_avg = ProtocolConfig(readout_duration=5e-6, readout_mode="time_averaged")
        cfg_init = ProtocolConfig(readout_duration=5e-6, readout_mode="initial_value")
        for label in OUTCOME_LABELS:
            seq = PulseSequence.from_label(label)
            a = simulate_outcome(seq, P_HAND, tiny, PHI, cfg_avg)
            b = simulate_outcome(seq, P_HAND, tiny, PHI, cfg_init)
            assert a == pytest.approx(b, rel=1e-12)

    def test_fig3_config_against_quadrature_oracle(self):
        # closed-form readout integral versus adaptive ODE + quadrature
        device = fig3_device()
        rates, _ = build_rates(device, 0.1)
        cfg = ProtocolConfig(pi_pulse_duration=165e-9, readout_duration=2e-6)
        p0 = boltzmann_populations(list(device.level_energies), 0.1)
        for label in ("x0", "x2", "y2"):
            seq = PulseSequence.from_label(label)
            value = simulate_outcome(seq, p0, rates, PHI, cfg)
            p = p0
            for i, kind in enumerate(seq.kinds):
                if i > 0:
                    p = PopulationVector.from_array(
                        evolve_ivp(p.as_array(), rates, 165e-9))
                p = PopulationVector.from_array(pulse_matrix(kind, 1.0) @ p.as_array())
            averaged = averaged_populations_quadrature(p.as_array(), rates, 2e-6)
            assert value == pytest.approx(float(averaged @ PHI.as_array()), abs=1e-8)

    def test_readout_mode_agreement_for_short_window(self):
        device = preset("R4-I")
        rates = rate_set(device, 0.15)
        tau1 = TWO_PI / rates.gamma1_ge
        p0 = boltzmann_populations(list(device.level_energies), 0.15)
        for label in OUTCOME_LABELS:
            seq = PulseSequence.from_label(label)
            a = simulate_outcome(seq, p0, rates, PHI, ProtocolConfig(
                pi_pulse_duration=0.0, readout_duration=tau1 / 1e4,
                readout_mode="time_averaged"))
            b = simulate_outcome(seq, p0, rates, PHI, ProtocolConfig(
                pi_pulse_duration=0.0, readout_duration=tau1 / 1e4,
                readout_mode="initial_value"))
            assert a == pytest.approx(b, rel=1e-4)


class TestSimulateProtocol:
    def test_pulse_timing_modes_differ_only_with_duration(self):
        device = fig3_device()
        rates, _ = build_rates(device, 0.15)
        p0 = boltzmann_populations(list(device.level_energies), 0.15)
        configs = [ProtocolConfig(pi_pulse_duration=0.0, readout_duration=2e-6,
                                  pulse_timing=timing)
                   for timing in ("delay_before", "delay_after", "none")]
        outcomes = [simulate_protocol(p0, rates, PHI, cfg) for cfg in configs]
        for o in outcomes[1:]:
            assert o.as_tuple() == pytest.approx(outcomes[0].as_tuple(), abs=1e-14)

    def test_monotone_degradation_with_shrinking_lifetime(self):
        device = fig3_device()
        p0 = boltzmann_populations(list(device.level_energies), 0.15)
        cfg = ProtocolConfig(pi_pulse_duration=165e-9, readout_duration=2e-6)
        ideal = np.array(ideal_outcomes(p0, PHI).as_tuple())
        base = rate_set(device, 0.15)
        deviations = []
        for scale in (1.0, 3.0, 10.0, 30.0):
            rates = RateSet(*(v * scale for v in base.as_tuple()))
            o = np.array(simulate_protocol(p0, rates, PHI, cfg).as_tuple())
            deviations.append(np.abs(o - ideal).max())
        assert all(b > a for a, b in zip(deviations, deviations[1:]))


class TestPopulationsFromOutcomes:
    def test_exact_inverse_of_ideal_outcomes(self):
        p, residual = populations_from_outcomes(ideal_outcomes(P_HAND, PHI), PHI)
        assert p.as_array() == pytest.approx([0.7, 0.2, 0.1], abs=1e-12)
        assert residual < 1e-12

    def test_frozen_hand_sextuple(self):
        o = OutcomeSextuple(0.4, 0.9, 1.5, 0.5, 1.1, 1.6)
        p, _ = populations_from_outcomes(o, PHI)
        assert p.as_array() == pytest.approx([0.7, 0.2, 0.1], abs=1e-12)

    def test_perturbation_gives_residual_and_small_error(self):
        eps = 1e-4
        base = ideal_outcomes(P_HAND, PHI)
        o = OutcomeSextuple(base.x0 + eps, base.x1 - eps, base.x2,
                            base.y0, base.y1, base.y2)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            p, residual = populations_from_outcomes(o, PHI)
        assert residual > 0.0
        assert np.abs(p.as_array() - P_HAND.as_array()).max() < 5.0 * eps

    def test_degenerate_responses_rejected(self):
        o = ideal_outcomes(P_HAND, PHI)
        with pytest.raises(ValueError, match="degenerate"):
            populations_from_outcomes(o, PureStateResponses(1.0, 1.0, 1.0))

    def test_large_residual_warns(self):
        o = OutcomeSextuple(0.4 + 0.05, 0.9, 1.5, 0.5 - 0.05, 1.1, 1.6)
        with pytest.warns(UserWarning, match="residual"):
            populations_from_outcomes(o, PHI)

    @given(st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=40)
    def test_round_trip_on_simplex(self, seed):
        rng = np.random.default_rng(seed)
        p = PopulationVector.from_array(rng.dirichlet([2.0, 2.0, 2.0]))
        phi_vals = rng.uniform(-2.0, 2.0, size=3)
        if np.ptp(phi_vals) < 0.1 or np.abs(np.diff(np.sort(phi_vals))).min() < 0.05:
            return
        phi = PureStateResponses(*phi_vals)
        q, residual = populations_from_outcomes(ideal_outcomes(p, phi), phi)
        assert q.as_array() == pytest.approx(p.as_array(), abs=1e-10)
        assert residual < 1e-10
