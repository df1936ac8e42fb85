import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transmon_thermometry import (
    PopulationVector,
    RateSet,
    apply_pulse,
    average_populations,
    boltzmann_populations,
    bose_einstein,
    evolution_coefficients,
    evolve_analytic,
    evolve_numeric,
    preset,
    rate_set,
    steady_state,
)
from transmon_thermometry.constants import HBAR, KB, TWO_PI
from transmon_thermometry.dynamics import pulse_matrix

from oracles import averaged_populations_quadrature, evolve_ivp

R4I = preset("R4-I")


def random_rates(rng, span=(1e4, 1e8)) -> RateSet:
    lo, hi = (math.log10(s) for s in span)
    gu, gd, eu, ed = 10.0 ** rng.uniform(lo, hi, size=4)
    return RateSet(ge_up=gu, ge_down=gd, ef_up=eu, ef_down=ed)


def random_population(rng) -> PopulationVector:
    return PopulationVector.from_array(rng.dirichlet([1.0, 1.0, 1.0]))


class TestRateSet:
    def test_up_rates_vanish_at_low_temperature(self):
        r = rate_set(R4I, 1e-3)
        assert r.ge_up < 1e-100 and r.ef_up < 1e-100
        assert r.ge_down == pytest.approx(R4I.gamma1_base, rel=1e-12)

    def test_ef_rate_double_by_default(self):
        r = rate_set(R4I, 1e-3)
        assert r.ef_down == pytest.approx(2.0 * r.ge_down, rel=1e-12)
        r100 = rate_set(R4I, 0.1)
        # the factor applies to the base coupling; occupations differ slightly
        assert r100.gamma1_ef / r100.gamma1_ge == pytest.approx(2.0, rel=0.02)

    def test_r4i_rates_at_100mk_from_bath_oracles(self):
        r = rate_set(R4I, 0.1)
        n_ge = bose_einstein(R4I.omega_ge, 0.1)
        n_ef = bose_einstein(R4I.omega_ef, 0.1)
        g0 = R4I.gamma1_base
        assert r.ge_up == pytest.approx(g0 * n_ge, rel=1e-12)
        assert r.ge_down == pytest.approx(g0 * (n_ge + 1.0), rel=1e-12)
        assert r.ef_up == pytest.approx(2.0 * g0 * n_ef, rel=1e-12)
        assert r.ef_down == pytest.approx(2.0 * g0 * (n_ef + 1.0), rel=1e-12)

    def test_extra_relaxation_adds_to_down_rates_only(self):
        base = rate_set(R4I, 0.2)
        extra = rate_set(R4I, 0.2, extra_relaxation=(1e5, 2e5))
        assert extra.ge_down == pytest.approx(base.ge_down + 1e5, rel=1e-12)
        assert extra.ef_down == pytest.approx(base.ef_down + 2e5, rel=1e-12)
        assert extra.ge_up == base.ge_up and extra.ef_up == base.ef_up

    @given(st.floats(0.02, 1.0))
    @settings(max_examples=30)
    def test_detailed_balance_per_transition(self, t):
        r = rate_set(R4I, t)
        assert r.ge_up / r.ge_down == pytest.approx(
            math.exp(-HBAR * R4I.omega_ge / (KB * t)), rel=1e-12)
        assert r.ef_up / r.ef_down == pytest.approx(
            math.exp(-HBAR * R4I.omega_ef / (KB * t)), rel=1e-12)


class TestSteadyState:
    def test_matches_boltzmann_for_thermal_rates(self):
        for t in (0.05, 0.15, 0.3):
            p = steady_state(rate_set(R4I, t))
            expected = boltzmann_populations(list(R4I.level_energies), t)
            assert p.as_array() == pytest.approx(expected.as_array(), abs=1e-10)

    def test_ground_state_without_excitation(self):
        p = steady_state(RateSet(0.0, 1e6, 0.0, 2e6))
        assert p.as_array() == pytest.approx([1.0, 0.0, 0.0], abs=1e-15)

    def test_hand_evaluated_asymmetric_rates(self):
        p = steady_state(RateSet(ge_up=0.2, ge_down=1.0, ef_up=0.1, ef_down=2.0))
        z = 1.21
        assert p.p_g == pytest.approx(1.0 / z, rel=1e-14)
        assert p.p_e == pytest.approx(0.2 / z, rel=1e-14)
        assert p.p_f == pytest.approx(0.01 / z, rel=1e-14)

    def test_rejects_zero_down_rate(self):
        with pytest.raises(ValueError):
            steady_state(RateSet(0.1, 0.0, 0.1, 1.0))


class TestEvolutionCoefficients:
    def test_steady_start_has_no_transient(self):
        r = rate_set(R4I, 0.2)
        c = evolution_coefficients(steady_state(r), r)
        assert np.abs(c.zeta).max() < 1e-12
        assert np.abs(c.eta).max() < 1e-12

    def test_vieta_relations(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            r = random_rates(rng)
            c = evolution_coefficients(random_population(rng), r)
            s = sum(r.as_tuple()) / TWO_PI
            p = (r.ge_down * r.ef_down + r.ge_up * r.ef_up
                 + r.ge_up * r.ef_down) / TWO_PI ** 2
            assert c.alpha0 + c.alpha1 == pytest.approx(-s, rel=1e-10)
            assert c.alpha0 * c.alpha1 == pytest.approx(p, rel=1e-10)
            assert c.alpha0 < 0.0 and c.alpha1 < c.alpha0

    def test_initial_condition_reconstruction(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            r = random_rates(rng)
            p0 = random_population(rng)
            c = evolution_coefficients(p0, r)
            assert c.zeta + c.eta + c.xi == pytest.approx(p0.as_array(), abs=1e-12)
            assert c.xi.sum() == pytest.approx(1.0, abs=1e-12)

    def test_matches_explicit_amplitude_formulas(self):
        # closed-form amplitudes written via the ef-channel quotients
        rng = np.random.default_rng(13)
        for _ in range(40):
            r = random_rates(rng, span=(1e5, 1e7))
            p0 = random_population(rng)
            c = evolution_coefficients(p0, r)
            gu, gd, eu, ed = (v / TWO_PI for v in r.as_tuple())
            xi = steady_state(r).as_array()
            a0, a1 = c.alpha0, c.alpha1
            zeta_f = (eu * (p0.p_e - xi[1]) - (ed + a1) * (p0.p_f - xi[2])) / (a0 - a1)
            eta_f = ((ed + a0) * (p0.p_f - xi[2]) - eu * (p0.p_e - xi[1])) / (a0 - a1)
            zeta_e = (a0 + ed) / eu * zeta_f
            eta_e = (a1 + ed) / eu * eta_f
            zeta_g = gd / eu * (a0 + ed) / (a0 + gu) * zeta_f
            eta_g = gd / eu * (a1 + ed) / (a1 + gu) * eta_f
            scale = max(np.abs(c.zeta).max(), np.abs(c.eta).max(), 1e-12)
            assert c.zeta == pytest.approx([zeta_g, zeta_e, zeta_f], abs=1e-9 * scale)
            assert c.eta == pytest.approx([eta_g, eta_e, eta_f], abs=1e-9 * scale)


class TestEvolveAnalytic:
    def test_identity_at_zero_time(self):
        r = rate_set(R4I, 0.1)
        p0 = boltzmann_populations(list(R4I.level_energies), 0.25)
        assert evolve_analytic(p0, r, 0.0) is p0

    def test_long_time_reaches_steady_state(self):
        rng = np.random.default_rng(14)
        r = random_rates(rng, span=(1e5, 1e7))
        p0 = random_population(rng)
        c = evolution_coefficients(p0, r)
        p_inf = evolve_analytic(p0, r, 100.0 / abs(c.alpha1))
        assert p_inf.as_array() == pytest.approx(steady_state(r).as_array(), abs=1e-12)

    def test_zero_temperature_cascade_formula(self):
        # with no excitation the levels empty downward as a two-step cascade
        gd, ed = 2e5, 4e5
        r = RateSet(0.0, TWO_PI * gd, 0.0, TWO_PI * ed)
        p0 = PopulationVector(0.2, 0.5, 0.3)
        t = 3e-6
        p = evolve_analytic(p0, r, t)
        ef = math.exp(-ed * t)
        eg = math.exp(-gd * t)
        pf = 0.3 * ef
        pe = 0.5 * eg + 0.3 * ed / (ed - gd) * (eg - ef)
        assert p.p_f == pytest.approx(pf, rel=1e-12)
        assert p.p_e == pytest.approx(pe, rel=1e-12)
        assert p.p_g == pytest.approx(1.0 - pe - pf, abs=1e-12)

    def test_matches_adaptive_integrator(self):
        rng = np.random.default_rng(15)
        for _ in range(25):
            r = random_rates(rng, span=(1e4, 1e7))
            p0 = random_population(rng)
            t = rng.uniform(0.1, 5.0) / (max(r.as_tuple()) / TWO_PI)
            expected = evolve_ivp(p0.as_array(), r, t)
            assert evolve_analytic(p0, r, t).as_array() == pytest.approx(
                expected, abs=1e-9)

    def test_degenerate_rates_fall_back_to_numeric(self):
        r = RateSet(0.0, 1e6, 0.0, 1e6)
        p0 = PopulationVector(0.2, 0.5, 0.3)
        with pytest.warns(UserWarning, match="degenerate"):
            p = evolve_analytic(p0, r, 2e-6)
        expected = evolve_ivp(p0.as_array(), r, 2e-6)
        assert p.as_array() == pytest.approx(expected, abs=1e-9)

    def test_frozen_rates_are_identity(self):
        p0 = PopulationVector(0.2, 0.5, 0.3)
        r = RateSet(0.0, 0.0, 0.0, 0.0)
        assert evolve_analytic(p0, r, 1.0).as_array() == pytest.approx(
            p0.as_array(), abs=0.0)


class TestEvolveNumeric:
    def test_analytic_numeric_equivalence(self):
        rng = np.random.default_rng(16)
        worst = 0.0
        for _ in range(300):
            r = random_rates(rng)
            p0 = random_population(rng)
            gu, gd, eu, ed = (v / TWO_PI for v in r.as_tuple())
            slow = (gd * ed + gu * eu + gu * ed) / (gu + gd + eu + ed)
            t = rng.uniform(0.0, 20.0) / slow
            dt = 0.03 / (max(r.as_tuple()) / TWO_PI)
            pa = evolve_analytic(p0, r, t)
            pn = evolve_numeric(p0, r, t, dt)
            worst = max(worst, np.abs(pa.as_array() - pn.as_array()).max())
        assert worst < 1e-7

    def test_conservation_over_a_million_steps(self):
        r = rate_set(R4I, 0.2)
        p0 = PopulationVector(1.0, 0.0, 0.0)
        dt = 0.05 / (max(r.as_tuple()) / TWO_PI)
        p = evolve_numeric(p0, r, 1e6 * dt, dt)
        assert abs(p.p_g + p.p_e + p.p_f - 1.0) < 1e-10

    def test_rejects_coarse_step(self):
        r = rate_set(R4I, 0.2)
        p0 = PopulationVector(1.0, 0.0, 0.0)
        with pytest.raises(ValueError, match="too coarse"):
            evolve_numeric(p0, r, 1e-3, 1.0)

    def test_identity_cases(self):
        p0 = PopulationVector(0.3, 0.4, 0.3)
        assert evolve_numeric(p0, rate_set(R4I, 0.1), 0.0, 1e-9) is p0
        frozen = RateSet(0.0, 0.0, 0.0, 0.0)
        assert evolve_numeric(p0, frozen, 1.0, 1e-9) is p0


class TestAveragePopulations:
    def test_matches_quadrature_oracle(self):
        rng = np.random.default_rng(17)
        for _ in range(8):
            r = random_rates(rng, span=(1e5, 5e6))
            p0 = random_population(rng)
            duration = rng.uniform(0.5,4.0) / (max(r.as_tuple()) / TWO_PI)
            expected = averaged_populations_quadrature(p0.as_array(), r, duration)
            assert average_populations(p0, r, duration).as_array() == pytest.approx(
                expected, abs=1e-8)

    def test_short_window_limit(self):
        r = rate_set(R4I, 0.15)
        p0 = apply_pulse(boltzmann_populations(list(R4I.level_energies), 0.15), "ge")
        window = 1e-4 / (max(r.as_tuple()) / TWO_PI)
        avg = average_populations(p0, r, window)
        # the absolute drift of any component is bounded by the window size
        # times the fastest rate; small components move more in relative terms
        assert avg.as_array() == pytest.approx(p0.as_array(), abs=2e-4)

    def test_degenerate_rates_use_doubling_scheme(self):
        r = RateSet(0.0, 1e6, 0.0, 1e6)
        p0 = PopulationVector(0.2, 0.5, 0.3)
        with pytest.warns(UserWarning, match="degenerate"):
            avg = average_populations(p0, r, 3e-6)
        expected = averaged_populations_quadrature(p0.as_array(), r, 3e-6)
        assert avg.as_array() == pytest.approx(expected, abs=1e-9)


class TestApplyPulse:
    def test_reported_efficiency_example(self):
        p = apply_pulse(PopulationVector(1.0, 0.0, 0.0), "ge", 0.9)
        assert p.as_array() == pytest.approx([0.1, 0.9, 0.0], abs=1e-15)

    def test_perfect_pulse_is_involution(self):
        p0 = PopulationVector(0.5, 0.3, 0.2)
        for kind in ("ge", "ef"):
            swapped = apply_pulse(p0, kind, 1.0)
            assert apply_pulse(swapped, kind, 1.0).as_array() == pytest.approx(
                p0.as_array(), abs=0.0)

    def test_zero_efficiency_is_identity(self):
        p0 = PopulationVector(0.5, 0.3, 0.2)
        assert apply_pulse(p0, "ge", 0.0).as_array() == pytest.approx(
            p0.as_array(), abs=0.0)

    def test_matrices_doubly_stochastic(self):
        for kind in ("ge", "ef"):
            for d in (0.0, 0.3, 0.8, 1.0):
                m = pulse_matrix(kind, d)
                assert m.sum(axis=0) == pytest.approx([1.0, 1.0, 1.0], abs=1e-15)
                assert m.sum(axis=1) == pytest.approx([1.0, 1.0, 1.0], abs=1e-15)

    def test_rejects_bad_efficiency(self):
        p0 = PopulationVector(1.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            apply_pulse(p0, "ge", 1.2)
        with pytest.raises(ValueError):
            apply_pulse(p0, "fg", 0.5)


class TestConservationProperties:
    @given(st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_random_chains_conserve_probability(self, seed):
        rng = np.random.default_rng(seed)
        r = random_rates(rng, span=(1e4, 1e8))
        p = random_population(rng)
        slow = TWO_PI / min(v for v in r.as_tuple() if v > 0)
        for _ in range(12):
            move = rng.integers(0, 3)
            if move == 0:
                p = evolve_analytic(p, r, rng.uniform(0.0, 2.0) * slow)
            elif move == 1:
                p = apply_pulse(p, rng.choice(["ge", "ef"]), rng.uniform(0.0, 1.0))
            else:
                p = average_populations(p, r, rng.uniform(0.0, 0.5) * slow)
            arr = p.as_array()
            assert abs(arr.sum() - 1.0) < 1e-9
            assert (arr > -1e-12).all() and (arr < 1.0 + 1e-12).all()
