import numpy as np
import pytest

from clockdyn import (
    BonifacioClock,
    MasterEquationClock,
    PerfectClock,
    RegimeError,
    ValidationError,
    build_decay_model,
    golden_rule_rate,
    line_shape,
    lorentzian_line,
    perturbative_level_shift,
    pole_estimate,
    pole_survival,
    resolvent_aa,
    self_energy,
    short_time_survival,
    survival_amplitude,
)
from clockdyn.physics import DecayModel

# weak-coupling reference model: tau_z = 1, band width 20/tau_z, 400 levels
REFERENCE = dict(omega_a=10.0, band_center=10.0, band_width=20.0,
                 n_levels=400, coupling=0.05)


@pytest.fixture(scope="module")
def model():
    return build_decay_model(**REFERENCE)


@pytest.fixture(scope="module")
def pole(model):
    return pole_estimate(model)


class TestModelConstruction:
    def test_zeno_time_consistency(self, model):
        assert model.tau_z == pytest.approx(1 / (0.05 * np.sqrt(400)), rel=1e-12)
        assert np.sum(model.couplings**2) == pytest.approx(1 / model.tau_z**2, rel=1e-12)

    def test_single_level_is_rabi_pair(self):
        # N = 1 reduces to a two-level system with exact Rabi dynamics
        m = build_decay_model(0.0, 0.0, 1.0, 1, 0.3)
        v = 0.3
        s = np.linspace(0, 10, 101)
        # H = [[0, v], [v, 0]]: |A(s)|^2 = cos^2(v s)
        np.testing.assert_allclose(np.abs(survival_amplitude(m, s)) ** 2,
                                   np.cos(v * s) ** 2, atol=1e-12)

    def test_midpoint_grid(self, model):
        freqs = model.level_frequencies
        assert len(freqs) == 400
        assert freqs[0] == pytest.approx(0.0 + model.spacing / 2)
        assert freqs[-1] == pytest.approx(20.0 - model.spacing / 2)


class TestSelfEnergy:
    def test_single_level(self):
        m = DecayModel(0.0, np.array([1.5]), np.array([0.3]))
        assert self_energy(m, 2.5) == pytest.approx(0.09 / (2.5 - 1.5), rel=1e-14)

    def test_large_energy_asymptotics(self, model):
        # Sigma_a(E) -> 1 / (tau_z^2 E) with E measured from the band center
        e = model.band_center + 100 * 10.0  # 100 band half-widths out
        got = self_energy(model, e)
        expected = 1 / (model.tau_z**2 * (e - model.band_center))
        assert abs(got - expected) <= 1e-3 * abs(got)

    def test_symmetric_band_cancellation(self, model):
        # center of a symmetric flat band: paired terms cancel exactly
        assert self_energy(model, model.band_center + 1e-8j).real == pytest.approx(0.0, abs=1e-12)

    def test_pole_hit_rejected(self, model):
        with pytest.raises(ValidationError, match="pole"):
            self_energy(model, float(model.level_frequencies[3]))

    def test_resolvent_matches_matrix_inversion(self, model):
        # G_a(E) = <a|(E - H)^{-1}|a> just above the real axis
        e = model.omega_a + 0.3 + 0.1j * model.spacing
        h = model.hamiltonian().matrix
        inverse = np.linalg.inv(e * np.eye(h.shape[0]) - h)
        assert resolvent_aa(model, e) == pytest.approx(inverse[0, 0], rel=1e-10)


class TestSurvivalAmplitude:
    def test_starts_at_one(self, model):
        assert survival_amplitude(model, 0.0) == pytest.approx(1.0, abs=1e-12)

    def test_bounded(self, model):
        s = np.linspace(0, 50, 301)
        assert np.all(np.abs(survival_amplitude(model, s)) <= 1 + 1e-12)

    def test_negative_time_rejected(self, model):
        with pytest.raises(ValidationError):
            survival_amplitude(model, -0.1)

    def test_short_time_curvature(self, model):
        # |A(s)|^2 = 1 - s^2 / tau_z^2 + O(s^4)
        s = np.linspace(0, 0.05 * model.tau_z, 21)
        p = np.abs(survival_amplitude(model, s)) ** 2
        curvature = np.polyfit(s**2, p, 1)[0]
        assert curvature == pytest.approx(-1 / model.tau_z**2, rel=0.01)


class TestShortTimeFormula:
    def test_narrow_band_agreement(self):
        # two-pole closed form is exact for narrow bands; keep W tau_z = 1
        m = build_decay_model(0.3, 0.0, 1.0, 400, 1 / np.sqrt(400))
        s = np.linspace(0.0, 0.2 * m.tau_z, 41)
        exact = np.abs(survival_amplitude(m, s)) ** 2
        approx = short_time_survival(m.omega_a - m.band_center, m.tau_z, s)
        assert np.max(np.abs(exact - approx)) <= 1e-3

    def test_reduces_to_quadratic_decay(self):
        s = np.linspace(0, 0.05, 21)
        p = short_time_survival(0.7, 1.0, s)
        curvature = np.polyfit(s**2, p, 1)[0]
        assert curvature == pytest.approx(-1.0, rel=0.01)


class TestPoleEstimate:
    def test_gamma_within_golden_rule(self, pole):
        assert pole.gamma == pytest.approx(pole.gamma_golden_rule, rel=0.05)
        assert pole.gamma_golden_rule == pytest.approx(2 * np.pi * 0.05**2 / 0.05, rel=1e-12)

    def test_pole_matches_newton_oracle(self, pole):
        # independent oracle: Newton iteration on the second-sheet condition
        # E - omega_a - Sigma_c(E) = 0 with the continuum self-energy
        # Sigma_c(E) = (v^2/delta)(ln((E - lo)/(E - hi)) - 2 pi i), giving
        # E_p = 10 - 0.158666i and residue |Z|^2 = 1.02030 for this model
        assert pole.gamma == pytest.approx(0.3173323, rel=1e-3)
        assert pole.omega_p == pytest.approx(10.0, abs=1e-6)
        assert pole.z_p == pytest.approx(1.02030, abs=2e-3)

    def test_omega_p_perturbative_symmetric(self, pole):
        assert pole.omega_p_perturbative == pytest.approx(10.0, abs=1e-9)

    def test_weak_coupling_limit(self):
        # the analytic estimators degrade gracefully as v -> 0
        weak = build_decay_model(10.0, 10.0, 20.0, 400, 0.01)
        assert golden_rule_rate(weak) == pytest.approx(2 * np.pi * 1e-4 / 0.05, rel=1e-12)
        assert golden_rule_rate(weak) < golden_rule_rate(build_decay_model(**REFERENCE))
        assert 10.0 + perturbative_level_shift(weak) == pytest.approx(10.0, abs=1e-10)

    def test_strong_coupling_rejected(self):
        strong = build_decay_model(10.0, 10.0, 20.0, 400, 0.5)
        with pytest.raises(RegimeError, match="strong"):
            pole_estimate(strong)

    def test_level_outside_band_rejected(self):
        outside = build_decay_model(30.0, 10.0, 20.0, 400, 0.05)
        with pytest.raises(RegimeError, match="outside"):
            pole_estimate(outside)


class TestPoleSurvival:
    def test_perfect_clock_exponential(self, pole):
        for t in [1.0, 5.0]:
            got = pole_survival(PerfectClock(), pole, t)
            assert got == pytest.approx(pole.z_p * np.exp(-pole.gamma * t), rel=1e-12)

    def test_residue_overshoot_clamped_at_origin(self, pole):
        # z_p slightly exceeds 1 here, so the bare pole term is clamped at t=0
        with pytest.warns(UserWarning, match="clamping"):
            assert pole_survival(PerfectClock(), pole, 0.0) == 1.0

    @pytest.mark.parametrize("gamma_tau", [0.05, 0.2])
    def test_master_eq_slows_decay(self, pole, gamma_tau):
        # fitted log slope equals gamma (1 - gamma tau / 2)
        tau = gamma_tau / pole.gamma
        clock = MasterEquationClock(tau=tau)
        ts = np.linspace(1.0, 10.0, 40)
        ps = [pole_survival(clock, pole, t) for t in ts]
        rate = -np.polyfit(ts, np.log(ps), 1)[0]
        assert rate == pytest.approx(pole.gamma * (1 - gamma_tau / 2), rel=0.02)
        assert rate < pole.gamma  # decay is slowed, never accelerated

    def test_gamma_family_closed_form(self, pole):
        tau = 0.3
        clock = BonifacioClock(tau=tau)
        t = 4.0
        expected = pole.z_p * (1 + pole.gamma * tau) ** (-t / tau)
        assert pole_survival(clock, pole, t) == pytest.approx(expected, rel=1e-12)


class TestLineShape:
    def test_long_time_lorentzian(self, model, pole):
        t = 50 / pole.gamma
        omegas = np.linspace(pole.omega_p - 5 * pole.gamma, pole.omega_p + 5 * pole.gamma, 11)
        for clock in [PerfectClock(), MasterEquationClock(tau=0.1 / pole.gamma),
                      BonifacioClock(tau=0.1 / pole.gamma)]:
            for w in omegas:
                got = line_shape(clock, model, pole, float(w), t)
                reference = lorentzian_line(model, pole, float(w))
                assert got == pytest.approx(reference, rel=1e-3)

    def test_peak_height(self, model, pole):
        t = 50 / pole.gamma
        v2 = model.coupling_at(pole.omega_p) ** 2
        got = line_shape(PerfectClock(), model, pole, pole.omega_p, t)
        assert got == pytest.approx(4 * v2 / pole.gamma**2, rel=1e-3)

    def test_perfect_clock_matches_amplitude_formula(self, model, pole):
        # |B_omega(s)|^2 expanded: v^2 (1 + e^{-g s} - 2 e^{-g s/2} cos((w_p - w)s))
        #                          / ((w_p - w)^2 + g^2/4)
        t = 6.0
        for w in [pole.omega_p - 2 * pole.gamma, pole.omega_p + 0.7 * pole.gamma]:
            v2 = model.coupling_at(w) ** 2
            detuning = pole.omega_p - w
            oracle = v2 * (1 + np.exp(-pole.gamma * t)
                           - 2 * np.exp(-pole.gamma * t / 2) * np.cos(detuning * t)) \
                / (detuning**2 + pole.gamma**2 / 4)
            assert line_shape(PerfectClock(), model, pole, w, t) == pytest.approx(oracle, rel=1e-12)

    def test_unitarity_budget(self, model, pole):
        # band-summed line shape accounts for the decayed probability to 5%
        for clock in [PerfectClock(), MasterEquationClock(tau=0.2), BonifacioClock(tau=0.3)]:
            for t in [1 / pole.gamma, 50 / pole.gamma]:
                total = sum(line_shape(clock, model, pole, w, t)
                            for w in model.level_frequencies)
                decayed = 1 - pole.z_p * np.real(clock.char_fn(t, 1j * pole.gamma))
                assert total == pytest.approx(decayed, rel=0.05)

    def test_early_time_rejected(self, model, pole):
        with pytest.raises(ValidationError, match="pole-dominated"):
            line_shape(PerfectClock(), model, pole, pole.omega_p, 0.5 * model.tau_z)
