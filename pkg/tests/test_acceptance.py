"""Acceptance suite.

One test per acceptance criterion, each asserting the stated tolerance and
runtime budget and printing a PASS line (run with ``pytest -s`` to see them).
The plotting criterion for the companion figure scripts lives in
``plotkit/tests``.
"""

import time

import numpy as np
import pytest
from scipy.integrate import quad

from clockdyn import (
    BonifacioClock,
    DensityMatrix,
    GammaSampler,
    MasterEquationClock,
    MilburnClock,
    OrnsteinUhlenbeckClock,
    OUSampler,
    PerfectClock,
    TwoScaleClock,
    build_decay_model,
    check_semigroup,
    evolve_spectral,
    fit_initial_slope,
    fit_leading_power,
    mc_char,
    pole_estimate,
    pole_survival,
    line_shape,
    lorentzian_line,
    rabi_population,
    sample_ou_paths,
    short_time_survival,
    survival,
    survival_amplitude,
    three_level_hamiltonian,
    three_level_survival,
)

SEED = 20240817
K21 = np.linspace(-5.0, 5.0, 21)


class _Budget:
    def __init__(self, name, seconds):
        self.name, self.seconds = name, seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, *_):
        elapsed = time.perf_counter() - self.start
        if exc_type is None:
            assert elapsed < self.seconds, f"{self.name} took {elapsed:.2f}s"
            print(f"\n{self.name}: PASS ({elapsed:.2f}s)")
        return False


def test_criterion_1_semigroup_law():
    with _Budget("criterion 1 (semigroup law)", 1.0):
        stationary = [BonifacioClock(tau=0.8), MilburnClock(tau=0.6),
                      TwoScaleClock(tau=1.0, sigma=0.4), MasterEquationClock(tau=0.05)]
        for clock in stationary:
            lam = getattr(clock, "lam", 1.0)
            for t1 in (0.3 * lam, lam, 3 * lam):
                for t2 in (0.3 * lam, lam, 3 * lam):
                    assert check_semigroup(clock, t1, t2, K21) <= 1e-12
        ou = OrnsteinUhlenbeckClock(kappa=1.0, theta=1.0)
        assert check_semigroup(ou, 0.1, 0.1, [1.0]) > 1e-3


def test_criterion_2_moment_identities():
    with _Budget("criterion 2 (moment identities)", 10.0):
        continuous = [BonifacioClock(tau=0.8), TwoScaleClock(tau=1.0, sigma=0.4),
                      OrnsteinUhlenbeckClock(kappa=0.5, theta=1.0),
                      MasterEquationClock(tau=0.3)]
        for clock in continuous:
            scale = getattr(clock, "lam", 1.0)
            for t in (0.5 * scale, scale, 3 * scale):
                m = clock.moments(t)
                if clock.label in ("bonifacio", "two_scale"):
                    lower, upper = 0.0, m.mean_s + 50 * np.sqrt(m.var_s) + 40 * clock.tau
                else:
                    lower = m.mean_s - 12 * np.sqrt(m.var_s)
                    upper = m.mean_s + 12 * np.sqrt(m.var_s)
                pdf = lambda s: clock.density(t, s)
                mean = quad(lambda s: s * pdf(s), lower, upper,
                            epsabs=1e-12, epsrel=1e-11, limit=400)[0]
                var = quad(lambda s: (s - mean) ** 2 * pdf(s), lower, upper,
                           epsabs=1e-13, epsrel=1e-11, limit=400)[0]
                assert mean == pytest.approx(m.mean_s, rel=1e-6)
                assert var == pytest.approx(m.var_s, rel=1e-6)
        # Gamma-law moments are exact closed forms; binary-exact parameters
        # make strict equality independent of evaluation order
        clock = BonifacioClock(tau=0.5)
        for t in (0.5, 1.0, 2.0):
            m = clock.moments(t)
            assert m.mean_s == clock.tau * t / clock.lam
            assert m.var_s == clock.tau**2 * t / clock.lam


def test_criterion_3_zeno_washout():
    with _Budget("criterion 3 (Zeno washout)", 5.0):
        h = three_level_hamiltonian(1.0, 1.0)
        rho0 = DensityMatrix.pure([1, 0, 0])
        tau = 0.01
        ts = np.linspace(0.0, 0.005, 51)
        me = MasterEquationClock(tau=tau)
        ps = [survival(rho0, evolve_spectral(me, h, rho0, t)) for t in ts]
        slope = fit_initial_slope(ts, ps)
        assert slope == pytest.approx(-(1.0**2) * tau, rel=0.02)

        ou = OrnsteinUhlenbeckClock(kappa=np.sqrt(0.005), theta=1.0)  # kappa^2/theta = 0.005
        t_scan = np.geomspace(1e-4, 1e-2, 25)
        deficits = 1 - np.array([three_level_survival(ou, 1.0, 1.0, t) for t in t_scan])
        assert fit_leading_power(t_scan, deficits) >= 1.9


def test_criterion_4_milburn_resonance():
    with _Budget("criterion 4 (resonance freezing)", 1.0):
        rabi = np.sqrt(2.0)
        resonant = MilburnClock(tau=2 * np.pi / rabi)
        ts = np.linspace(0.0, 100 / rabi, 101)
        for t in ts:
            assert abs(three_level_survival(resonant, 1.0, 1.0, t) - 1.0) <= 1e-12
        detuned = MilburnClock(tau=2 * np.pi * 1.05 / rabi)
        assert min(three_level_survival(detuned, 1.0, 1.0, t) for t in ts) < 0.999


def test_criterion_5_pulsed_measurement_numbers():
    with _Budget("criterion 5 (pulsed-measurement numbers)", 1.0):
        counts = [1, 2, 4, 8, 16, 32, 64]
        for b in (1.0, 0.3):
            for n in counts:
                expected = 0.5 + (0.5 - b) * np.cos(np.pi / n) ** n
                got = rabi_population(PerfectClock(), 1.0, b, n)
                assert got == pytest.approx(expected, rel=1e-13, abs=1e-14)
        # times in seconds: omega = pi/256 per ms, tau = 1e-5 s
        omega, tau, b = np.pi / 0.256, 1e-5, 0.0
        clock = MasterEquationClock(tau=tau)
        direct = np.exp(-omega * tau * np.pi / 2)
        for n in counts:
            cosine = np.cos(np.pi / n) ** n
            if abs(cosine) < 1e-12:
                continue  # n = 2: cos(pi/2)^2 is pure rounding noise
            extracted = (rabi_population(clock, omega, b, n) - 0.5) / (0.5 * cosine)
            assert extracted == pytest.approx(direct, rel=1e-12)
        assert 0 < 1 - direct < 2.5e-4


def test_criterion_6_decay_constants():
    with _Budget("criterion 6 (decay constants)", 60.0):
        model = build_decay_model(omega_a=10.0, band_center=10.0, band_width=20.0,
                                  n_levels=400, coupling=0.05)
        pole = pole_estimate(model)
        assert pole.gamma == pytest.approx(pole.gamma_golden_rule, rel=0.05)
        for gamma_tau in (0.05, 0.2):
            clock = MasterEquationClock(tau=gamma_tau / pole.gamma)
            ts = np.linspace(1.0, 10.0, 40)
            ps = [pole_survival(clock, pole, t) for t in ts]
            rate = -np.polyfit(ts, np.log(ps), 1)[0]
            assert rate == pytest.approx(pole.gamma * (1 - gamma_tau / 2), rel=0.02)


def test_criterion_7_line_shape_invariance():
    with _Budget("criterion 7 (line-shape invariance)", 30.0):
        model = build_decay_model(omega_a=10.0, band_center=10.0, band_width=20.0,
                                  n_levels=400, coupling=0.05)
        pole = pole_estimate(model)
        t = 50 / pole.gamma
        omegas = np.linspace(pole.omega_p - 5 * pole.gamma, pole.omega_p + 5 * pole.gamma, 11)
        clocks = [PerfectClock(), MasterEquationClock(tau=0.1 / pole.gamma),
                  BonifacioClock(tau=0.1 / pole.gamma)]
        for clock in clocks:
            for w in omegas:
                got = line_shape(clock, model, pole, float(w), t)
                assert got == pytest.approx(lorentzian_line(model, pole, float(w)), rel=1e-3)


def test_criterion_8_monte_carlo_cross_oracles():
    with _Budget("criterion 8 (Monte-Carlo cross-oracles)", 120.0):
        n_paths = 10_000
        kappa, theta = 0.5, 1.0
        ou_clock = OrnsteinUhlenbeckClock(kappa=kappa, theta=theta)
        ou_sampler = OUSampler(kappa, theta, n_steps=256)
        t = 2 * theta
        for k in (0.25, 0.5, 1.0, 1.5, 2.0):
            est = mc_char(ou_sampler, t, k, n_paths, seed=SEED)
            assert abs(est.value - ou_clock.char_fn(t, k)) <= 3 * est.stderr

        gamma_clock = BonifacioClock(tau=0.5)
        sampler = GammaSampler(gamma_clock)
        for k in (0.25, 0.5, 1.0, 2.0, 4.0):
            est = mc_char(sampler, 2.0, k, n_paths, seed=SEED)
            assert abs(est.value - gamma_clock.char_fn(2.0, k)) <= 3 * est.stderr

        grid = np.linspace(0.0, 5 * theta, 501)
        _, delta = sample_ou_paths(kappa, theta, grid, n_paths, seed=SEED)
        for t_check in (0.5 * theta, 2 * theta, 5 * theta):
            idx = int(round(t_check / (grid[1] - grid[0])))
            sample_var = delta[:, idx].var(ddof=1)
            expected = 2 * kappa**2 * (t_check / theta - 1 + np.exp(-t_check / theta))
            stderr = expected * np.sqrt(2 / (n_paths - 1))
            assert abs(sample_var - expected) <= 3 * stderr


def test_criterion_9_short_time_decay_formula():
    with _Budget("criterion 9 (short-time decay formula)", 10.0):
        # two-pole regime: band narrow against 1/tau_z, level off center
        model = build_decay_model(omega_a=0.3, band_center=0.0, band_width=1.0,
                                  n_levels=400, coupling=1 / np.sqrt(400))
        s = np.linspace(0.0, 0.2 * model.tau_z, 41)
        exact = np.abs(survival_amplitude(model, s)) ** 2
        closed = short_time_survival(model.omega_a - model.band_center, model.tau_z, s)
        assert np.max(np.abs(exact - closed)) <= 1e-3

        s_fit = np.linspace(0.0, 0.05 * model.tau_z, 21)
        for p in (np.abs(survival_amplitude(model, s_fit)) ** 2,
                  short_time_survival(model.omega_a - model.band_center, model.tau_z, s_fit)):
            curvature = np.polyfit(s_fit**2, p, 1)[0]
            assert curvature == pytest.approx(-1 / model.tau_z**2, rel=0.01)
