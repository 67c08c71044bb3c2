"""Model systems: Zeno diagnostics, pulsed Rabi measurement, the three-level
oscillator, and a discrete-level decay model with self-energy, resonance pole,
and emission line shape.

All probabilities returned here are clamped to [0, 1] with a warning if they
stray beyond tolerance; exact formulas keep them inside up to rounding.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .clocks import ClockModel
from .errors import RegimeError, ValidationError
from .qcore import DensityMatrix, Hamiltonian

PROBABILITY_SLACK = 1e-9


def _clamp_probability(p: float) -> float:
    if p < -PROBABILITY_SLACK or p > 1 + PROBABILITY_SLACK:
        warnings.warn(f"probability {p!r} left [0, 1] beyond tolerance; clamping", stacklevel=3)
    return min(max(p, 0.0), 1.0)


# ---------------------------------------------------------------------------
# Zeno diagnostics


def zeno_time(hamiltonian: Hamiltonian, rho0: DensityMatrix) -> float:
    """1 / Delta_H for a pure initial state; the quadratic short-time scale."""
    rho = rho0.matrix if isinstance(rho0, DensityMatrix) else np.asarray(rho0, np.complex128)
    purity = float(np.real(np.trace(rho @ rho)))
    if purity < 1 - 1e-10:
        raise ValidationError(f"initial state must be pure (tr rho^2 = {purity:.12f})")
    h = hamiltonian.matrix
    mean = float(np.real(np.trace(rho @ h)))
    second = float(np.real(np.trace(rho @ h @ h)))
    variance = second - mean**2
    if variance <= 1e-14 * max(abs(second), mean**2, 1e-300):
        raise ValidationError(
            "energy variance vanishes (initial state is an eigenstate); "
            "no decay and no finite Zeno time"
        )
    return 1 / np.sqrt(variance)


def zeno_linear_coefficient(clock: ClockModel, hamiltonian: Hamiltonian, rho0) -> float:
    """Coefficient of the t-linear term of the survival probability.

    Sum over energy-basis pairs of |rho_nm(0)|^2 times the per-gap decay rate
    of |Pi|.  Zero exactly for the Ornstein-Uhlenbeck clock; when negative,
    frequent measurements give exponential (not frozen) decay.
    """
    rho = rho0.matrix if isinstance(rho0, DensityMatrix) else np.asarray(rho0, np.complex128)
    rho_e = hamiltonian.to_energy_basis(rho)
    energies = hamiltonian.energies
    total = 0.0
    for n in range(len(energies)):
        for m in range(len(energies)):
            if n == m:
                continue
            weight = abs(rho_e[n, m]) ** 2
            if weight:
                total += weight * clock.zeno_rate(energies[n] - energies[m])
    return total


def fit_initial_slope(ts, ps, degree: int = 2) -> float:
    """Slope at t=0 of p(t), from a no-intercept polynomial fit of p - p(0)."""
    ts = np.asarray(ts, dtype=float)
    ps = np.asarray(ps, dtype=float)
    basis = np.vstack([ts**j for j in range(1, degree + 1)]).T
    coeffs, *_ = np.linalg.lstsq(basis, ps - ps[0], rcond=None)
    return float(coeffs[0])


def fit_leading_power(ts, ys) -> float:
    """Leading power from a log-log straight-line fit (ys > 0 required)."""
    ts = np.asarray(ts, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = (ts > 0) & (ys > 0)
    slope, _ = np.polyfit(np.log(ts[keep]), np.log(ys[keep]), 1)
    return float(slope)


# ---------------------------------------------------------------------------
# pulsed Rabi measurement (two-level idealization)


def rabi_population(clock: ClockModel, omega: float, b: float, n: int) -> float:
    """Second-level population after a pi pulse cut into n projective queries.

    The system starts in diag(b, 1-b); between measurements the coherence
    evolves with C(t) = Re Pi(t, omega) at interval t = pi/(n omega), so the
    final population is 1/2 + (1/2 - b) C^n.
    """
    if n < 1:
        raise ValidationError(f"need at least one measurement, got n={n}")
    if not 0 <= b <= 1:
        raise ValidationError(f"initial population b must lie in [0, 1], got {b}")
    if omega <= 0:
        raise ValidationError(f"Rabi frequency must be positive, got {omega}")
    interval = np.pi / (n * omega)
    c_plus = clock.char_fn(interval, omega)
    c_minus = clock.char_fn(interval, -omega)
    contrast = (c_plus + c_minus) / 2
    if abs(contrast.imag) > 1e-12:
        raise ValidationError(f"contrast came out complex ({contrast.imag:.2e})")
    return _clamp_probability(0.5 + (0.5 - b) * contrast.real**n)


# ---------------------------------------------------------------------------
# three-level oscillator


def three_level_hamiltonian(omega: float, coupling: float) -> Hamiltonian:
    """Chain Hamiltonian [[0, omega, 0], [omega, 0, coupling], [0, coupling, 0]]."""
    return Hamiltonian.from_matrix(
        [[0, omega, 0], [omega, 0, coupling], [0, coupling, 0]]
    )


def three_level_survival(clock: ClockModel, omega: float, coupling: float, t: float) -> float:
    """Closed-form survival of the first chain site under any clock law.

    p(t) = [K^4 + W^4/2 + 2 K^2 W^2 Re Pi(t, W') + (W^4/2) Re Pi(t, 2W')] / W'^4
    with W = omega, K = coupling, W' = sqrt(W^2 + K^2).
    """
    if omega == 0 and coupling == 0:
        raise ValidationError("omega and coupling cannot both vanish")
    rabi = np.hypot(omega, coupling)
    k4 = coupling**4
    w4 = omega**4
    p = (k4 + w4 / 2
         + 2 * coupling**2 * omega**2 * np.real(clock.char_fn(t, rabi))
         + (w4 / 2) * np.real(clock.char_fn(t, 2 * rabi))) / rabi**4
    return _clamp_probability(float(p))


# ---------------------------------------------------------------------------
# decay model: one discrete level coupled to a quasi-continuum band


@dataclass(eq=False)
class DecayModel:
    """Discrete level omega_a coupled to n uniformly spaced band levels."""

    omega_a: float
    level_frequencies: np.ndarray
    couplings: np.ndarray

    def __post_init__(self):
        self.level_frequencies = np.asarray(self.level_frequencies, dtype=float)
        self.couplings = np.asarray(self.couplings, dtype=float)
        if self.level_frequencies.shape != self.couplings.shape:
            raise ValidationError("level frequencies and couplings must match in length")
        if np.any(self.couplings < 0):
            raise ValidationError("couplings are taken real nonnegative")
        self.level_frequencies.setflags(write=False)
        self.couplings.setflags(write=False)

    @property
    def n_levels(self) -> int:
        return self.level_frequencies.size

    @property
    def spacing(self) -> float:
        gaps = np.diff(np.sort(self.level_frequencies))
        return float(gaps[0]) if gaps.size else np.inf

    @property
    def band_center(self) -> float:
        return float((self.level_frequencies.min() + self.level_frequencies.max()) / 2)

    @property
    def tau_z(self) -> float:
        """Zeno time of the discrete level: 1/sqrt(sum of squared couplings)."""
        return float(1 / np.sqrt(np.sum(self.couplings**2)))

    @property
    def recurrence_time(self) -> float:
        """2 pi / spacing, where the discrete spectrum starts to revive."""
        return 2 * np.pi / self.spacing

    def hamiltonian(self) -> Hamiltonian:
        n = self.n_levels
        h = np.zeros((n + 1, n + 1), dtype=np.complex128)
        h[0, 0] = self.omega_a
        h[0, 1:] = self.couplings
        h[1:, 0] = self.couplings
        h[np.arange(1, n + 1), np.arange(1, n + 1)] = self.level_frequencies
        return Hamiltonian.from_matrix(h)

    @cached_property
    def _spectral(self):
        """Energies and |<n|a>|^2 weights of the assembled Hamiltonian."""
        full = self.hamiltonian()
        weights = np.abs(full.basis[0, :]) ** 2
        return full.energies, weights

    def coupling_at(self, omega: float) -> float:
        """Coupling of the band level nearest to omega."""
        return float(self.couplings[np.argmin(np.abs(self.level_frequencies - omega))])


def build_decay_model(omega_a: float, band_center: float, band_width: float,
                      n_levels: int, coupling: float) -> DecayModel:
    """Uniform flat-coupling band: spacing W/N on a midpoint grid.

    The assembled model is checked against its Zeno time: the energy variance
    of the discrete level must equal the squared coupling sum.
    """
    if n_levels < 1:
        raise ValidationError(f"need at least one band level, got {n_levels}")
    if band_width <= 0:
        raise ValidationError("band width must be positive")
    spacing = band_width / n_levels
    freqs = band_center - band_width / 2 + (np.arange(n_levels) + 0.5) * spacing
    model = DecayModel(float(omega_a), freqs, np.full(n_levels, float(coupling)))
    expected = 1 / (coupling * np.sqrt(n_levels))
    check = zeno_time(model.hamiltonian(), DensityMatrix.pure(np.eye(model.n_levels + 1)[0]))
    if abs(check - expected) > 1e-10 * expected:
        raise ValidationError(
            f"Zeno-time consistency check failed: {check!r} vs {expected!r}"
        )
    return model


def self_energy(model: DecayModel, energy) -> complex:
    """Level-shift function Sigma_a(E) = sum_j v_j^2 / (E - omega_j).

    E may be complex (upper half plane) or real away from every band level.
    """
    e = np.asarray(energy, dtype=np.complex128)
    if np.any(e.imag == 0):
        real_part = np.atleast_1d(e)[np.atleast_1d(e.imag) == 0].real
        gap = np.min(np.abs(real_part[:, None] - model.level_frequencies[None, :]))
        if gap < 1e-12 * max(1.0, float(np.max(np.abs(model.level_frequencies)))):
            raise ValidationError("self-energy evaluated on a band level (pole hit)")
    out = np.sum(model.couplings**2 / (e[..., None] - model.level_frequencies), axis=-1)
    return out.item() if np.ndim(energy) == 0 else out


def resolvent_aa(model: DecayModel, energy) -> complex:
    """<a| (E - H)^{-1} |a> = 1 / (E - omega_a - Sigma_a(E))."""
    return 1 / (np.asarray(energy, np.complex128) - model.omega_a - self_energy(model, energy))


def survival_amplitude(model: DecayModel, s) -> complex:
    """A(s) = <a| e^{-iHs} |a> by exact diagonalization (s >= 0)."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0):
        raise ValidationError("ideal time s must be nonnegative")
    energies, weights = model._spectral
    out = np.exp(-1j * np.multiply.outer(s_arr, energies)) @ weights.astype(np.complex128)
    return out.item() if np.ndim(s) == 0 else out


def short_time_survival(omega_a_offset: float, tau_z: float, s) -> np.ndarray:
    """Two-pole short-time survival probability.

    1 + 2/(4 + w^2 tz^2) [cos(sqrt(4 + w^2 tz^2) s / tz) - 1], with w the
    discrete-level frequency measured from the band center.  Exact when the
    band is narrow against 1/tau_z; always reduces to 1 - s^2/tau_z^2.
    """
    x2 = 4 + (omega_a_offset * tau_z) ** 2
    s = np.asarray(s, dtype=float)
    return 1 + (2 / x2) * (np.cos(np.sqrt(x2) * s / tau_z) - 1)


@dataclass(frozen=True)
class PoleEstimate:
    """Resonance pole omega_p - i gamma/2 of the survival resolvent."""

    omega_p: float
    gamma: float
    z_p: float
    gamma_golden_rule: float
    omega_p_perturbative: float

    def __post_init__(self):
        if self.gamma < 0:
            raise ValidationError("decay rate gamma must be nonnegative")
        if not 0 < self.z_p <= 1.05:
            raise ValidationError(f"residue z_p = {self.z_p} outside (0, 1.05]")


def golden_rule_rate(model: DecayModel) -> float:
    """2 pi v^2 / spacing with v the coupling at resonance."""
    return 2 * np.pi * model.coupling_at(model.omega_a) ** 2 / model.spacing


def perturbative_level_shift(model: DecayModel) -> float:
    """Principal-value sum of v_j^2/(omega_a - omega_j), skipping resonance.

    Terms are summed from the nearest level outward so symmetric pairs cancel
    before the tails accumulate.
    """
    detuning = model.omega_a - model.level_frequencies
    keep = np.abs(detuning) > 1e-9 * model.spacing
    order = np.argsort(np.abs(detuning[keep]))
    terms = (model.couplings[keep] ** 2 / detuning[keep])[order]
    return float(np.sum(terms))


def pole_estimate(model: DecayModel, n_fit_points: int = 200) -> PoleEstimate:
    """Locate the decay pole two ways and require 5% agreement on gamma.

    (i) golden-rule analytics (rate 2 pi v^2/delta, perturbative level
    shift); (ii) log-linear fit of the exact survival amplitude over the
    exponential window, before recurrences.  Disagreement flags coupling too
    strong or too few band levels for the Weisskopf-Wigner regime.
    """
    band_lo = model.level_frequencies.min()
    band_hi = model.level_frequencies.max()
    if not band_lo < model.omega_a < band_hi:
        raise RegimeError(f"discrete level {model.omega_a} lies outside the band")
    gamma_gold = golden_rule_rate(model)
    if gamma_gold <= 0:
        raise RegimeError("zero coupling at resonance; there is no decay pole to locate")
    width = band_hi - band_lo + model.spacing
    if gamma_gold > 0.1 * width:
        raise RegimeError(
            f"coupling too strong for the pole approximation: golden-rule rate "
            f"{gamma_gold:.3g} exceeds 10% of the band width {width:.3g}"
        )
    t_low = 2 * model.tau_z
    t_high = min(2.5 / gamma_gold, 0.8 * model.recurrence_time)
    if t_high <= t_low:
        raise RegimeError(
            "no exponential fit window: recurrence precedes the pole-dominated era "
            f"(window [{t_low:.3g}, {t_high:.3g}])"
        )
    s = np.linspace(t_low, t_high, n_fit_points)
    amp = survival_amplitude(model, s)
    log_mag = np.log(np.abs(amp))
    slope, intercept = np.polyfit(s, log_mag, 1)
    gamma_fit = -2 * slope
    z_p = float(np.exp(2 * intercept))
    phase_slope, _ = np.polyfit(s, np.unwrap(np.angle(amp)), 1)
    omega_p_fit = -phase_slope
    if abs(gamma_fit - gamma_gold) > 0.05 * gamma_gold:
        raise RegimeError(
            f"pole estimators disagree: fitted gamma {gamma_fit:.6g} vs golden rule "
            f"{gamma_gold:.6g} (>5%); increase n_levels or weaken the coupling"
        )
    return PoleEstimate(
        omega_p=float(omega_p_fit),
        gamma=float(gamma_fit),
        z_p=z_p,
        gamma_golden_rule=float(gamma_gold),
        omega_p_perturbative=model.omega_a + perturbative_level_shift(model),
    )


def pole_survival(clock: ClockModel, pole: PoleEstimate, t: float) -> float:
    """Pole contribution to the survival probability: Z_p Re Pi(t, i gamma)."""
    value = clock.char_fn(t, 1j * pole.gamma)
    return _clamp_probability(pole.z_p * float(np.real(value)))


def lorentzian_line(model: DecayModel, pole: PoleEstimate, omega) -> np.ndarray:
    """Long-time line shape v^2 / ((omega_p - omega)^2 + gamma^2/4)."""
    omega = np.asarray(omega, dtype=float)
    v2 = np.array([model.coupling_at(w) for w in np.atleast_1d(omega)]) ** 2
    out = v2.reshape(omega.shape) / ((pole.omega_p - omega) ** 2 + pole.gamma**2 / 4)
    return out.item() if omega.ndim == 0 else out


def line_shape(clock: ClockModel, model: DecayModel, pole: PoleEstimate,
               omega: float, t: float) -> float:
    """Probability of finding the decay product at frequency omega by time t.

    Lorentzian prefactor times
    1 + Pi(t, i gamma) - Pi(t, omega - omega_p + i gamma/2)
      - Pi(t, omega_p - omega + i gamma/2),
    which tends to the bare Lorentzian as t -> infinity for every clock law.
    """
    if t < 2 * model.tau_z:
        raise ValidationError(
            f"line shape is only pole-dominated for t >= 2 tau_z = {2 * model.tau_z:.3g}"
        )
    gamma = pole.gamma
    detuning = omega - pole.omega_p
    bracket = (1
               + clock.char_fn(t, 1j * gamma)
               - clock.char_fn(t, detuning + 0.5j * gamma)
               - clock.char_fn(t, -detuning + 0.5j * gamma))
    if abs(bracket.imag) > 1e-9:
        raise ValidationError(f"line-shape bracket came out complex ({bracket.imag:.2e})")
    return float(lorentzian_line(model, pole, omega) * bracket.real)
