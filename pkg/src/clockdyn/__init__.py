"""Quantum dynamics timed by imperfect laboratory clocks.

Clock-error laws enter through their characteristic functions Pi(t, k); the
observed state at clock time t is the exact spectral average
rho_nm(t) = Pi(t, E_m - E_n) rho_nm(0).  On top of that sit dephasing
master-equation integrators, Monte-Carlo samplers of clock-error paths, and
the model systems (Zeno diagnostics, pulsed Rabi measurement, a three-level
oscillator, and a quasi-continuum decay model with line shapes).
"""

from .clocks import (
    AtomicDensity,
    BonifacioClock,
    ClockModel,
    ClockMoments,
    GaussianClock,
    MasterEquationClock,
    MilburnClock,
    OrnsteinUhlenbeckClock,
    PerfectClock,
    SemigroupClock,
    TwoScaleClock,
    check_semigroup,
    clock_from_config,
    rebase_lambda,
)
from .errors import ClockDomainError, RegimeError, ValidationError
from .evolve import (
    cumulant_generator,
    evolve_cumulant,
    evolve_master,
    evolve_spectral,
    survival,
)
from .physics import (
    DecayModel,
    PoleEstimate,
    build_decay_model,
    fit_initial_slope,
    fit_leading_power,
    golden_rule_rate,
    line_shape,
    lorentzian_line,
    perturbative_level_shift,
    pole_estimate,
    pole_survival,
    rabi_population,
    resolvent_aa,
    self_energy,
    short_time_survival,
    survival_amplitude,
    three_level_hamiltonian,
    three_level_survival,
    zeno_linear_coefficient,
    zeno_time,
)
from .qcore import (
    DensityMatrix,
    Hamiltonian,
    Tolerances,
    eigh,
    liouvillean_apply,
    validate_density,
)
from .stochastic import (
    GammaSampler,
    IdealTimeSampler,
    McEstimate,
    OUSampler,
    PerfectSampler,
    PoissonSampler,
    RelErrorPath,
    WienerSampler,
    causality_fraction,
    mc_char,
    mc_evolve,
    sample_ideal_time,
    sample_ou_path,
    sample_ou_paths,
)

__version__ = "0.1.0"

__all__ = [
    "AtomicDensity", "BonifacioClock", "ClockDomainError", "ClockModel",
    "ClockMoments", "DecayModel", "DensityMatrix", "GammaSampler",
    "GaussianClock", "Hamiltonian", "IdealTimeSampler", "MasterEquationClock",
    "McEstimate", "MilburnClock", "OUSampler", "OrnsteinUhlenbeckClock",
    "PerfectClock", "PerfectSampler", "PoissonSampler", "PoleEstimate",
    "RegimeError", "RelErrorPath", "SemigroupClock", "Tolerances",
    "TwoScaleClock", "ValidationError", "WienerSampler", "build_decay_model",
    "causality_fraction", "check_semigroup", "clock_from_config",
    "cumulant_generator", "eigh", "evolve_cumulant", "evolve_master",
    "evolve_spectral", "fit_initial_slope", "fit_leading_power",
    "golden_rule_rate", "line_shape", "liouvillean_apply", "lorentzian_line",
    "mc_char", "mc_evolve", "perturbative_level_shift", "pole_estimate",
    "pole_survival", "rabi_population", "rebase_lambda", "resolvent_aa",
    "sample_ideal_time", "sample_ou_path", "sample_ou_paths", "self_energy",
    "short_time_survival", "survival", "survival_amplitude",
    "three_level_hamiltonian", "three_level_survival", "validate_density",
    "zeno_linear_coefficient", "zeno_time",
]
