"""Evolution engines.

Three routes to the clock-averaged state at clock time t:

* ``evolve_spectral`` -- exact: in the energy basis every component just
  picks up the factor Pi(t, E_m - E_n).  Reference implementation.
* ``evolve_master`` -- fixed-step RK4 on the dephasing master equation
  rho' = -i[H, rho] - c(t) [H, [H, rho]], exact for the Wiener-limit clock
  and carrying the Ornstein-Uhlenbeck transient coefficient.
* ``evolve_cumulant`` -- RK4 on the second-order cumulant generator, the
  small-(tau |H|) approximation shared by all stationary clocks.
"""

from __future__ import annotations

import numpy as np

from .clocks import ClockModel, MasterEquationClock, OrnsteinUhlenbeckClock
from .errors import ValidationError
from .qcore import (
    DensityMatrix,
    Hamiltonian,
    Tolerances,
    liouvillean_apply,
    validate_density,
)

#: RK4 step bound, as a fraction of 1 / spectral radius
STEP_FRACTION = 0.01


def _rho_matrix(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=np.complex128)


def evolve_spectral(clock: ClockModel, hamiltonian: Hamiltonian, rho0, t: float) -> DensityMatrix:
    """Exact clock-averaged state: rho_nm(t) = Pi(t, E_m - E_n) rho_nm(0)."""
    rho_e = hamiltonian.to_energy_basis(_rho_matrix(rho0))
    kernel = clock.char_fn(t, hamiltonian.gap_matrix())
    out = hamiltonian.from_energy_basis(kernel * rho_e)
    out = (out + out.conj().T) / 2
    return validate_density(out)


def _rk4(rhs, rho: np.ndarray, t_final: float, dt: float) -> np.ndarray:
    if t_final == 0:
        return rho.copy()
    n_steps = max(1, int(np.ceil(t_final / dt - 1e-12)))
    h = t_final / n_steps
    t = 0.0
    for _ in range(n_steps):
        k1 = rhs(t, rho)
        k2 = rhs(t + h / 2, rho + (h / 2) * k1)
        k3 = rhs(t + h / 2, rho + (h / 2) * k2)
        k4 = rhs(t + h, rho + h * k3)
        rho = rho + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        rho = (rho + rho.conj().T) / 2  # shed Hermiticity drift every step
        t += h
    return rho


def _check_step(dt: float, hamiltonian: Hamiltonian) -> None:
    radius = hamiltonian.spectral_radius
    if radius > 0 and dt > STEP_FRACTION / radius:
        raise ValidationError(
            f"step dt={dt:g} exceeds the stability bound {STEP_FRACTION:g}/|H| = "
            f"{STEP_FRACTION / radius:g}"
        )


def evolve_master(hamiltonian: Hamiltonian, rho0, t: float, clock, dt: float) -> DensityMatrix:
    """Integrate the dephasing master equation with RK4 at fixed step.

    The double-commutator coefficient is tau/2 for the Wiener-limit clock and
    (kappa^2/theta)(1 - e^{-t/theta}) for the Ornstein-Uhlenbeck clock, whose
    transient switches decoherence on only after the correlation time.
    """
    if isinstance(clock, MasterEquationClock):
        c0 = clock.tau / 2
        coefficient = lambda _t: c0
    elif isinstance(clock, OrnsteinUhlenbeckClock):
        rate = clock.kappa**2 / clock.theta
        theta = clock.theta
        coefficient = lambda _t: rate * -np.expm1(-_t / theta)
    else:
        raise ValidationError(
            "evolve_master integrates Wiener-limit or Ornstein-Uhlenbeck clocks; "
            f"got {type(clock).__name__} (use evolve_spectral instead)"
        )
    if t < 0:
        raise ValidationError(f"t must be nonnegative, got {t}")
    _check_step(dt, hamiltonian)
    h = hamiltonian.matrix

    def rhs(time, rho):
        commutator = h @ rho - rho @ h
        double = h @ commutator - commutator @ h
        return -1j * commutator - coefficient(time) * double

    out = _rk4(rhs, _rho_matrix(rho0).copy(), t, dt)
    trace_drift = abs(np.trace(out) - 1.0)
    if trace_drift > 1e-8:
        raise ValidationError(f"integrator lost the trace by {trace_drift:.2e}")
    return validate_density(out, Tolerances(trace=1e-8))


def cumulant_generator(clock: ClockModel, hamiltonian: Hamiltonian, rho, order: int = 2) -> np.ndarray:
    """Right-hand side of the truncated cumulant expansion.

    -i (mean_s/t) [H, rho] - (1/2)(var_s/t) [H, [H, rho]] with the per-time
    cumulants, which are t-independent for stationary clocks.
    """
    if order not in (1, 2):
        raise ValidationError(f"cumulant expansion supports order 1 or 2, got {order}")
    if not clock.is_stationary:
        raise ValidationError(
            f"the {clock.label} law is not convolution-stationary; its cumulants "
            "are not linear in t and the truncated generator is undefined"
        )
    reference_t = 1.0
    moments = clock.moments(reference_t)
    commutator = liouvillean_apply(hamiltonian, rho)
    rhs = -1j * (moments.mean_s / reference_t) * commutator
    if order == 2:
        rhs = rhs - 0.5 * (moments.var_s / reference_t) * liouvillean_apply(hamiltonian, commutator)
    return rhs


def evolve_cumulant(clock: ClockModel, hamiltonian: Hamiltonian, rho0, t: float,
                    dt: float, order: int = 2) -> DensityMatrix:
    """RK4 integration of the truncated cumulant generator."""
    _check_step(dt, hamiltonian)
    rhs = lambda _t, rho: cumulant_generator(clock, hamiltonian, rho, order)
    out = _rk4(rhs, _rho_matrix(rho0).copy(), t, dt)
    return validate_density(out, Tolerances(trace=1e-8))


def survival(rho0, rho_t) -> float:
    """Survival probability Tr[rho(0) rho(t)]."""
    a = _rho_matrix(rho0)
    b = _rho_matrix(rho_t)
    if a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.shape} vs {b.shape}")
    value = np.trace(a @ b)
    if abs(value.imag) > 1e-10:
        raise ValidationError(f"survival probability came out complex (imag {value.imag:.2e})")
    return float(value.real)
