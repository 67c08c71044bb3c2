"""Monte-Carlo realization of clock errors.

Relative-error paths alpha(t) are sampled as an exact AR(1) discretization of
the stationary Ornstein-Uhlenbeck process; ideal-time draws for the Gamma and
Poisson laws come straight from their closed-form distributions.  Ensemble
averages of e^{-isL} rho over draws cross-validate the analytic
characteristic functions.

Reproducibility contract: draw (or path) number i consumes its own Philox
counter-based stream keyed by (seed, i), and every ensemble reduction uses a
fixed-topology pairwise tree, so results are bit-identical for a given
(seed, n_samples) regardless of chunking or worker count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clocks import BonifacioClock, MasterEquationClock, MilburnClock
from .errors import ValidationError
from .qcore import DensityMatrix, Hamiltonian, validate_density

#: chunk size for per-draw stream generation (fixed so topology never varies)
_CHUNK = 1 << 16


def path_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for draw number ``index`` under master ``seed``."""
    return np.random.Generator(np.random.Philox(key=[int(seed) & (2**64 - 1), int(index)]))


def tree_sum(values: np.ndarray, axis: int = 0) -> np.ndarray:
    """Pairwise sum with a fixed binary topology (bit-reproducible)."""
    a = np.moveaxis(np.asarray(values), axis, 0)
    while a.shape[0] > 1:
        n = a.shape[0]
        half = n // 2
        if n % 2:
            a = np.concatenate([a[:2 * half:2] + a[1:2 * half:2], a[-1:]], axis=0)
        else:
            a = a[0::2] + a[1::2]
    return a[0]


def tree_mean(values: np.ndarray, axis: int = 0) -> np.ndarray:
    return tree_sum(values, axis) / np.asarray(values).shape[axis]


@dataclass(frozen=True, eq=False)
class RelErrorPath:
    """One sampled relative-error history alpha(t) and its running integral."""

    grid: np.ndarray     # strictly increasing clock times, grid[0] = 0
    alpha: np.ndarray    # dimensionless relative error at each grid point
    delta: np.ndarray    # cumulative error Delta(t_i), trapezoidal, delta[0] = 0

    def __post_init__(self):
        if self.delta[0] != 0.0:
            raise ValidationError("cumulative error must start at 0")

    def ideal_time(self) -> float:
        """s = t + Delta(t) at the end of the path."""
        return float(self.grid[-1] + self.delta[-1])


def _ou_alpha_matrix(kappa: float, theta: float, grid: np.ndarray,
                     n_paths: int, seed: int) -> np.ndarray:
    """Exact AR(1) OU samples, shape (n_paths, len(grid)).

    alpha_0 is stationary (std kappa/theta); each subsequent point uses the
    exact conditional law, so there is no step-size bias in alpha itself.
    """
    steps = np.diff(grid)
    if np.any(steps <= 0):
        raise ValidationError("grid must be strictly increasing")
    std = kappa / theta
    normals = np.empty((n_paths, len(grid)))
    for i in range(n_paths):
        normals[i] = path_rng(seed, i).standard_normal(len(grid))
    decay = np.exp(-steps / theta)
    kick = std * np.sqrt(-np.expm1(-2 * steps / theta))
    alpha = np.empty_like(normals)
    alpha[:, 0] = std * normals[:, 0]
    for j in range(len(steps)):
        alpha[:, j + 1] = alpha[:, j] * decay[j] + kick[j] * normals[:, j + 1]
    return alpha


def _trapezoid_delta(grid: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    steps = np.diff(grid)
    increments = 0.5 * (alpha[..., :-1] + alpha[..., 1:]) * steps
    delta = np.zeros(alpha.shape)
    delta[..., 1:] = np.cumsum(increments, axis=-1)
    return delta


def sample_ou_path(kappa: float, theta: float, grid, seed: int) -> RelErrorPath:
    """Sample one relative-error path on the given clock-time grid."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or grid[0] != 0.0:
        raise ValidationError("grid must be a 1-d array starting at 0")
    alpha = _ou_alpha_matrix(kappa, theta, grid, 1, seed)[0]
    return RelErrorPath(grid, alpha, _trapezoid_delta(grid, alpha))


def sample_ou_paths(kappa: float, theta: float, grid, n_paths: int, seed: int):
    """Vectorized ensemble: (alpha, delta) matrices of shape (n_paths, len(grid))."""
    grid = np.asarray(grid, dtype=float)
    alpha = _ou_alpha_matrix(kappa, theta, grid, n_paths, seed)
    return alpha, _trapezoid_delta(grid, alpha)


def causality_fraction(paths) -> float:
    """Fraction of sampled path points with alpha < -1 (clock running backward).

    Diagnostic only: the Gaussian model violates strict causality with small
    probability, which this quantifies.
    """
    if isinstance(paths, np.ndarray):
        alpha = paths
    else:
        alpha = np.concatenate([np.asarray(p.alpha).ravel() for p in paths])
    if alpha.size == 0:
        return 0.0
    return float(np.count_nonzero(alpha < -1) / alpha.size)


# ---------------------------------------------------------------------------
# ideal-time samplers


class IdealTimeSampler:
    """Draws of the ideal interval s elapsed at clock time t."""

    label = "sampler"

    def sample(self, t: float, n_samples: int, seed: int) -> np.ndarray:
        raise NotImplementedError

    def _per_draw(self, n_samples: int, seed: int, draw) -> np.ndarray:
        out = np.empty(n_samples)
        for i in range(n_samples):
            out[i] = draw(path_rng(seed, i))
        return out


class PerfectSampler(IdealTimeSampler):
    label = "perfect"

    def sample(self, t, n_samples, seed):
        return np.full(n_samples, float(t))


class GammaSampler(IdealTimeSampler):
    """Ideal-time draws for the Gamma (Bonifacio-type) law."""

    label = "gamma"

    def __init__(self, clock: BonifacioClock):
        self.clock = clock

    def sample(self, t, n_samples, seed):
        shape = self.clock._shape(float(t))
        scale = self.clock.tau
        return self._per_draw(n_samples, seed, lambda rng: rng.gamma(shape, scale))


class PoissonSampler(IdealTimeSampler):
    """Ideal-time draws for the Poisson-jump (Milburn-type) law: s = n tau."""

    label = "poisson"

    def __init__(self, clock: MilburnClock):
        self.clock = clock

    def sample(self, t, n_samples, seed):
        rate = self.clock._shape(float(t))
        tau = self.clock.tau
        return self._per_draw(n_samples, seed, lambda rng: rng.poisson(rate) * tau)


class WienerSampler(IdealTimeSampler):
    """Gaussian draws s ~ N(t, tau t) for the Wiener-limit law."""

    label = "wiener"

    def __init__(self, clock: MasterEquationClock):
        self.clock = clock

    def sample(self, t, n_samples, seed):
        t = float(t)
        std = np.sqrt(self.clock.tau * t)
        return self._per_draw(n_samples, seed, lambda rng: t + std * rng.standard_normal())


class OUSampler(IdealTimeSampler):
    """s = t + Delta(t) from sampled Ornstein-Uhlenbeck relative-error paths.

    Negative draws are possible and are evolved as-is (the clock may run
    backward past the origin).
    """

    label = "ou"

    def __init__(self, kappa: float, theta: float, n_steps: int = 512):
        self.kappa = float(kappa)
        self.theta = float(theta)
        self.n_steps = int(n_steps)

    def sample(self, t, n_samples, seed):
        grid = np.linspace(0.0, float(t), self.n_steps + 1)
        _, delta = sample_ou_paths(self.kappa, self.theta, grid, n_samples, seed)
        return float(t) + delta[:, -1]


def sample_ideal_time(clock, t: float, seed: int) -> float:
    """One ideal-time draw s ~ P(t, .) for a Gamma or Poisson law."""
    if t <= 0:
        raise ValidationError(f"t must be positive, got {t}")
    if isinstance(clock, BonifacioClock):
        return float(GammaSampler(clock).sample(t, 1, seed)[0])
    if isinstance(clock, MilburnClock):
        return float(PoissonSampler(clock).sample(t, 1, seed)[0])
    raise ValidationError(
        f"direct ideal-time draws are implemented for the Gamma and Poisson laws, "
        f"not {clock.label!r}"
    )


# ---------------------------------------------------------------------------
# ensemble estimates


@dataclass(frozen=True, eq=False)
class McEstimate:
    """Monte-Carlo estimate with componentwise standard error of the mean."""

    value: object          # DensityMatrix or complex
    stderr: object         # matching real ndarray or float
    n_samples: int
    seed: int

    def __post_init__(self):
        if np.any(np.asarray(self.stderr) < 0):
            raise ValidationError("standard error must be nonnegative")


def _mean_and_stderr(samples: np.ndarray):
    """Tree-reduced mean and stderr over axis 0 (complex-aware)."""
    n = samples.shape[0]
    mean = tree_mean(samples, axis=0)
    spread = np.abs(samples - mean) ** 2
    variance = tree_sum(spread, axis=0) / (n - 1) if n > 1 else np.zeros_like(spread[0])
    return mean, np.sqrt(variance / n)


def mc_char(sampler: IdealTimeSampler, t: float, k: float, n_samples: int, seed: int) -> McEstimate:
    """Monte-Carlo characteristic function: mean of e^{iks} over draws."""
    k = float(k)
    draws = sampler.sample(t, n_samples, seed)
    mean, stderr = _mean_and_stderr(np.exp(1j * k * draws))
    return McEstimate(complex(mean), float(stderr), n_samples, seed)


def mc_evolve(hamiltonian: Hamiltonian, rho0, t: float, sampler: IdealTimeSampler,
              n_samples: int, seed: int) -> McEstimate:
    """Ensemble-averaged state: mean over draws of e^{-isH} rho0 e^{isH}."""
    if n_samples < 100:
        raise ValidationError(f"need at least 100 samples, got {n_samples}")
    rho = rho0.matrix if isinstance(rho0, DensityMatrix) else np.asarray(rho0, np.complex128)
    rho_e = hamiltonian.to_energy_basis(rho)
    gaps = hamiltonian.gap_matrix()
    draws = sampler.sample(t, n_samples, seed)

    partial_sums, partial_sq = [], []
    mean = None
    for start in range(0, n_samples, _CHUNK):
        s = draws[start:start + _CHUNK]
        # states per draw, back in the original basis
        phases = np.exp(1j * np.multiply.outer(s, gaps))
        states = np.einsum("ab,sbc,dc->sad", hamiltonian.basis, phases * rho_e,
                           hamiltonian.basis.conj(), optimize=True)
        partial_sums.append(tree_sum(states, axis=0))
    mean = tree_sum(np.stack(partial_sums), axis=0) / n_samples

    for start in range(0, n_samples, _CHUNK):
        s = draws[start:start + _CHUNK]
        phases = np.exp(1j * np.multiply.outer(s, gaps))
        states = np.einsum("ab,sbc,dc->sad", hamiltonian.basis, phases * rho_e,
                           hamiltonian.basis.conj(), optimize=True)
        partial_sq.append(tree_sum(np.abs(states - mean) ** 2, axis=0))
    variance = tree_sum(np.stack(partial_sq), axis=0) / (n_samples - 1)
    stderr = np.sqrt(variance / n_samples)

    mean = (mean + mean.conj().T) / 2
    return McEstimate(validate_density(mean), stderr, n_samples, seed)
