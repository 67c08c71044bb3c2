"""Clock-error laws.

A clock law relates the interval ``t`` read off a laboratory clock to the
ideal evolution interval ``s`` actually elapsed, through a probability
density ``P(t, s)``.  All evolution code consumes the law only through its
characteristic function ``Pi(t, k) = E[e^{iks}]``, evaluated here via the
log-characteristic exponent to sidestep complex-power branch ambiguity:
for convolution-stationary laws ``Pi(t, k) = exp((t/lam) * psi(k))`` with a
per-variant cumulant exponent ``psi``.

Complex ``k`` is allowed on the closed upper half plane (needed for decay
rates and line shapes); the lower half plane raises ``ClockDomainError``
since only upper-half analyticity is guaranteed for laws supported on
``s >= 0``.
"""

from __future__ import annotations

import abc
import dataclasses
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, ive

from .errors import ClockDomainError, ValidationError

#: cumulative weight kept when truncating an atomic (Poisson) density
ATOM_TRUNCATION = 1e-12

#: relative drift |mean_s/t - 1| above which a calibration warning is issued
DRIFT_WARNING = 1e-12


@dataclass(frozen=True)
class ClockMoments:
    """First two moments of the elapsed ideal time at clock time t."""

    mean_s: float
    var_s: float

    def __post_init__(self):
        if self.var_s < 0:
            raise ValidationError(f"variance must be nonnegative, got {self.var_s}")


@dataclass(frozen=True, eq=False)
class AtomicDensity:
    """Discrete probability density: weighted atoms at ideal times s_n."""

    locations: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        loc = np.asarray(self.locations, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if loc.shape != w.shape or loc.ndim != 1:
            raise ValidationError("locations and weights must be equal-length vectors")
        if np.any(w < 0):
            raise ValidationError("atom weights must be nonnegative")
        if w.sum() > 1 + 1e-9:
            raise ValidationError(f"atom weights sum to {w.sum()} > 1")
        object.__setattr__(self, "locations", loc)
        object.__setattr__(self, "weights", w)

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    def mean(self) -> float:
        return float(np.sum(self.locations * self.weights))

    def variance(self) -> float:
        mu = self.mean()
        return float(np.sum((self.locations - mu) ** 2 * self.weights))


def _check_time(t) -> float:
    t = float(t)
    if t < 0:
        raise ValidationError(f"clock time must be nonnegative, got {t}")
    return t

def _check_upper_half(k) -> np.ndarray:
    k = np.asarray(k, dtype=np.complex128)
    if np.any(k.imag < 0):
        raise ClockDomainError(
            "k has Im k < 0; clock laws are only guaranteed analytic on the "
            "closed upper half plane"
        )
    return k

def _shaped(value, k):
    """Return a scalar when k was scalar, else the array."""
    return value.item() if np.ndim(k) == 0 else value


class ClockModel(abc.ABC):
    """Base interface of a clock-error law."""

    label: str = "clock"
    #: carries a (g, lambda) semigroup pair (rebasing applies)
    is_semigroup: bool = False
    #: satisfies the stationarity/convolution law Pi(t1+t2) = Pi(t1) Pi(t2)
    is_stationary: bool = False

    # -- characteristic function -------------------------------------------
    @abc.abstractmethod
    def _log_char(self, t: float, k: np.ndarray) -> np.ndarray:
        ...

    def log_char(self, t, k):
        """ln Pi(t, k) for clock time t >= 0 and Im k >= 0."""
        return _shaped(self._log_char(_check_time(t), _check_upper_half(k)), k)

    def char_fn(self, t, k):
        """Pi(t, k) = E[exp(iks)]; |Pi(t, k)| <= 1 for real k."""
        return _shaped(np.exp(self._log_char(_check_time(t), _check_upper_half(k))), k)

    # -- probability density ------------------------------------------------
    def density(self, t, s=None):
        """P(t, s) pointwise for continuous laws, AtomicDensity otherwise.

        Call with ``s=None`` for atomic laws; pointwise queries of an atomic
        law raise, and vice versa.
        """
        t = float(t)
        if t <= 0:
            raise ValidationError(f"density requires t > 0, got {t}")
        if self._is_atomic(t):
            if s is not None:
                raise ValidationError(
                    f"the {self.label} law at t={t} is atomic and has no pointwise "
                    "density; call density(t) to obtain the AtomicDensity"
                )
            return self._atoms(t)
        if s is None:
            raise ValidationError(
                f"the {self.label} law is continuous; pass the ideal time s"
            )
        s_arr = np.asarray(s, dtype=float)
        out = self._density(t, np.atleast_1d(s_arr))
        return float(out[0]) if s_arr.ndim == 0 else out.reshape(s_arr.shape)

    def is_atomic(self, t: float) -> bool:
        """True when the law at clock time t is a weighted train of atoms."""
        return self._is_atomic(float(t))

    def _is_atomic(self, t: float) -> bool:
        return False

    def _atoms(self, t: float) -> AtomicDensity:
        raise NotImplementedError

    def _density(self, t: float, s: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    # -- moments and decay rates ---------------------------------------------
    @abc.abstractmethod
    def moments(self, t) -> ClockMoments:
        """Analytic mean and variance of s at clock time t."""

    @abc.abstractmethod
    def zeno_rate(self, omega: float) -> float:
        """Per-frequency decay rate of |Pi|: d/dt ln|Pi(t, omega)| at t = 0.

        Nonpositive for every probability law; zero exactly when the law
        leaves the frequency component unattenuated.
        """

    # -- config grammar -------------------------------------------------------
    @abc.abstractmethod
    def to_config(self) -> dict:
        """JSON-ready spec: {"type": ..., parameters by name}."""


class SemigroupClock(ClockModel):
    """Law of the form Pi(t, k) = g(k)^(t/lam) = exp((t/lam) c psi(k)).

    ``shape_scale`` (c above) is 1 for a freshly built clock and changes only
    under lambda rebasing, which trades lam against the exponent so that Pi
    is untouched.
    """

    is_semigroup = True
    is_stationary = True
    lam: float
    shape_scale: float

    @abc.abstractmethod
    def cumulant_exponent(self, k: np.ndarray) -> np.ndarray:
        """psi(k) = ln g(k) at shape_scale 1, vectorized over k."""

    def _log_char(self, t, k):
        return (t / self.lam) * self.shape_scale * self.cumulant_exponent(k)

    def g(self, k):
        """Characteristic function of P at t = lam."""
        k = _check_upper_half(k)
        return _shaped(np.exp(self.shape_scale * self.cumulant_exponent(k)), k)

    def zeno_rate(self, omega: float) -> float:
        psi = self.shape_scale * self.cumulant_exponent(np.asarray(complex(omega)))
        return float(psi.real) / self.lam

    def drift_ratio(self) -> float:
        """-i g'(0) / lam, the systematic rate of clock drift (1 when calibrated)."""
        return self.moments(self.lam).mean_s / self.lam

    def _shape(self, t: float) -> float:
        return self.shape_scale * t / self.lam

    def _warn_if_drifting(self):
        drift = self.drift_ratio()
        if abs(drift - 1.0) > DRIFT_WARNING:
            warnings.warn(
                f"{self.label} clock drifts: mean elapsed ideal time is "
                f"{drift:g} t (recalibrate lam to remove the bias)",
                stacklevel=3,
            )


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0:
        raise ValidationError(f"{name} must be positive, got {value}")
    return value


def _gamma_pdf(s: np.ndarray, a: float, scale: float) -> np.ndarray:
    out = np.zeros_like(s, dtype=float)
    pos = s > 0
    x = s[pos] / scale
    out[pos] = np.exp((a - 1) * np.log(x) - x - gammaln(a)) / scale
    if a == 1:
        out[s == 0] = 1 / scale
    elif a < 1:
        out[s == 0] = np.inf
    return out


@dataclass(frozen=True)
class PerfectClock(ClockModel):
    """Ideal clock: P(t, s) = delta(t - s)."""

    label = "perfect"
    is_stationary = True

    def _log_char(self, t, k):
        return 1j * k * t

    def _is_atomic(self, t):
        return True

    def _atoms(self, t):
        return AtomicDensity(np.array([t]), np.array([1.0]))

    def moments(self, t):
        return ClockMoments(_check_time(t), 0.0)

    def zeno_rate(self, omega):
        return 0.0

    def to_config(self):
        return {"type": "perfect"}


@dataclass(frozen=True)
class BonifacioClock(SemigroupClock):
    """Gamma law: g(k) = 1 / (1 - ik tau), P(t, .) = Gamma(t/lam, scale tau)."""

    tau: float
    lam: float | None = None  # defaults to tau, the drift-free calibration
    shape_scale: float = 1.0
    label = "bonifacio"

    def __post_init__(self):
        _positive("tau", self.tau)
        if self.lam is None:
            object.__setattr__(self, "lam", self.tau)
        _positive("lam", self.lam)
        _positive("shape_scale", self.shape_scale)
        self._warn_if_drifting()

    def cumulant_exponent(self, k):
        return -np.log(1 - 1j * k * self.tau)

    def _density(self, t, s):
        return _gamma_pdf(s, self._shape(t), self.tau)

    def moments(self, t):
        a = self._shape(_check_time(t))
        return ClockMoments(self.tau * a, self.tau**2 * a)

    def to_config(self):
        return {"type": "bonifacio", "tau": self.tau, "lambda": self.lam,
                "shape_scale": self.shape_scale}


@dataclass(frozen=True)
class MilburnClock(SemigroupClock):
    """Poisson jump law: g(k) = exp(e^{ik tau} - 1), atoms at s = n tau."""

    tau: float
    lam: float | None = None
    shape_scale: float = 1.0
    label = "milburn"

    def __post_init__(self):
        _positive("tau", self.tau)
        if self.lam is None:
            object.__setattr__(self, "lam", self.tau)
        _positive("lam", self.lam)
        _positive("shape_scale", self.shape_scale)
        self._warn_if_drifting()

    def cumulant_exponent(self, k):
        return np.exp(1j * k * self.tau) - 1

    def _is_atomic(self, t):
        return True

    def _atoms(self, t):
        a = self._shape(t)
        # Poisson weights in log space; a +- 12 sqrt(a) covers far beyond the
        # 1 - 1e-12 truncation target for any shape
        n_max = int(np.ceil(a + 12 * np.sqrt(a) + 30))
        ns = np.arange(n_max + 1)
        weights = np.exp(-a + ns * np.log(a) - gammaln(ns + 1.0))
        cutoff = int(np.searchsorted(np.cumsum(weights), 1 - ATOM_TRUNCATION)) + 1
        ns, weights = ns[:cutoff], weights[:cutoff]
        return AtomicDensity(ns * self.tau, weights)

    def moments(self, t):
        a = self._shape(_check_time(t))
        return ClockMoments(self.tau * a, self.tau**2 * a)

    def to_config(self):
        return {"type": "milburn", "tau": self.tau, "lambda": self.lam,
                "shape_scale": self.shape_scale}


@dataclass(frozen=True)
class TwoScaleClock(SemigroupClock):
    """Two-pole law g(k) = 1 / ((1 - ik tau)(1 - ik sigma)), sigma <= tau.

    The sum of two independent Gamma laws; the continuous density involves a
    modified Bessel function of order t/lam - 1/2.
    """

    tau: float
    sigma: float
    lam: float | None = None  # defaults to sigma + tau (drift-free)
    shape_scale: float = 1.0
    label = "two_scale"

    def __post_init__(self):
        _positive("tau", self.tau)
        _positive("sigma", self.sigma)
        if self.sigma > self.tau:
            raise ValidationError(f"require sigma <= tau, got sigma={self.sigma} > tau={self.tau}")
        if self.lam is None:
            object.__setattr__(self, "lam", self.sigma + self.tau)
        _positive("lam", self.lam)
        _positive("shape_scale", self.shape_scale)
        self._warn_if_drifting()

    def cumulant_exponent(self, k):
        return -np.log(1 - 1j * k * self.tau) - np.log(1 - 1j * k * self.sigma)

    def _density(self, t, s):
        a = self._shape(t)
        tau, sig = self.tau, self.sigma
        if (tau - sig) <= 1e-9 * tau:
            # degenerate two-pole law: Gamma with doubled shape
            return _gamma_pdf(s, 2 * a, tau)
        out = np.zeros_like(s, dtype=float)
        pos = s > 0
        sp = s[pos]
        nu = a - 0.5
        w = (tau - sig) * sp / (2 * sig * tau)
        base = (0.5 * np.log(np.pi) - gammaln(a) - 0.5 * np.log(sig * tau)
                - (tau + sig) * sp / (2 * sig * tau))
        # log I_nu(w): scaled Bessel for moderate w, series limit for tiny w
        # (cancels the (s/(tau-sigma))^nu prefactor against w^nu exactly)
        small = w < 1e-5
        log_bessel_term = np.empty_like(sp)
        ws = w[~small]
        log_bessel_term[~small] = (nu * np.log(sp[~small] / (tau - sig))
                                   + np.log(ive(nu, ws)) + ws)
        log_bessel_term[small] = (nu * (2 * np.log(sp[small]) - np.log(4 * sig * tau))
                                  - gammaln(nu + 1)
                                  + np.log1p(w[small] ** 2 / (4 * (nu + 1))))
        out[pos] = np.exp(base + log_bessel_term)
        if np.any(s == 0):
            # s -> 0 limit of s^(2a-1): finite only at the a = 1/2 knee
            out[s == 0] = np.inf if a < 0.5 else (1 / np.sqrt(sig * tau) if a == 0.5 else 0.0)
        return out

    def moments(self, t):
        a = self._shape(_check_time(t))
        return ClockMoments((self.sigma + self.tau) * a, (self.sigma**2 + self.tau**2) * a)

    def to_config(self):
        return {"type": "two_scale", "tau": self.tau, "sigma": self.sigma,
                "lambda": self.lam, "shape_scale": self.shape_scale}


class GaussianClock(ClockModel):
    """Gaussian law Pi(t, k) = exp(ikt - k^2 f(t)) for a nondecreasing f.

    Ideal time is not restricted to s >= 0 here; the density is a normal law
    with mean t and variance 2 f(t).  Not stationary unless f is linear.
    """

    label = "gaussian"

    def __init__(self, variance_profile, derivative_at_zero: float | None = None):
        if abs(variance_profile(0.0)) > 1e-15:
            raise ValidationError("variance profile must satisfy f(0) = 0")
        self._f = variance_profile
        self._df0 = derivative_at_zero

    @classmethod
    def from_table(cls, times, values) -> "GaussianClock":
        ts = np.asarray(times, dtype=float)
        fs = np.asarray(values, dtype=float)
        if ts.ndim != 1 or ts.shape != fs.shape or ts.size < 2:
            raise ValidationError("table needs matching 1-d time/value arrays, length >= 2")
        if ts[0] != 0.0 or fs[0] != 0.0:
            raise ValidationError("table must start at (0, 0)")
        if np.any(np.diff(ts) <= 0) or np.any(np.diff(fs) < 0):
            raise ValidationError("table times must increase and values must not decrease")
        clock = cls(lambda t: float(np.interp(t, ts, fs)),
                    derivative_at_zero=(fs[1] - fs[0]) / (ts[1] - ts[0]))
        clock._table = (ts, fs)
        return clock

    def f(self, t: float) -> float:
        value = float(self._f(float(t)))
        if value < 0:
            raise ValidationError(f"variance profile went negative: f({t}) = {value}")
        return value

    def f_derivative_at_zero(self) -> float:
        if self._df0 is not None:
            return self._df0
        h = 1e-7
        return (self.f(h) - self.f(0.0)) / h

    def _log_char(self, t, k):
        return 1j * k * t - k * k * self.f(t)

    def _is_atomic(self, t):
        return self.f(t) == 0.0

    def _atoms(self, t):
        return AtomicDensity(np.array([t]), np.array([1.0]))

    def _density(self, t, s):
        var = 2 * self.f(t)
        return np.exp(-((s - t) ** 2) / (2 * var)) / np.sqrt(2 * np.pi * var)

    def moments(self, t):
        t = _check_time(t)
        return ClockMoments(t, 2 * self.f(t))

    def zeno_rate(self, omega):
        return -float(omega) ** 2 * self.f_derivative_at_zero()

    def to_config(self):
        ts, fs = getattr(self, "_table", (None, None))
        if ts is None:
            raise ValidationError("a callable-backed Gaussian clock has no config form")
        return {"type": "gaussian_table", "t": list(map(float, ts)), "f": list(map(float, fs))}


class OrnsteinUhlenbeckClock(GaussianClock):
    """Gaussian clock driven by stationary Ornstein-Uhlenbeck relative errors.

    Correlation (kappa/theta)^2 exp(-|dt|/theta) gives
    f(t) = kappa^2 (t/theta - 1 + e^{-t/theta}); f'(0) = 0, so the short-time
    error variance is quadratic in t and no Zeno-destroying linear term exists.
    """

    label = "ou"

    def __init__(self, kappa: float, theta: float):
        if kappa < 0:
            raise ValidationError(f"kappa must be nonnegative, got {kappa}")
        _positive("theta", theta)
        self.kappa = float(kappa)
        self.theta = float(theta)
        super().__init__(self._f_ou, derivative_at_zero=0.0)

    def _f_ou(self, t: float) -> float:
        x = t / self.theta
        # x + expm1(-x) is the cancellation-safe form of x - 1 + e^{-x}
        return self.kappa**2 * (x + np.expm1(-x))

    def zeno_rate(self, omega):
        return 0.0

    def to_config(self):
        return {"type": "ou", "kappa": self.kappa, "theta": self.theta}

    def __repr__(self):
        return f"OrnsteinUhlenbeckClock(kappa={self.kappa}, theta={self.theta})"


@dataclass(frozen=True)
class MasterEquationClock(ClockModel):
    """Wiener-limit law Pi(t, k) = exp(ikt - k^2 tau t / 2).

    tau is the decoherence time scale multiplying the double commutator in
    the dephasing master equation (the Gaussian cumulants terminate, so the
    equation is exact for this law).
    """

    tau: float
    label = "master_eq"
    is_stationary = True

    def __post_init__(self):
        if self.tau < 0:
            raise ValidationError(f"tau must be nonnegative, got {self.tau}")

    def _log_char(self, t, k):
        return 1j * k * t - k * k * (self.tau * t / 2)

    def _is_atomic(self, t):
        return self.tau == 0.0

    def _atoms(self, t):
        return AtomicDensity(np.array([t]), np.array([1.0]))

    def _density(self, t, s):
        var = self.tau * t
        return np.exp(-((s - t) ** 2) / (2 * var)) / np.sqrt(2 * np.pi * var)

    def moments(self, t):
        t = _check_time(t)
        return ClockMoments(t, self.tau * t)

    def zeno_rate(self, omega):
        return -float(omega) ** 2 * self.tau / 2

    def to_config(self):
        return {"type": "master_eq", "tau": self.tau}


# ---------------------------------------------------------------------------
# module-level operations


def check_semigroup(clock: ClockModel, t1: float, t2: float, k_grid) -> float:
    """Max residual of Pi(t1 + t2, k) = Pi(t1, k) Pi(t2, k) over the grid."""
    if not (t1 > 0 and t2 > 0):
        raise ValidationError("t1, t2 must be positive")
    k = np.asarray(k_grid, dtype=float)
    lhs = clock.char_fn(t1 + t2, k)
    rhs = clock.char_fn(t1, k) * clock.char_fn(t2, k)
    return float(np.max(np.abs(lhs - rhs)))


def rebase_lambda(clock: SemigroupClock, mu: float) -> SemigroupClock:
    """Re-express a semigroup clock with scale parameter mu, Pi unchanged.

    g_mu(k) = g_lam(k)^(mu/lam); the drift ratio -i g'(0)/lam is invariant.
    """
    if not isinstance(clock, SemigroupClock):
        raise ClockDomainError(
            f"the {clock.label} law carries no (g, lambda) semigroup pair to rebase"
        )
    _positive("mu", mu)
    return dataclasses.replace(
        clock, lam=mu, shape_scale=clock.shape_scale * mu / clock.lam
    )


_CLOCK_TYPES = {
    "perfect": PerfectClock,
    "bonifacio": BonifacioClock,
    "milburn": MilburnClock,
    "two_scale": TwoScaleClock,
    "ou": OrnsteinUhlenbeckClock,
    "master_eq": MasterEquationClock,
    "gaussian_table": GaussianClock,
}


def clock_from_config(config: dict) -> ClockModel:
    """Build a clock from the JSON grammar: {"type": ..., params by name}."""
    if not isinstance(config, dict) or "type" not in config:
        raise ValidationError("clock config must be an object with a 'type' field")
    spec = dict(config)
    kind = spec.pop("type")
    if kind not in _CLOCK_TYPES:
        raise ValidationError(
            f"unknown clock type {kind!r}; expected one of {sorted(_CLOCK_TYPES)}"
        )
    try:
        if kind == "perfect":
            return PerfectClock()
        if kind == "bonifacio":
            return BonifacioClock(tau=spec.pop("tau"), lam=spec.pop("lambda", None),
                                  shape_scale=spec.pop("shape_scale", 1.0), **spec)
        if kind == "milburn":
            return MilburnClock(tau=spec.pop("tau"), lam=spec.pop("lambda", None),
                                shape_scale=spec.pop("shape_scale", 1.0), **spec)
        if kind == "two_scale":
            return TwoScaleClock(tau=spec.pop("tau"), sigma=spec.pop("sigma"),
                                 lam=spec.pop("lambda", None),
                                 shape_scale=spec.pop("shape_scale", 1.0), **spec)
        if kind == "ou":
            return OrnsteinUhlenbeckClock(kappa=spec.pop("kappa"), theta=spec.pop("theta"), **spec)
        if kind == "master_eq":
            return MasterEquationClock(tau=spec.pop("tau"), **spec)
        return GaussianClock.from_table(spec.pop("t"), spec.pop("f"))
    except KeyError as missing:
        raise ValidationError(f"clock config for {kind!r} is missing {missing}") from None
    except TypeError as err:
        raise ValidationError(f"bad clock config for {kind!r}: {err}") from None
