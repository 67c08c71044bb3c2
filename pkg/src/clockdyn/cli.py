"""Command-line front end.

Every subcommand resolves its configuration (defaults < JSON config file <
explicit flags), runs the computation, and writes a CSV table to stdout or
``--out``, plus a JSON sidecar holding the fully resolved config, seed, and
package version.  Re-running with the sidecar as ``--config`` reproduces the
CSV byte for byte; floats are printed with 17 significant digits so values
round-trip exactly.

Exit codes: 0 success, 2 configuration/validation problem, 3 numerical
regime failure (e.g. pole estimators disagree).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .clocks import (
    BonifacioClock,
    MasterEquationClock,
    MilburnClock,
    OrnsteinUhlenbeckClock,
    PerfectClock,
    clock_from_config,
)
from .errors import ClockDomainError, RegimeError, ValidationError
from .evolve import evolve_master, evolve_spectral, survival
from .physics import (
    build_decay_model,
    fit_initial_slope,
    line_shape,
    lorentzian_line,
    pole_estimate,
    pole_survival,
    rabi_population,
    three_level_hamiltonian,
    three_level_survival,
    zeno_linear_coefficient,
)
from .qcore import DensityMatrix, Hamiltonian, validate_density
from .stochastic import (
    GammaSampler,
    OUSampler,
    PerfectSampler,
    PoissonSampler,
    WienerSampler,
    mc_char,
    mc_evolve,
)

DEFAULT_SEED = 1234


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    if value is None:
        return ""
    return str(value)


@dataclass
class TimeSeries:
    """Ordered records with a fixed column order; the universal CLI payload."""

    columns: list
    rows: list = field(default_factory=list)

    def add(self, **record):
        self.rows.append(record)

    def write_csv(self, stream) -> None:
        stream.write(",".join(self.columns) + "\n")
        for row in self.rows:
            stream.write(",".join(_fmt(row.get(c)) for c in self.columns) + "\n")


# ---------------------------------------------------------------------------
# config plumbing


def parse_grid(spec) -> list:
    """Accept 'start:stop:step', 'a,b,c', a number, or a list of numbers."""
    if isinstance(spec, (list, tuple, np.ndarray)):
        return [float(x) for x in spec]
    if isinstance(spec, (int, float)):
        return [float(spec)]
    text = str(spec)
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"grid {spec!r} must be start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValidationError(f"grid step must be positive in {spec!r}")
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(n)]
    return [float(p) for p in text.split(",") if p.strip() != ""]


def parse_matrix(obj, name: str) -> np.ndarray:
    """Rows of entries, each a number or an [re, im] pair."""
    if obj is None:
        raise ValidationError(f"config field {name!r} is required")
    try:
        rows = []
        for row in obj:
            rows.append([complex(e[0], e[1]) if isinstance(e, (list, tuple)) else complex(e)
                         for e in row])
        return np.asarray(rows, dtype=np.complex128)
    except (TypeError, IndexError) as err:
        raise ValidationError(f"config field {name!r} is not a matrix: {err}") from None


def matrix_config(matrix: np.ndarray) -> list:
    return [[[float(e.real), float(e.imag)] for e in row] for row in np.asarray(matrix, np.complex128)]


def load_config_file(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise ValidationError(f"cannot read config {path!r}: {err}") from None
    if not isinstance(data, dict):
        raise ValidationError(f"config {path!r} must hold a JSON object")
    # accept a sidecar produced by an earlier run
    if "config" in data and isinstance(data["config"], dict):
        return data["config"]
    return data


def clock_config_from_flags(args) -> dict | None:
    """Inline clock spec from --type/--tau/... flags, if any were given."""
    if getattr(args, "type", None) is None:
        return None
    spec = {"type": args.type}
    for key, attr in (("tau", "tau"), ("sigma", "sigma"), ("lambda", "lam"),
                      ("kappa", "kappa"), ("theta", "theta")):
        value = getattr(args, attr, None)
        if value is not None:
            spec[key] = value
    return spec


def _unique_labels(clocks) -> list:
    labels, seen = [], {}
    for c in clocks:
        seen[c.label] = seen.get(c.label, 0) + 1
        labels.append(c.label if seen[c.label] == 1 else f"{c.label}_{seen[c.label]}")
    return labels


def _parallel_map(fn, items, threads: int) -> list:
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _json_default(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


def _emit(args, config: dict, table: TimeSeries, results: dict | None = None) -> None:
    sidecar = {
        "subcommand": args.subcommand,
        "version": __version__,
        "seed": config.get("seed", DEFAULT_SEED),
        "config": config,
    }
    if results:
        sidecar["results"] = results
    if args.out:
        with open(args.out, "w", newline="") as fh:
            table.write_csv(fh)
        sidecar_path = args.sidecar or (args.out + ".json")
    else:
        table.write_csv(sys.stdout)
        sidecar_path = args.sidecar
    if sidecar_path:
        with open(sidecar_path, "w") as fh:
            json.dump(sidecar, fh, indent=2, sort_keys=True, default=_json_default)
            fh.write("\n")


def _resolve(args, defaults: dict) -> dict:
    """defaults < config file < explicit flags (flag name == config key)."""
    config = dict(defaults)
    if args.config:
        loaded = load_config_file(args.config)
        unknown = set(loaded) - set(defaults) - {"seed"}
        if unknown:
            raise ValidationError(
                f"unknown config field(s) {sorted(unknown)}; expected keys from "
                f"{sorted(defaults) + ['seed']}"
            )
        config.update(loaded)
    for key in defaults:
        flag = getattr(args, key.replace("-", "_"), None)
        if flag is not None:
            config[key] = flag
    config["seed"] = args.seed if args.seed is not None else config.get("seed", DEFAULT_SEED)
    inline_clock = clock_config_from_flags(args)
    if inline_clock is not None:
        if "clock" in defaults:
            config["clock"] = inline_clock
        elif "clocks" in defaults:
            config["clocks"] = [inline_clock]
    return config


# ---------------------------------------------------------------------------
# subcommands


def run_clock(args) -> int:
    defaults = {
        "clock": {"type": "bonifacio", "tau": 1.0},
        "t": [1.0],
        "k_grid": "-5:5:0.5",
        "s_grid": "0:5:0.1",
    }
    config = _resolve(args, defaults)
    clock = clock_from_config(config["clock"])
    ts = parse_grid(config["t"])
    ks = parse_grid(config["k_grid"])
    ss = parse_grid(config["s_grid"])
    config.update(t=ts, k_grid=ks, s_grid=ss, clock=clock.to_config())

    table = TimeSeries(["kind", "t", "k", "s", "re_pi", "im_pi", "abs_pi", "P",
                        "mean_s", "var_s"])
    for t in ts:
        for k in ks:
            pi = clock.char_fn(t, k)
            table.add(kind="char", t=t, k=k, re_pi=pi.real, im_pi=pi.imag, abs_pi=abs(pi))
        if t > 0:
            atoms = clock.density(t) if clock.is_atomic(t) else None
            if atoms is not None:
                for loc, w in zip(atoms.locations, atoms.weights):
                    table.add(kind="atom", t=t, s=loc, P=w)
            else:
                for s in ss:
                    table.add(kind="density", t=t, s=s, P=clock.density(t, s))
        m = clock.moments(t)
        table.add(kind="moment", t=t, mean_s=m.mean_s, var_s=m.var_s)
    _emit(args, config, table)
    return 0


def run_evolve(args) -> int:
    defaults = {
        "clock": {"type": "master_eq", "tau": 0.01},
        "hamiltonian": None,
        "rho0": None,
        "t_grid": "0:10:0.1",
        "method": "spectral",
        "dt": 0.001,
    }
    config = _resolve(args, defaults)
    clock = clock_from_config(config["clock"])
    h = Hamiltonian.from_matrix(parse_matrix(config["hamiltonian"], "hamiltonian"))
    rho0 = validate_density(parse_matrix(config["rho0"], "rho0"))
    ts = parse_grid(config["t_grid"])
    method = config["method"]
    if method not in ("spectral", "master"):
        raise ValidationError(f"method must be 'spectral' or 'master', got {method!r}")
    config.update(t_grid=ts, clock=clock.to_config(),
                  hamiltonian=matrix_config(h.matrix), rho0=matrix_config(rho0.matrix))

    dim = h.dim
    entry_cols = []
    for i in range(dim):
        for j in range(dim):
            entry_cols += [f"rho_{i}{j}_re", f"rho_{i}{j}_im"]
    table = TimeSeries(["t", "p"] + entry_cols)

    def state_at(t):
        if method == "spectral":
            return evolve_spectral(clock, h, rho0, t)
        return evolve_master(h, rho0, t, clock, config["dt"])

    states = _parallel_map(state_at, ts, args.threads)
    for t, state in zip(ts, states):
        record = {"t": t, "p": survival(rho0, state)}
        for i in range(dim):
            for j in range(dim):
                record[f"rho_{i}{j}_re"] = state.matrix[i, j].real
                record[f"rho_{i}{j}_im"] = state.matrix[i, j].imag
        table.add(**record)
    _emit(args, config, table)
    return 0


def _default_system(config):
    if config.get("hamiltonian") is not None:
        h = Hamiltonian.from_matrix(parse_matrix(config["hamiltonian"], "hamiltonian"))
    else:
        h = three_level_hamiltonian(1.0, 1.0)
    if config.get("rho0") is not None:
        rho0 = validate_density(parse_matrix(config["rho0"], "rho0"))
    else:
        rho0 = DensityMatrix.pure(np.eye(h.dim)[0])
    return h, rho0


def run_zeno(args) -> int:
    defaults = {
        "clocks": [{"type": "master_eq", "tau": 0.01}, {"type": "ou", "kappa": 0.070710678118654752, "theta": 1.0}],
        "hamiltonian": None,
        "rho0": None,
        "t_max": 0.005,
        "n_points": 51,
    }
    config = _resolve(args, defaults)
    clocks = [clock_from_config(c) for c in config["clocks"]]
    labels = _unique_labels(clocks)
    h, rho0 = _default_system(config)
    ts = np.linspace(0.0, float(config["t_max"]), int(config["n_points"]))
    config.update(clocks=[c.to_config() for c in clocks],
                  hamiltonian=matrix_config(h.matrix), rho0=matrix_config(rho0.matrix))

    table = TimeSeries(["t"] + [f"p_{lab}" for lab in labels])
    curves = {}
    for clock, lab in zip(clocks, labels):
        curves[lab] = _parallel_map(
            lambda t, c=clock: survival(rho0, evolve_spectral(c, h, rho0, t)), ts, args.threads)
    for i, t in enumerate(ts):
        table.add(t=t, **{f"p_{lab}": curves[lab][i] for lab in labels})

    results = {}
    for clock, lab in zip(clocks, labels):
        results[lab] = {
            "fitted_slope": fit_initial_slope(ts, curves[lab]),
            "linear_coefficient": zeno_linear_coefficient(clock, h, rho0),
        }
    _emit(args, config, table, results)
    return 0


def run_rabi(args) -> int:
    defaults = {
        "clock": None,           # defaults to master_eq with the --tau flag
        "omega": 0.012271846303085130,   # pi/256 per ms
        "b": 1.0,
        "n": [1, 2, 4, 8, 16, 32, 64],
        "tau": 0.0,
    }
    config = _resolve(args, defaults)
    if config["clock"] is None:
        config["clock"] = {"type": "master_eq", "tau": float(config["tau"])}
    clock = clock_from_config(config["clock"])
    omega = float(config["omega"])
    b = float(config["b"])
    ns = [int(n) for n in parse_grid(config["n"])]
    config.update(clock=clock.to_config(), n=ns)

    perfect = PerfectClock()
    table = TimeSeries(["n", "interval", "p2", "p2_perfect"])
    for n in ns:
        table.add(n=n, interval=np.pi / (n * omega),
                  p2=rabi_population(clock, omega, b, n),
                  p2_perfect=rabi_population(perfect, omega, b, n))
    _emit(args, config, table)
    return 0


def run_oscillator(args) -> int:
    defaults = {
        "clocks": [{"type": "milburn", "tau": 4.442882938158366}],
        "omega": 1.0,
        "k": 1.0,
        "t_grid": "0:20:0.2",
        "mc_samples": 0,
        "mc_steps": 256,
    }
    config = _resolve(args, defaults)
    clocks = [clock_from_config(c) for c in config["clocks"]]
    labels = _unique_labels(clocks)
    omega, coupling = float(config["omega"]), float(config["k"])
    ts = parse_grid(config["t_grid"])
    n_mc = int(config["mc_samples"])
    seed = int(config["seed"])
    config.update(clocks=[c.to_config() for c in clocks], t_grid=ts)

    h = three_level_hamiltonian(omega, coupling)
    rho0 = DensityMatrix.pure(np.eye(3)[0])
    perfect = PerfectClock()

    columns = ["t", "p_perfect"]
    for lab in labels:
        columns += [f"p_closed_{lab}", f"p_spectral_{lab}"]
        if n_mc:
            columns += [f"p_mc_{lab}", f"stderr_mc_{lab}"]
    table = TimeSeries(columns)

    def sampler_for(clock):
        if isinstance(clock, BonifacioClock):
            return GammaSampler(clock)
        if isinstance(clock, MilburnClock):
            return PoissonSampler(clock)
        if isinstance(clock, MasterEquationClock):
            return WienerSampler(clock)
        if isinstance(clock, OrnsteinUhlenbeckClock):
            return OUSampler(clock.kappa, clock.theta, int(config["mc_steps"]))
        if isinstance(clock, PerfectClock):
            return PerfectSampler()
        raise ValidationError(f"no Monte-Carlo sampler for the {clock.label} law")

    rows = []
    for t in ts:
        record = {"t": t, "p_perfect": three_level_survival(perfect, omega, coupling, t)}
        for clock, lab in zip(clocks, labels):
            record[f"p_closed_{lab}"] = three_level_survival(clock, omega, coupling, t)
            record[f"p_spectral_{lab}"] = survival(rho0, evolve_spectral(clock, h, rho0, t))
            if n_mc:
                if t == 0:
                    record[f"p_mc_{lab}"], record[f"stderr_mc_{lab}"] = 1.0, 0.0
                else:
                    est = mc_evolve(h, rho0, t, sampler_for(clock), n_mc, seed)
                    value = survival(rho0, est.value)
                    err = float(np.sqrt(np.sum((np.abs(rho0.matrix) * est.stderr) ** 2)))
                    record[f"p_mc_{lab}"], record[f"stderr_mc_{lab}"] = value, err
        rows.append(record)
    for record in rows:
        table.add(**record)
    _emit(args, config, table)
    return 0


def run_decay(args) -> int:
    defaults = {
        "model": {"omega_a": 10.0, "band_center": 10.0, "band_width": 20.0,
                  "n_levels": 400, "coupling": 0.05},
        "clocks": [{"type": "perfect"}, {"type": "master_eq", "tau": 0.2}],
        "t_grid": "0:100:1",
        "lineshape_t": None,       # default 50/gamma
        "lineshape_points": 11,
        "lineshape_span": 5.0,     # in units of gamma around the pole
    }
    config = _resolve(args, defaults)
    flag_overrides = {k: getattr(args, k) for k in
                      ("omega_a", "band_center", "band_width", "n_levels", "coupling")
                      if getattr(args, k, None) is not None}
    spec = {**config["model"], **flag_overrides}
    config["model"] = spec
    try:
        model = build_decay_model(float(spec["omega_a"]), float(spec["band_center"]),
                                  float(spec["band_width"]), int(spec["n_levels"]),
                                  float(spec["coupling"]))
    except (KeyError, TypeError) as err:
        raise ValidationError(f"bad decay model config: {err}") from None
    clocks = [clock_from_config(c) for c in config["clocks"]]
    labels = _unique_labels(clocks)
    ts = parse_grid(config["t_grid"])
    pole = pole_estimate(model)
    t_line = config["lineshape_t"]
    t_line = 50.0 / pole.gamma if t_line is None else float(t_line)
    span = float(config["lineshape_span"]) * pole.gamma
    omegas = np.linspace(pole.omega_p - span, pole.omega_p + span,
                         int(config["lineshape_points"]))
    config.update(clocks=[c.to_config() for c in clocks], t_grid=ts, lineshape_t=t_line)

    table = TimeSeries(["kind", "t", "omega"] + [f"p_{lab}" for lab in labels] + ["lorentzian"])
    for t in ts:
        table.add(kind="survival", t=t,
                  **{f"p_{lab}": pole_survival(c, pole, t) for c, lab in zip(clocks, labels)})
    for w in omegas:
        table.add(kind="lineshape", omega=float(w), t=t_line,
                  lorentzian=float(lorentzian_line(model, pole, w)),
                  **{f"p_{lab}": line_shape(c, model, pole, float(w), t_line)
                     for c, lab in zip(clocks, labels)})
    results = {
        "omega_p": pole.omega_p,
        "gamma": pole.gamma,
        "z_p": pole.z_p,
        "gamma_golden_rule": pole.gamma_golden_rule,
        "omega_p_perturbative": pole.omega_p_perturbative,
        "tau_z": model.tau_z,
        "recurrence_time": model.recurrence_time,
    }
    _emit(args, config, table, results)
    return 0


def run_mc(args) -> int:
    defaults = {
        "sampler": {"type": "gamma", "tau": 0.5},
        "t": 2.0,
        "k_grid": [0.25, 0.5, 1.0, 2.0, 4.0],
        "n_samples": 10000,
        "n_steps": 256,
    }
    config = _resolve(args, defaults)
    spec = dict(config["sampler"])
    kind = spec.pop("type", None)
    n_steps = int(config["n_steps"])
    if kind == "gamma":
        clock = BonifacioClock(tau=spec.pop("tau"), lam=spec.pop("lambda", None))
        sampler = GammaSampler(clock)
    elif kind == "poisson":
        clock = MilburnClock(tau=spec.pop("tau"), lam=spec.pop("lambda", None))
        sampler = PoissonSampler(clock)
    elif kind == "wiener":
        clock = MasterEquationClock(tau=spec.pop("tau"))
        sampler = WienerSampler(clock)
    elif kind == "ou":
        clock = OrnsteinUhlenbeckClock(kappa=spec.pop("kappa"), theta=spec.pop("theta"))
        sampler = OUSampler(clock.kappa, clock.theta, n_steps)
    elif kind == "perfect":
        clock = PerfectClock()
        sampler = PerfectSampler()
    else:
        raise ValidationError(
            f"unknown sampler type {kind!r}; expected gamma|poisson|wiener|ou|perfect"
        )
    t = float(config["t"])
    ks = parse_grid(config["k_grid"])
    n = int(config["n_samples"])
    seed = int(config["seed"])
    config.update(k_grid=ks)

    table = TimeSeries(["k", "mc_re", "mc_im", "stderr", "exact_re", "exact_im",
                        "abs_diff", "within_3se"])
    for k in ks:
        est = mc_char(sampler, t, k, n, seed)
        exact = clock.char_fn(t, k)
        diff = abs(est.value - exact)
        table.add(k=k, mc_re=est.value.real, mc_im=est.value.imag, stderr=est.stderr,
                  exact_re=exact.real, exact_im=exact.imag, abs_diff=diff,
                  within_3se=bool(diff <= 3 * est.stderr))
    _emit(args, config, table)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(sub):
    sub.add_argument("--config", help="JSON config file (a previous sidecar also works)")
    sub.add_argument("--out", help="CSV output path (stdout when omitted)")
    sub.add_argument("--sidecar", help="sidecar path (default: <out>.json)")
    sub.add_argument("--seed", type=int, help=f"random seed (default {DEFAULT_SEED})")
    sub.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")


def _add_clock_flags(sub):
    sub.add_argument("--type", help="inline clock type (see clock grammar)")
    sub.add_argument("--tau", type=float)
    sub.add_argument("--sigma", type=float)
    sub.add_argument("--lambda", dest="lam", type=float)
    sub.add_argument("--kappa", type=float)
    sub.add_argument("--theta", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clockdyn",
        description="Simulate quantum systems timed by imperfect clocks.",
    )
    parser.add_argument("--version", action="version", version=f"clockdyn {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("clock", help="tabulate Pi(t,k), P(t,s), and moments")
    _add_common(p)
    _add_clock_flags(p)
    p.add_argument("--t", help="clock times (grid syntax)")
    p.add_argument("--k-grid", dest="k_grid", help="frequency grid")
    p.add_argument("--s-grid", dest="s_grid", help="ideal-time grid for the density")
    p.set_defaults(run=run_clock)

    p = subs.add_parser("evolve", help="density-matrix trajectory")
    _add_common(p)
    _add_clock_flags(p)
    p.add_argument("--t-grid", dest="t_grid")
    p.add_argument("--method", choices=["spectral", "master"])
    p.add_argument("--dt", type=float)
    p.set_defaults(run=run_evolve)

    p = subs.add_parser("zeno", help="small-time survival scan and fitted slopes")
    _add_common(p)
    _add_clock_flags(p)
    p.add_argument("--t-max", dest="t_max", type=float)
    p.add_argument("--n-points", dest="n_points", type=int)
    p.set_defaults(run=run_zeno)

    p = subs.add_parser("rabi", help="pulsed-measurement populations vs pulse count")
    _add_common(p)
    p.add_argument("--omega", type=float, help="Rabi frequency")
    p.add_argument("--omega-ms", dest="omega", type=float,
                   help="alias of --omega (value in 1/ms if your times are in ms)")
    p.add_argument("--b", type=float, help="initial level-1 population")
    p.add_argument("--n", help="comma list of measurement counts")
    p.add_argument("--tau", type=float, help="master-equation decoherence time")
    p.set_defaults(run=run_rabi)

    p = subs.add_parser("oscillator", help="three-level survival curves")
    _add_common(p)
    _add_clock_flags(p)
    p.add_argument("--clock", dest="type", help="alias of --type")
    p.add_argument("--omega", type=float)
    p.add_argument("--k", type=float)
    p.add_argument("--t-grid", dest="t_grid")
    p.add_argument("--mc-samples", dest="mc_samples", type=int)
    p.set_defaults(run=run_oscillator)

    p = subs.add_parser("decay", help="decay model: pole, survival, line shape")
    _add_common(p)
    _add_clock_flags(p)
    p.add_argument("--omega-a", dest="omega_a", type=float)
    p.add_argument("--band-center", dest="band_center", type=float)
    p.add_argument("--band-width", dest="band_width", type=float)
    p.add_argument("--n-levels", dest="n_levels", type=int)
    p.add_argument("--coupling", type=float)
    p.add_argument("--t-grid", dest="t_grid")
    p.add_argument("--lineshape-t", dest="lineshape_t", type=float)
    p.set_defaults(run=run_decay)

    p = subs.add_parser("mc", help="Monte-Carlo validation: mc_char vs char_fn")
    _add_common(p)
    p.add_argument("--sampler", dest="sampler_type",
                   choices=["gamma", "poisson", "wiener", "ou", "perfect"])
    p.add_argument("--tau", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--k-grid", dest="k_grid")
    p.add_argument("--n-samples", dest="n_samples", type=int)
    p.set_defaults(run=run_mc)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand == "mc" and getattr(args, "sampler_type", None):
        spec = {"type": args.sampler_type}
        for key, attr in (("tau", "tau"), ("lambda", "lam"), ("kappa", "kappa"),
                          ("theta", "theta")):
            if getattr(args, attr, None) is not None:
                spec[key] = getattr(args, attr)
        args.sampler = spec
    try:
        return args.run(args)
    except (ValidationError, ClockDomainError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except RegimeError as err:
        print(f"regime error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
