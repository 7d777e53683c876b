"""Command-line front end.

Configuration is a flat ``key = value`` file (``#`` starts a comment);
every key also exists as a ``--flag`` and flags win over the file.
Unset physical parameters fall back to the weak-driving working point
``delta_a = delta_c = 1, g = 0.2, kappa = gamma = 0.004, xi = 0.02,
chi = 0.01, n_fock = 10``.

Exit codes: 0 ok, 2 configuration error, 3 numerical diagnostic,
4 degenerate parameters.
"""
import argparse
import dataclasses
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, report
from .analytic import analytic_spectrum, spectral_params
from .correlation import DEFAULT_DECAY_FACTOR, DEFAULT_DT, default_tau_grid, emf_correlation
from .errors import (ConfigError, DegenerateParametersError, DiagnosticWarning,
                     SingularSteadyStateError)
from .model import Params
from .spectrum import DEFAULT_N_OMEGA, default_omega_grid, find_peaks, numeric_spectrum

EXIT_OK, EXIT_CONFIG, EXIT_DIAGNOSTIC, EXIT_DEGENERATE = 0, 2, 3, 4

MODES = ("spectrum-numeric", "spectrum-analytic", "correlation", "peaks", "scan")
KINDS = ("numeric", "analytic")
PARAM_FLOATS = ("delta_a", "delta_c", "g", "xi", "chi", "kappa", "gamma", "omega_p")
FREQ_KEYS = ("omega_a", "omega_c")
SCAN_AXES = PARAM_FLOATS + ("n_fock",)
RUN_FLOATS = ("omega_min", "omega_max", "dt", "t_max")
RUN_INTS = ("n_omega", "workers")
RUN_STRINGS = ("mode", "kind", "out", "plot")
BOOL_KEYS = ("override_sign_constraints",)
ALL_KEYS = (PARAM_FLOATS + FREQ_KEYS + ("n_fock",) + RUN_FLOATS + RUN_INTS + RUN_STRINGS
            + BOOL_KEYS + ("scan",))


@dataclass(frozen=True)
class RunConfig:
    params: Params = field(default_factory=Params)
    mode: str = "spectrum-numeric"
    scan_axis: tuple = None
    kind: str = "numeric"
    omega_min: float = None
    omega_max: float = None
    n_omega: int = DEFAULT_N_OMEGA
    dt: float = DEFAULT_DT
    t_max: float = None
    output_path: str = None
    plot_path: str = None
    workers: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}, got {self.mode!r}")
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {', '.join(KINDS)}, got {self.kind!r}")
        if self.mode == "scan" and self.scan_axis is None:
            raise ConfigError("mode scan needs scan = <param>=<v1,v2,...>")
        if self.scan_axis is not None:
            name, values = self.scan_axis
            if name not in SCAN_AXES:
                raise ConfigError(f"scan parameter {name!r} is not a model parameter")
            if not values:
                raise ConfigError("scan needs at least one value")
        if self.n_omega < 2:
            raise ConfigError("n_omega must be >= 2")
        if self.dt <= 0:
            raise ConfigError("dt must be > 0")
        if self.t_max is not None and self.t_max <= 0:
            raise ConfigError("t_max must be > 0")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if (self.omega_min is not None and self.omega_max is not None
                and self.omega_min >= self.omega_max):
            raise ConfigError("omega_min must be below omega_max")

    def to_text(self) -> str:
        """Serialize to the ``key = value`` format understood by :func:`parse_config`."""
        p = self.params
        items = [(k, getattr(p, k)) for k in PARAM_FLOATS] + [
            ("n_fock", p.n_fock),
            ("override_sign_constraints", p.allow_negative_chi),
            ("mode", self.mode),
            ("kind", self.kind),
            ("n_omega", self.n_omega),
            ("dt", self.dt),
            ("workers", self.workers),
        ]
        for key, attr in (("omega_min", "omega_min"), ("omega_max", "omega_max"),
                          ("t_max", "t_max"), ("out", "output_path"), ("plot", "plot_path")):
            if getattr(self, attr) is not None:
                items.append((key, getattr(self, attr)))
        if self.scan_axis is not None:
            name, values = self.scan_axis
            items.append(("scan", f"{name}=" + ",".join(repr(v) for v in values)))
        lines = []
        for key, value in items:
            if isinstance(value, bool):
                value = str(value).lower()
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"


def _number(raw, key, where, kind=float):
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{where}: cannot parse {raw!r} as a number for {key}") from None
    if kind is int:
        if not value.is_integer():
            raise ConfigError(f"{where}: {key} must be an integer, got {raw!r}")
        return int(value)
    return value


def _bool(raw, key, where):
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{where}: cannot parse {raw!r} as a boolean for {key}")


def _scan(raw, where):
    name, sep, values = raw.partition("=")
    name = name.strip()
    if not sep or not values.strip():
        raise ConfigError(f"{where}: scan must look like <param>=<v1,v2,...>, got {raw!r}")
    if name not in SCAN_AXES:
        raise ConfigError(f"{where}: scan parameter {name!r} is not a model parameter")
    kind = int if name == "n_fock" else float
    return name, tuple(_number(v.strip(), f"scan {name}", where, kind) for v in values.split(","))


def read_config_text(text: str) -> dict:
    """Parse ``key = value`` lines into ``{key: (raw, "line N")}``."""
    entries = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        where = f"line {lineno}"
        if not sep:
            raise ConfigError(f"{where}: expected 'key = value', got {line!r}")
        if key not in ALL_KEYS:
            raise ConfigError(f"{where}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(f"{where}: duplicate key {key!r}")
        entries[key] = (value.strip(), where)
    return entries


def parse_config(text: str = "", overrides: dict = None) -> RunConfig:
    """Build a :class:`RunConfig` from config-file text plus flag overrides.

    ``overrides`` maps keys to raw string values (as given on the command
    line); they replace file entries and are attributed as ``flag --key``.
    """
    entries = read_config_text(text)
    for key, raw in (overrides or {}).items():
        if raw is None:
            continue
        if key not in ALL_KEYS:
            raise ConfigError(f"unknown option {key!r}")
        entries[key] = (raw if isinstance(raw, str) else str(raw), f"flag --{key.replace('_', '-')}")

    values = {}
    for key, (raw, where) in entries.items():
        if key in PARAM_FLOATS or key in FREQ_KEYS or key in RUN_FLOATS:
            values[key] = _number(raw, key, where)
        elif key in RUN_INTS or key == "n_fock":
            values[key] = _number(raw, key, where, int)
        elif key in BOOL_KEYS:
            values[key] = _bool(raw, key, where)
        elif key == "scan":
            values[key] = _scan(raw, where)
        else:
            values[key] = raw

    pkw = {k: values[k] for k in PARAM_FLOATS + ("n_fock",) if k in values}
    for freq, det in (("omega_a", "delta_a"), ("omega_c", "delta_c")):
        if freq in values:
            if det in values:
                raise ConfigError(f"{entries[freq][1]}: give either {freq} or {det}, not both")
            pkw[det] = values[freq] - pkw.get("omega_p", Params.omega_p)
    pkw["allow_negative_chi"] = values.get("override_sign_constraints", False)
    try:
        params = Params(**pkw)
    except ConfigError as exc:
        msg = str(exc)
        name = msg.split(" ", 1)[0]
        where = entries.get(name, (None, None))[1]
        if where is None and name in ("delta_a", "delta_c"):
            where = entries.get(name.replace("delta", "omega"), (None, None))[1]
        raise ConfigError(f"{where}: {msg}" if where else msg) from None

    rkw = dict(params=params)
    for key, attr in (("mode", "mode"), ("kind", "kind"), ("omega_min", "omega_min"),
                      ("omega_max", "omega_max"), ("n_omega", "n_omega"), ("dt", "dt"),
                      ("t_max", "t_max"), ("out", "output_path"), ("plot", "plot_path"),
                      ("workers", "workers"), ("scan", "scan_axis")):
        if key in values:
            rkw[attr] = values[key]
    try:
        return RunConfig(**rkw)
    except ConfigError as exc:
        # attribute to the first offending key mentioned in the message
        msg = str(exc)
        for key in ALL_KEYS:
            if msg.startswith(key) or f" {key} " in f" {msg} ":
                if key in entries:
                    raise ConfigError(f"{entries[key][1]}: {msg}") from None
        raise


def _omega_grid(cfg, params_list):
    lo = cfg.omega_min
    hi = cfg.omega_max
    if lo is None or hi is None:
        grids = [default_omega_grid(p, cfg.n_omega) for p in params_list]
        lo = min(g[0] for g in grids) if lo is None else lo
        hi = max(g[-1] for g in grids) if hi is None else hi
    if lo >= hi:
        raise ConfigError("omega window is empty")
    return np.linspace(lo, hi, cfg.n_omega)


def _tau_grid(cfg, p):
    return default_tau_grid(p, dt=cfg.dt, t_max=cfg.t_max)


def _spectrum(cfg, p, omega, kind):
    if kind == "analytic":
        return analytic_spectrum(p, omega)
    return numeric_spectrum(p, omega, _tau_grid(cfg, p))


def _effective_meta(cfg, p, omega=None, tau=None):
    meta = {"mode": cfg.mode}
    if cfg.mode in ("peaks", "scan"):
        meta["kind"] = cfg.kind
    meta.update({k: getattr(p, k) for k in PARAM_FLOATS})
    meta["n_fock"] = p.n_fock
    meta["override_sign_constraints"] = p.allow_negative_chi
    if cfg.scan_axis is not None:
        meta["scan"] = f"{cfg.scan_axis[0]}=" + ",".join(report.fmt(v) for v in cfg.scan_axis[1])
    if omega is not None:
        meta.update(omega_min=omega[0], omega_max=omega[-1], n_omega=omega.size)
    if tau is not None:
        meta.update(dt=cfg.dt, t_max=tau[-1], n_tau=tau.size)
    elif cfg.mode != "spectrum-analytic" and not (cfg.mode in ("peaks", "scan")
                                                  and cfg.kind == "analytic"):
        meta["dt"] = cfg.dt
        meta["t_max"] = "14/Gamma_min" if cfg.t_max is None else cfg.t_max
    return meta


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="")


def _run_spectrum(cfg, kind):
    p = cfg.params
    omega = _omega_grid(cfg, [p])
    s = _spectrum(cfg, p, omega, kind)
    peaks = find_peaks(s)
    tau = _tau_grid(cfg, p) if kind == "numeric" else None
    meta = _effective_meta(cfg, p, omega, tau)
    meta.update(report.peak_meta(peaks))
    _emit(report.csv_text(meta, ["omega", "s_v"], report.spectrum_rows(s)), cfg.output_path)
    if cfg.plot_path:
        from .plotting import plot_spectra
        plot_spectra({kind: s}, cfg.plot_path, peaks=peaks)


def _run_correlation(cfg):
    p = cfg.params
    tau = _tau_grid(cfg, p)
    corr = emf_correlation(p, tau)
    meta = _effective_meta(cfg, p, tau=tau)
    _emit(report.csv_text(meta, ["tau", "re", "im"], report.correlation_rows(corr)),
          cfg.output_path)
    if cfg.plot_path:
        from .plotting import plot_correlation
        plot_correlation(corr, cfg.plot_path)


def _run_peaks(cfg):
    p = cfg.params
    omega = _omega_grid(cfg, [p])
    s = _spectrum(cfg, p, omega, cfg.kind)
    peaks = find_peaks(s)
    tau = _tau_grid(cfg, p) if cfg.kind == "numeric" else None
    meta = _effective_meta(cfg, p, omega, tau)
    meta["splitting"] = "none" if peaks.splitting is None else peaks.splitting
    csv_out = report.csv_text(meta, ["peak", "center", "height", "half_width"],
                              report.peak_rows(peaks))
    if cfg.output_path is None:
        sys.stdout.write(report.peaks_text(peaks))
        sys.stdout.write(csv_out)
    else:
        _emit(csv_out, cfg.output_path)
        sys.stdout.write(report.peaks_text(peaks))
    if cfg.plot_path:
        from .plotting import plot_spectra
        plot_spectra({cfg.kind: s}, cfg.plot_path, peaks=peaks)


def scan_spectra(cfg: RunConfig):
    """Spectra for every scan value, in scan-axis order, on one common grid."""
    name, values = cfg.scan_axis
    points = [cfg.params.replace(**{name: v}) for v in values]
    omega = _omega_grid(cfg, points)

    def one(p):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", DiagnosticWarning)
            s = _spectrum(cfg, p, omega, cfg.kind)
        return s, [w for w in caught if issubclass(w.category, DiagnosticWarning)]

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(one, points))
    else:
        results = [one(p) for p in points]
    for _, caught in results:
        for w in caught:
            warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
    return omega, points, [s for s, _ in results]


def _run_scan(cfg):
    name, values = cfg.scan_axis
    omega, points, spectra = scan_spectra(cfg)
    tau = _tau_grid(cfg, cfg.params) if cfg.kind == "numeric" else None
    meta = _effective_meta(cfg, cfg.params, omega, None)
    if tau is not None and cfg.t_max is not None:
        meta["t_max"] = cfg.t_max
    for i, (v, s) in enumerate(zip(values, spectra), start=1):
        meta[f"scan_{i}.{name}"] = v
        meta.update(report.peak_meta(find_peaks(s), prefix=f"scan_{i}."))
    rows = []
    for v, s in zip(values, spectra):
        rows.extend((v, w, sv) for w, sv in zip(s.omega, s.values))
    _emit(report.csv_text(meta, [name, "omega", "s_v"], rows), cfg.output_path)
    if cfg.plot_path:
        from .plotting import plot_spectra
        curves = {f"{name} = {v:g}": s.normalized() for v, s in zip(values, spectra)}
        plot_spectra(curves, cfg.plot_path, title=f"{cfg.kind} spectra, max-normalized")


def run(cfg: RunConfig) -> int:
    """Execute a run; returns the process exit code."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DiagnosticWarning)
        try:
            if cfg.mode == "correlation":
                _run_correlation(cfg)
            elif cfg.mode == "peaks":
                _run_peaks(cfg)
            elif cfg.mode == "scan":
                _run_scan(cfg)
            else:
                _run_spectrum(cfg, cfg.mode.split("-", 1)[1])
        except (DegenerateParametersError, SingularSteadyStateError) as exc:
            print(f"nanorabi: degenerate parameters: {exc}", file=sys.stderr)
            return EXIT_DEGENERATE
    diagnostics = [w for w in caught if issubclass(w.category, DiagnosticWarning)]
    for w in caught:
        if w not in diagnostics:
            warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
    for w in diagnostics:
        print(f"nanorabi: diagnostic: {w.message}", file=sys.stderr)
    return EXIT_DIAGNOSTIC if diagnostics else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nanorabi",
        description="Vacuum-Rabi-splitting correlation spectra of a qubit coupled to a "
                    "nonlinear nanomechanical resonator.")
    parser.add_argument("--version", action="version", version=f"nanorabi {__version__}")
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--mode", choices=MODES)
    parser.add_argument("--out", help="output CSV path (default: stdout)")
    parser.add_argument("--plot", help="also render a PNG figure to this path")
    parser.add_argument("--scan", metavar="PARAM=V1,V2,...")
    parser.add_argument("--kind", choices=KINDS, help="spectrum pipeline for peaks/scan")
    parser.add_argument("--workers", metavar="N")
    parser.add_argument("--override-sign-constraints", action="store_const", const="true",
                        help="allow negative chi")
    model = parser.add_argument_group("model parameters (GHz, ns)")
    for key in ("delta_a", "delta_c", "omega_a", "omega_c", "omega_p", "g", "xi", "chi",
                "kappa", "gamma", "n_fock"):
        model.add_argument("--" + key.replace("_", "-"), metavar="X")
    grids = parser.add_argument_group("grids")
    for key in ("omega_min", "omega_max", "n_omega", "dt", "t_max"):
        grids.add_argument("--" + key.replace("_", "-"), metavar="X")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k != "config" and v is not None}
    text = ""
    try:
        if args.config:
            try:
                text = Path(args.config).read_text(encoding="utf-8")
            except OSError as exc:
                raise ConfigError(f"cannot read config file: {exc}") from None
        cfg = parse_config(text, overrides)
    except ConfigError as exc:
        print(f"nanorabi: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
