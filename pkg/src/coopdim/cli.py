"""Command-line front end.

    coopdim coupling --d 3 --r-tilde 1
    coopdim fig3 --out fig3.csv
    coopdim evolve --initial symmetric_pair --t-final 5 --format json
    coopdim verify --out report.json

Exit codes: 0 success, 1 verification failure, 2 invalid input (a JSON
error record goes to stderr), 3 numerical-contract violation.
"""
import argparse
from dataclasses import dataclass, field
import hashlib
import json
import math
import sys

import numpy as np

from . import __version__, coupling, dynamics, verify
from .geometry import (
    ConfigurationError,
    Dipole,
    check_dimension,
    check_separation,
    orientation_from_angles,
    separation,
    theta_far,
    theta_near,
    validate_configuration,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

FORMATS = ("csv", "json")
X1 = (1.0, 0.0, 0.0)
X3 = (0.0, 0.0, 1.0)


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    d: float = 3.0
    dipoles: list = field(default_factory=list)
    medium: coupling.MediumParams | None = None
    omega0: float = 0.0
    output: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.format not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}, got {self.format!r}")
        self.d = check_dimension(self.d)
        self.omega0 = float(self.omega0)

    def validate(self):
        if not self.dipoles:
            raise ConfigurationError("configuration has no dipoles")
        validate_configuration(self.dipoles, self.d)

    def to_dict(self):
        medium = None
        if self.medium is not None:
            eps, loc = complex(self.medium.epsilon), complex(self.medium.local_field)
            medium = {"epsilon_re": eps.real, "epsilon_im": eps.imag,
                      "local_field_re": loc.real, "local_field_im": loc.imag}
        return {"d": self.d, "dipoles": [p.to_dict() for p in self.dipoles],
                "medium": medium, "omega0": self.omega0,
                "output": self.output, "format": self.format}

    @classmethod
    def from_dict(cls, data):
        unknown = set(data) - {"d", "dipoles", "medium", "omega0", "output", "format"}
        if unknown:
            raise UsageError(f"unknown configuration keys: {sorted(unknown)}")
        medium = data.get("medium")
        if medium is not None:
            medium = coupling.MediumParams(
                epsilon=complex(medium.get("epsilon_re", 1.0), medium.get("epsilon_im", 0.0)),
                local_field=complex(medium.get("local_field_re", 1.0),
                                    medium.get("local_field_im", 0.0)),
            )
        return cls(d=data.get("d", 3.0),
                   dipoles=[Dipole.from_dict(p) for p in data.get("dipoles", [])],
                   medium=medium, omega0=data.get("omega0", 0.0),
                   output=data.get("output"), format=data.get("format", "csv"))

    def hash(self):
        """SHA-256 of the configuration, ignoring where the output is written."""
        data = {k: v for k, v in self.to_dict().items() if k != "output"}
        blob = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    start: float
    stop: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        if self.axis not in ("r_tilde", "d", "theta1", "theta2"):
            raise UsageError(f"unknown sweep axis {self.axis!r}")
        if not self.start < self.stop:
            raise UsageError("sweep needs start < stop")
        if self.points < 2:
            raise UsageError("sweep needs at least 2 points")
        if self.scale not in ("linear", "log"):
            raise UsageError("scale must be linear or log")
        if self.scale == "log" and self.start <= 0:
            raise UsageError("log scale needs start > 0")

    def values(self):
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _error_record("UsageError", message)
        sys.exit(EXIT_INVALID)


def _error_record(kind, message):
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


def parse_vector(text):
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    return parts


def parse_grid(text):
    parts = text.lower().split("x")
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise argparse.ArgumentTypeError(f"expected n1xn2, got {text!r}")
    n1, n2 = int(parts[0]), int(parts[1])
    if n1 < 2 or n2 < 2:
        raise argparse.ArgumentTypeError("grid needs at least 2 points per axis")
    return n1, n2


def parse_range(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected start,stop,points, got {text!r}")
    return float(parts[0]), float(parts[1]), int(parts[2])


def build_config(args):
    """RunConfig from --config, then overridden by explicit flags."""
    if args.config:
        with open(args.config) as fh:
            cfg = RunConfig.from_dict(json.load(fh))
    else:
        cfg = RunConfig()
    if args.d is not None:
        cfg.d = check_dimension(args.d)
    if args.omega0 is not None:
        cfg.omega0 = float(args.omega0)
    if args.out is not None:
        cfg.output = args.out
    if args.format is not None:
        cfg.format = args.format
    pair_flags = (args.r_tilde, args.mu_i, args.mu_j, args.r_hat)
    if any(v is not None for v in pair_flags) or not cfg.dipoles:
        cfg.dipoles = pair_dipoles(
            1.0 if args.r_tilde is None else args.r_tilde,
            X3 if args.mu_i is None else args.mu_i,
            X3 if args.mu_j is None else args.mu_j,
            X1 if args.r_hat is None else args.r_hat,
        )
    if any(v is not None for v in (args.epsilon_re, args.epsilon_im, args.local_field)):
        base = cfg.medium or coupling.MediumParams()
        eps = complex(base.epsilon)
        cfg.medium = coupling.MediumParams(
            epsilon=complex(eps.real if args.epsilon_re is None else args.epsilon_re,
                            eps.imag if args.epsilon_im is None else args.epsilon_im),
            local_field=base.local_field if args.local_field is None
            else complex(args.local_field.replace(" ", "")),
        )
    return cfg


def pair_dipoles(r_tilde, mu_i, mu_j, r_hat):
    """Dipole i at r~ r_hat, dipole j at the origin (r_ij = r_i - r_j)."""
    r_hat = np.asarray(r_hat, dtype=float)
    norm = np.linalg.norm(r_hat)
    if norm == 0.0:
        raise UsageError("r_hat must be nonzero")
    if not r_tilde > 0:
        raise UsageError("r_tilde must be positive")
    return [Dipole(r_tilde * r_hat / norm, mu_i), Dipole(np.zeros(3), mu_j)]


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _json_value(v):
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (np.integer, int)):
        return int(v)
    if v is None or isinstance(v, str):
        return v
    v = float(v)
    return None if math.isnan(v) else v


def emit(command, cfg, columns, rows, stream, extra=None, meta=None):
    """Write rows as CSV (with # header lines) or a single JSON document."""
    if cfg.format == "json":
        doc = {"tool": "coopdim", "version": __version__, "command": command,
               "config": cfg.to_dict(), "config_sha256": cfg.hash(),
               "columns": list(columns),
               "records": [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows]}
        if meta:
            doc["meta"] = {k: _json_value(v) for k, v in meta.items()}
        if extra:
            doc.update(extra)
        stream.write(json.dumps(doc, indent=1) + "\n")
        return
    stream.write(f"# coopdim {__version__}\n# command: {command}\n")
    stream.write(f"# config_sha256: {cfg.hash()}\n")
    for k, v in (meta or {}).items():
        stream.write(f"# {k}: {_fmt(v)}\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(_fmt(v) for v in row) + "\n")


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w", newline="")


def _write(command, cfg, columns, rows, extra=None, meta=None):
    stream = _open_out(cfg.output)
    try:
        emit(command, cfg, columns, rows, stream, extra, meta)
    finally:
        if stream is not sys.stdout:
            stream.close()


COUPLING_COLUMNS = ("i", "j", "d", "r_tilde", "omega", "gamma", "omega_norm", "gamma_norm",
                    "theta_far", "theta_near", "medium")


def coupling_records(cfg):
    """One row per pair i < j (1-based indices)."""
    cfg.validate()
    rows = []
    n = len(cfg.dipoles)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = cfg.dipoles[i], cfg.dipoles[j]
            if cfg.medium is None:
                res = coupling.collective_coupling(cfg.d, a, b, normalize=False)
            else:
                res = coupling.dielectric_rescale(coupling.collective_coupling, cfg.medium,
                                                  a, b, cfg.d, normalize=False)
            r, r_hat = separation(a, b)
            rows.append((i + 1, j + 1, cfg.d, r, res.omega, res.gamma, res.omega_norm,
                         res.gamma_norm, float(theta_far(a.orientation, b.orientation, r_hat)),
                         float(theta_near(a.orientation, b.orientation, r_hat, cfg.d)),
                         cfg.medium is not None))
    return rows


def cmd_coupling(args):
    cfg = build_config(args)
    _write("coupling", cfg, COUPLING_COLUMNS, coupling_records(cfg))
    return EXIT_OK


def _pair(cfg):
    cfg.validate()
    if len(cfg.dipoles) != 2:
        raise UsageError("this command needs exactly two dipoles")
    a, b = cfg.dipoles
    r, r_hat = separation(a, b)
    return a, b, r, r_hat


def sweep_rows(cfg, spec, theta1=0.0, theta2=0.0):
    a, b, r, r_hat = _pair(cfg)
    vals = spec.values()
    n = 1.0 if cfg.medium is None else cfg.medium.index
    s = 1.0 if cfg.medium is None else cfg.medium.rate_scale
    mags = (a.magnitude, b.magnitude)
    mu_i, mu_j = a.orientation, b.orientation
    if spec.axis == "d":
        for d in vals:
            check_dimension(d)
            check_separation(r_hat, d)
        outs = [coupling.coupling_sweep(d, n * r, mu_i, mu_j, r_hat, mags) for d in vals]
        out = {k: np.array([o[k] for o in outs]) for k in ("omega", "gamma", "omega_norm",
                                                           "gamma_norm")}
        ds, rs = vals, np.full_like(vals, r)
    else:
        if spec.axis == "r_tilde":
            if vals[0] <= 0:
                raise UsageError("r_tilde sweep must stay positive")
            rs = vals
        else:
            rs = np.full_like(vals, r)
            t1 = vals if spec.axis == "theta1" else theta1
            t2 = vals if spec.axis == "theta2" else theta2
            mu_i = mu_j = orientation_from_angles(t1, t2)
        out = coupling.coupling_sweep(cfg.d, n * rs, mu_i, mu_j, r_hat, mags)
        ds = np.full_like(vals, cfg.d)
    rows = []
    for k, v in enumerate(vals):
        row = [ds[k], rs[k]]
        if spec.axis in ("theta1", "theta2"):
            row += [v if spec.axis == "theta1" else theta1, v if spec.axis == "theta2" else theta2]
        row += [s * out["omega"][k], s * out["gamma"][k], out["omega_norm"][k],
                out["gamma_norm"][k]]
        rows.append(row)
    cols = ["d", "r_tilde"]
    if spec.axis in ("theta1", "theta2"):
        cols += ["theta1", "theta2"]
    cols += ["omega", "gamma", "omega_norm", "gamma_norm"]
    return cols, rows


def cmd_sweep(args):
    cfg = build_config(args)
    spec = SweepSpec(args.axis, args.start, args.stop, args.points, args.scale)
    cols, rows = sweep_rows(cfg, spec, args.theta1, args.theta2)
    _write("sweep", cfg, cols, rows, meta={"axis": spec.axis})
    return EXIT_OK


FIG3_COLUMNS = ("d", "r_tilde", "omega_norm", "gamma_norm")
SLICE_DIMENSIONS = (1.0, 2.0, 3.0)


def fig3_rows(d_values, r_values):
    """Normalised couplings for mu_i = mu_j = x3, r_hat = x1 on a (d, r~) grid."""
    rows = []
    for d in d_values:
        out = coupling.coupling_sweep(d, r_values, X3, X3, X1)
        rows += [(d, r, w, g) for r, w, g in zip(r_values, out["omega_norm"], out["gamma_norm"])]
    return rows


def _slices_path(path):
    if path in (None, "-"):
        return None
    stem, dot, ext = path.rpartition(".")
    return f"{stem}_slices.{ext}" if dot and stem else f"{path}_slices"


def cmd_fig3(args):
    cfg = build_config(args)
    r_start, r_stop, r_n = args.r_range
    d_start, d_stop, d_n = args.d_range
    if args.grid is not None:
        d_n, r_n = args.grid
    r_spec = SweepSpec("r_tilde", r_start, r_stop, r_n, args.r_scale)
    d_spec = SweepSpec("d", d_start, d_stop, d_n)
    if r_start <= 0:
        raise UsageError("r_tilde range must be positive")
    d_values = d_spec.values()
    for d in d_values:
        check_dimension(d)
    r_values = r_spec.values()
    rows = fig3_rows(d_values, r_values)
    slices = fig3_rows(SLICE_DIMENSIONS, r_values)
    if cfg.format == "json":
        extra = {"slices": [dict(zip(FIG3_COLUMNS, map(_json_value, row))) for row in slices]}
        _write("fig3", cfg, FIG3_COLUMNS, rows, extra=extra)
        return EXIT_OK
    _write("fig3", cfg, FIG3_COLUMNS, rows)
    slice_path = args.slices_out or _slices_path(cfg.output)
    if slice_path is not None:
        slice_cfg = RunConfig(d=cfg.d, dipoles=cfg.dipoles, medium=cfg.medium,
                              omega0=cfg.omega0, output=slice_path, format="csv")
        _write("fig3-slices", slice_cfg, FIG3_COLUMNS, slices)
    return EXIT_OK


FIG2_COLUMNS = ("d", "theta1", "theta2", "omega_norm", "gamma_norm", "omega_abs", "gamma_abs",
                "omega_x", "omega_y", "omega_z", "gamma_x", "gamma_y", "gamma_z")


def fig2_rows(r_tilde, n_theta1, n_theta2, dimensions=SLICE_DIMENSIONS):
    """Parallel dipoles mu(theta1, theta2) at separation r~ x1.

    Values are normalised by the largest single-dipole rate over
    orientations, a constant per dimension, so the angular shape is kept. The ``*_abs`` columns
    are scaled to unit maximum per dimension and the xyz columns place them
    along mu.
    """
    if not r_tilde > 0:
        raise UsageError("r_tilde must be positive")
    t1 = np.linspace(0.0, math.pi, n_theta1)
    t2 = np.linspace(0.0, 2.0 * math.pi, n_theta2)
    T1, T2 = np.meshgrid(t1, t2, indexing="ij")
    mu = orientation_from_angles(T1, T2)
    rows = []
    for d in dimensions:
        out = coupling.coupling_sweep(d, r_tilde, mu, mu, X1)
        ref = coupling.max_self_rate(d)
        w, g = out["omega"] / ref, out["gamma"] / ref
        wa = np.abs(w) / max(np.abs(w).max(), np.finfo(float).tiny)
        ga = np.abs(g) / max(np.abs(g).max(), np.finfo(float).tiny)
        for idx in np.ndindex(T1.shape):
            m = mu[idx]
            rows.append((d, T1[idx], T2[idx], w[idx], g[idx], wa[idx], ga[idx],
                         *(wa[idx] * m), *(ga[idx] * m)))
    return rows


def cmd_fig2(args):
    cfg = build_config(args)
    n1, n2 = args.grid if args.grid is not None else (91, 181)
    r = 0.05 if args.r_tilde is None else args.r_tilde
    _write("fig2", cfg, FIG2_COLUMNS, fig2_rows(r, n1, n2))
    return EXIT_OK


def _coupling_matrix(cfg):
    cfg.validate()
    return coupling.coupling_matrix(cfg.d, cfg.dipoles, cfg.omega0, cfg.medium)


def cmd_modes(args):
    cfg = build_config(args)
    modes = dynamics.collective_modes(_coupling_matrix(cfg))
    n = len(cfg.dipoles)
    cols = ["mode", "shift", "rate"]
    cols += [f"v{k + 1}_re" for k in range(n)] + [f"v{k + 1}_im" for k in range(n)]
    rows = []
    for m in range(n):
        v = modes.vectors[:, m]
        rows.append([m + 1, modes.shifts[m], modes.rates[m], *v.real, *v.imag])
    _write("modes", cfg, cols, rows, meta={"omega0": modes.omega0})
    return EXIT_OK


def cmd_evolve(args):
    """Times are in units of 1/gamma_ref and intensity in units of gamma_ref."""
    cfg = build_config(args)
    n = len(cfg.dipoles)
    if n > dynamics.MAX_ATOMS:
        raise UsageError(f"evolve supports at most {dynamics.MAX_ATOMS} atoms")
    ref = coupling.max_self_rate(cfg.d)
    couplings = _coupling_matrix(cfg) / ref
    kind = args.initial or ("symmetric_pair" if n == 2 else "all_excited")
    rho0 = dynamics.prepare_state(kind, n)
    dt = args.dt if args.dt is not None else dynamics.max_step(couplings)
    if args.t_final < 0:
        raise UsageError("t_final must be non-negative")
    trace = dynamics.evolve(rho0, couplings, args.t_final, dt)
    cols = ["t", "intensity"] + [f"p{k + 1}" for k in range(n)]
    keep = np.arange(0, len(trace.times), args.stride)
    if keep[-1] != len(trace.times) - 1:
        keep = np.append(keep, len(trace.times) - 1)
    rows = [[trace.times[k], trace.intensity[k], *trace.populations[k]] for k in keep]
    step = trace.times[1] - trace.times[0] if len(trace.times) > 1 else dt
    meta = {"gamma_ref": ref, "dt": step, "error_estimate": trace.error_estimate,
            "trace_drift": trace.trace_drift}
    _write("evolve", cfg, cols, rows, meta=meta, extra={"initial": kind})
    return EXIT_OK


def cmd_verify(args):
    report = verify.run_suite(tol=args.tol, pairs=args.pairs, seed=args.seed)
    report = {"tool": "coopdim", "version": __version__, **report}
    stream = _open_out(args.out)
    try:
        stream.write(json.dumps(report, indent=1) + "\n")
    finally:
        if stream is not sys.stdout:
            stream.close()
    for name in report["failed_checks"]:
        sys.stderr.write(f"FAILED {name}\n")
    return EXIT_OK if report["passed"] else EXIT_VERIFY_FAILED


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--d", type=float, help="field dimension in [1, 3]")
    p.add_argument("--r-tilde", type=float, help="dimensionless separation k0 r")
    p.add_argument("--mu-i", type=parse_vector, help="orientation of dipole i, x,y,z")
    p.add_argument("--mu-j", type=parse_vector, help="orientation of dipole j, x,y,z")
    p.add_argument("--r-hat", type=parse_vector, help="separation direction, x,y,z")
    p.add_argument("--epsilon-re", type=float)
    p.add_argument("--epsilon-im", type=float)
    p.add_argument("--local-field", help="local-field factor (complex literal allowed)")
    p.add_argument("--omega0", type=float)
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--grid", type=parse_grid, help="n1xn2 grid size")
    p.add_argument("--tol", type=float, help="tolerance override")
    return p


def build_parser():
    common = _common()
    parser = _Parser(prog="coopdim", description="Collective dipole couplings in d dimensions.")
    parser.add_argument("--version", action="version", version=f"coopdim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("coupling", parents=[common], help="pairwise couplings")
    p.set_defaults(func=cmd_coupling)

    p = sub.add_parser("sweep", parents=[common], help="pair coupling along one axis")
    p.add_argument("--axis", choices=("r_tilde", "d", "theta1", "theta2"), default="r_tilde")
    p.add_argument("--start", type=float, default=0.05)
    p.add_argument("--stop", type=float, default=20.0)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--scale", choices=("linear", "log"), default="linear")
    p.add_argument("--theta1", type=float, default=0.0, help="fixed polar angle")
    p.add_argument("--theta2", type=float, default=0.0, help="fixed azimuthal angle")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fig3", parents=[common], help="(d, r~) surfaces of the normalised couplings")
    p.add_argument("--r-range", type=parse_range, default=(0.05, 20.0, 400),
                   help="start,stop,points for r~")
    p.add_argument("--r-scale", choices=("linear", "log"), default="linear")
    p.add_argument("--d-range", type=parse_range, default=(1.0, 3.0, 201),
                   help="start,stop,points for d")
    p.add_argument("--slices-out", help="path for the d = 1, 2, 3 slices")
    p.set_defaults(func=cmd_fig3)

    p = sub.add_parser("fig2", parents=[common], help="orientation surfaces at small r~")
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("modes", parents=[common], help="single-excitation collective modes")
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("evolve", parents=[common], help="master-equation emission trace")
    p.add_argument("--initial", help="symmetric_pair, antisymmetric_pair, all_excited, "
                                     "ground, or a product such as eg")
    p.add_argument("--t-final", type=float, default=5.0, help="in units of 1/gamma_ref")
    p.add_argument("--dt", type=float, help="step (default: largest allowed)")
    p.add_argument("--stride", type=int, default=1, help="emit every n-th step")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("verify", parents=[common], help="closed forms against references")
    p.add_argument("--pairs", type=int, default=20, help="random orientation pairs per point")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except dynamics.NumericalContractError as exc:
        _error_record(type(exc).__name__, str(exc))
        return EXIT_NUMERICAL
    except (ValueError, KeyError, TypeError, OSError, coupling.NormalizationUndefined) as exc:
        _error_record(type(exc).__name__, str(exc))
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
