"""Command-line interface.

Commands: ``analytic``, ``sweep``, ``scaling`` and ``gp-loop``.  Settings come
from defaults, then an optional ``--config`` file of ``key = value`` lines,
then command-line flags (later sources win).

Exit codes: 0 success, 2 configuration error, 3 numerical error (scan
boundary hit, no convergence), 4 I/O error.
"""

import argparse
import dataclasses
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import crit, export, model, svg
from .errors import InputError, NumericalError, ScanBoundaryHit, StepCountTooSmall
from .gp import NumberBasisState, gp_closed_form, gp_loop
from .sector_ed import ScanPolicy, ground_state

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4


class ConfigError(InputError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass
class RunConfig:
    omega: float = 1.0
    omega0: float = 1.0
    lambda_min: float = 0.4
    lambda_max: float = 1.2
    lambda_steps: int = 81
    n_ladder: tuple = (8, 16, 32, 64)
    m_max_factor: float = 6.0
    loop_steps: int = 512
    workers: int = 1
    out: str = None
    format: str = "csv"
    plot: bool = False
    n_atoms: int = 4
    coupling: float = 1.2

    def validate(self):
        for name in ("omega", "omega0", "m_max_factor"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(name, f"must be positive, got {value!r}")
        if not (math.isfinite(self.lambda_min) and self.lambda_min >= 0):
            raise ConfigError("lambda_min", f"must be >= 0, got {self.lambda_min!r}")
        if not (math.isfinite(self.lambda_max) and self.lambda_max > self.lambda_min):
            raise ConfigError("lambda_max", f"must exceed lambda_min={self.lambda_min!r}, got {self.lambda_max!r}")
        if self.lambda_steps < 2:
            raise ConfigError("lambda_steps", f"must be >= 2, got {self.lambda_steps!r}")
        if not self.n_ladder or any(n < 1 for n in self.n_ladder):
            raise ConfigError("n_ladder", f"needs one or more atom numbers >= 1, got {self.n_ladder!r}")
        if len(set(self.n_ladder)) != len(self.n_ladder):
            raise ConfigError("n_ladder", "atom numbers must be distinct")
        if self.workers < 1:
            raise ConfigError("workers", f"must be >= 1, got {self.workers!r}")
        if self.loop_steps < 1:
            raise ConfigError("loop_steps", f"must be >= 1, got {self.loop_steps!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError("format", f"must be csv or json, got {self.format!r}")
        if self.n_atoms < 1:
            raise ConfigError("n_atoms", f"must be >= 1, got {self.n_atoms!r}")
        if not (math.isfinite(self.coupling) and self.coupling >= 0):
            raise ConfigError("coupling", f"must be >= 0, got {self.coupling!r}")
        return self

    @property
    def params(self):
        return model.ModelParams(self.omega, self.omega0)

    @property
    def grid(self):
        return crit.uniform_grid(self.lambda_min, self.lambda_max, self.lambda_steps)

    @property
    def scan(self):
        return ScanPolicy(self.m_max_factor)


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
_ALIASES = {"lambda": "coupling"}


def _ladder(text):
    return tuple(int(part) for part in str(text).split(",") if part.strip())


def _bool(text):
    lowered = str(text).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _convert(name, raw):
    default = _FIELDS[name].default
    try:
        if name == "n_ladder":
            return _ladder(raw)
        if name == "out":
            return str(raw)
        if isinstance(default, bool):
            return _bool(raw)
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        return str(raw)
    except ValueError:
        raise ConfigError(name, f"cannot parse {raw!r}") from None


def read_config_file(path):
    """Flat ``key = value`` file; ``#`` starts a comment; dashes and underscores are interchangeable."""
    values = {}
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        key = _ALIASES.get(key, key)
        if not sep or key not in _FIELDS:
            raise ConfigError(key or f"line {lineno}", f"unrecognized config line {lineno}: {line!r}")
        values[key] = _convert(key, value.strip())
    return values


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dickegp",
        description="Geometric phase and superradiant transition of the rotating-wave Dicke model.",
        epilog="Precedence: command-line flags override --config file values, which override defaults.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value settings file")
    common.add_argument("--omega", help="photon frequency (default 1.0)")
    common.add_argument("--omega0", help="atomic level splitting (default 1.0)")
    common.add_argument("--lambda-min", help="lowest coupling on the grid (default 0.4)")
    common.add_argument("--lambda-max", help="highest coupling on the grid (default 1.2)")
    common.add_argument("--lambda-steps", help="number of uniform grid points (default 81)")
    common.add_argument("--n-ladder", help="comma-separated atom numbers (default 8,16,32,64)")
    common.add_argument("--m-max-factor", help="sector scan range factor (default 6)")
    common.add_argument("--loop-steps", help="loop discretization K for gp-loop (default 512)")
    common.add_argument("--workers", help="worker processes for sweeps (default 1)")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", help="table format: csv or json (default csv)")
    common.add_argument("--plot", action="store_const", const="true", help="also write an SVG next to --out")
    sub.add_parser("analytic", parents=[common], help="thermodynamic-limit table on the coupling grid")
    sub.add_parser("sweep", parents=[common], help="ED vs analytic sweep over the N ladder")
    sub.add_parser("scaling", parents=[common], help="fit of peak d(gamma0)/d(lambda) against N")
    loop = sub.add_parser("gp-loop", parents=[common], help="loop-product vs closed-form GP of an ED ground state")
    loop.add_argument("--n-atoms", help="atom number N (default 4)")
    loop.add_argument("--lambda", dest="coupling", help="coupling (default 1.2)")
    return parser


def resolve_config(args):
    values = {}
    if args.config:
        values.update(read_config_file(args.config))
    for name in _FIELDS:
        raw = getattr(args, name, None)
        if raw is not None:
            values[name] = _convert(name, raw)
    return RunConfig(**values).validate()


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_analytic(config):
    params = config.params
    lc = model.critical_coupling(params)
    rows = []
    for lam in config.grid:
        mf = model.mean_field(params, lam)
        rows.append(
            {
                "lambda": float(lam),
                "lambda_c": lc,
                "alpha": mf.alpha,
                "beta": mf.beta,
                "E0_per_atom": model.ground_energy_per_atom(params, lam),
                "gp_per_atom": model.gp_per_atom(params, lam),
                "gp_slope": crit.analytic_gp_derivative(params, lam, "right"),
            }
        )
    meta = {"omega": params.omega, "omega0": params.omega0, "lambda_c": lc}
    _emit(export.render_table(export.ANALYTIC_COLUMNS, rows, config.format, meta), config.out)
    return rows


def sweep_rows(result):
    rows = result.records()
    for row in rows:
        row["lambda"] = row.pop("lambda_")
    return rows


def sweep_figure(result):
    params = result.params
    grid = result.lambda_grid
    lc = model.critical_coupling(params)
    top = svg.Panel("scaled geometric phase", "coupling lambda", "gamma0 / N")
    bottom = svg.Panel("derivative of the scaled geometric phase", "coupling lambda", "d(gamma0/N)/d lambda")
    order = np.argsort(result.n_ladder, kind="stable")
    for i in order:
        n = result.n_ladder[i]
        top.series.append(svg.Series(f"N={n}", grid, result.gp_ed[i]))
        if grid.size >= 3:
            bottom.series.append(svg.Series(f"N={n}", grid, crit.derivative_series(grid, result.gp_ed[i])))
    top.series.append(svg.Series("N=inf", grid, result.gp_analytic, dashed=True, color="#000"))
    # split the analytic derivative at the kink and draw both one-sided limits
    fine_left = np.array([x for x in grid if x < lc] + [lc])
    fine_right = np.array([lc] + [x for x in grid if x > lc])
    bottom.series.append(
        svg.Series("N=inf", fine_left, [crit.analytic_gp_derivative(params, x, "left") for x in fine_left],
                   dashed=True, color="#000")
    )
    bottom.series.append(
        svg.Series("N=inf (right)", fine_right, [crit.analytic_gp_derivative(params, x, "right") for x in fine_right],
                   dashed=True, color="#555")
    )
    for panel in (top, bottom):
        panel.vlines.append((lc, "lambda_c (kink)"))
    return svg.render([top, bottom])


def cmd_sweep(config):
    try:
        result = crit.sweep(config.params, config.n_ladder, config.grid, config.scan, config.workers)
    except ScanBoundaryHit as exc:
        raise NumericalError(f"{exc} (remediation: pass a larger --m-max-factor)") from exc
    rows = sweep_rows(result)
    _emit(export.render_table(export.SWEEP_COLUMNS, rows, config.format), config.out)
    if config.plot:
        Path(config.out).with_suffix(".svg").write_text(sweep_figure(result))
    return result


def cmd_scaling(config):
    fit = crit.scaling_fit(config.params, config.n_ladder, config.grid, config.scan, config.workers)
    lines = [
        f"atom numbers:             {', '.join(map(str, fit.n_ladder))}",
        "peak d(gamma0)/d(lambda): " + ", ".join(f"{p:.6g}" for p in fit.peak_slopes),
        f"fitted slope:             {fit.slope:.7f}",
        f"target 2*pi*lambda_c/w^2: {fit.target:.7f}",
        f"relative deviation:       {fit.relative_deviation:+.4%}",
        f"R^2:                      {fit.r_squared:.6f}",
    ]
    print("\n".join(lines))
    report = export.scaling_report_json(fit)
    if config.out is None:
        sys.stdout.write(report)
    else:
        Path(config.out).write_text(report)
    return fit


def cmd_gp_loop(config):
    gs = ground_state(config.params, config.n_atoms, config.coupling, config.scan)
    state = NumberBasisState.from_ground_state(gs)
    closed = gp_closed_form(state)
    looped = gp_loop(state, config.loop_steps)
    diff = abs(looped - closed)
    rel = diff / abs(closed) if closed != 0 else (0.0 if diff == 0 else math.inf)
    report = {
        "n_atoms": config.n_atoms,
        "lambda": config.coupling,
        "sector": gs.sector,
        "loop_steps": config.loop_steps,
        "gp_closed_form": closed,
        "gp_loop": looped,
        "abs_difference": diff,
        "rel_difference": rel,
    }
    text = "\n".join(f"{k}: {export.format_value(v)}" for k, v in report.items()) + "\n"
    _emit(text, config.out)
    return report


COMMANDS = {"analytic": cmd_analytic, "sweep": cmd_sweep, "scaling": cmd_scaling, "gp-loop": cmd_gp_loop}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
        if config.plot and config.out is None and args.command == "sweep":
            raise ConfigError("plot", "--plot needs --out (the SVG is written next to it)")
        COMMANDS[args.command](config)
    except StepCountTooSmall as exc:
        print(f"error: loop_steps: {exc} (minimum admissible K = {exc.minimum})", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: I/O: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
