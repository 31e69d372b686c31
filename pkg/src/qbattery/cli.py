"""Command-line front end.

Subcommands: timeseries, maxima, sweep, reproduce, oracle-check.  A flat
JSON config file supplies any parameter; flags override config values.
Every run writes a run.json with the fully resolved configuration, enough
to reproduce the outputs bit-exactly.

Exit codes: 0 success, 2 config error, 3 numerical failure,
4 oracle tolerance failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import (DEFAULT_N_POINTS, ENGINE_CLOSED, ENGINE_PSEUDOMODE,
                       IntegrationError, TimeGrid, equal_frequency_trajectory,
                       general_trajectory, trajectory)
from .metrics import MetricsSeries, compute_metrics
from .model import INV_SQRT2, SystemParams, dressed_frame, validate
from .oracle import DEFAULT_N_MODES, DEFAULT_SPAN, build_bath, propagate
from .sweep import (MAXIMA_FIELDS, SweepPointError, SweepSpec, figure_pipeline,
                    run_sweep, write_sweep_csv)

ORACLE_TOLERANCE = 5e-3
OUT_ROOT_ENV = "QBATTERY_OUT"

ENGINE_ALIASES = {"closed": ENGINE_CLOSED, ENGINE_CLOSED: ENGINE_CLOSED,
                  ENGINE_PSEUDOMODE: ENGINE_PSEUDOMODE}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Flat run configuration; mirrors the JSON config file."""

    delta_A: float = 0.0
    delta_B: float = 0.0
    delta_L: float = 0.0
    omega_drive: float = 1.0
    lambda_: float = 1.0
    alpha_T: float = 1.0
    r1: float = INV_SQRT2
    R: float = 0.5
    c01: complex = 1.0 + 0.0j
    c02: complex = 0.0 + 0.0j
    t_max: float | None = None
    n_points: int = DEFAULT_N_POINTS
    engine: str = ENGINE_CLOSED
    tol: float = 1e-9
    threads: int = 1
    out_dir: str | None = None
    axes: tuple = ()
    figure: str | None = None
    n_modes: int = DEFAULT_N_MODES
    span: float = DEFAULT_SPAN

    def params(self) -> SystemParams:
        return validate(SystemParams(
            delta_A=self.delta_A, delta_B=self.delta_B, delta_L=self.delta_L,
            omega_drive=self.omega_drive, lambda_=self.lambda_,
            alpha_T=self.alpha_T, r1=self.r1, R=self.R,
            c01=self.c01, c02=self.c02))

    def grid(self) -> TimeGrid:
        t_max = self.t_max
        if t_max is None:
            t_max = (10.0 if self.R <= 1.0 else 5.0) / self.lambda_
        return TimeGrid.uniform(t_max, self.n_points)


_KEY_MAP = {"lambda": "lambda_"}
_KEY_UNMAP = {"lambda_": "lambda"}
_COMPLEX_KEYS = ("c01", "c02")


def _parse_complex(value) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)):
        return complex(value)
    raise ConfigError(f"expected a number or [re, im] pair, got {value!r}")


def config_from_dict(data: dict) -> RunConfig:
    known = {f.name for f in fields(RunConfig)}
    updates = {}
    for key, value in data.items():
        name = _KEY_MAP.get(key, key)
        if name not in known:
            raise ConfigError(f"unknown config key: {key!r}")
        if name in _COMPLEX_KEYS:
            value = _parse_complex(value)
        elif name == "axes":
            value = tuple((str(a), tuple(float(v) for v in vs)) for a, vs in value)
        updates[name] = value
    try:
        return RunConfig(**updates)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def config_to_dict(config: RunConfig) -> dict:
    out = {}
    for f in fields(RunConfig):
        value = getattr(config, f.name)
        if f.name in _COMPLEX_KEYS:
            value = [value.real, value.imag]
        elif f.name == "axes":
            value = [[name, list(vals)] for name, vals in value]
        out[_KEY_UNMAP.get(f.name, f.name)] = value
    return out


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must contain a JSON object")
    return config_from_dict(data)


def _apply_set_overrides(config: RunConfig, pairs: list[str]) -> RunConfig:
    data = {}
    for pair in pairs:
        key, sep, raw = pair.partition("=")
        if not sep:
            raise ConfigError(f"--set expects key=value, got {pair!r}")
        try:
            data[key] = json.loads(raw)
        except json.JSONDecodeError:
            data[key] = raw
    merged = config_to_dict(config)
    merged.update(data)
    return config_from_dict(merged)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_run_json(out: Path, command: str, config: RunConfig,
                    outputs: list[str]) -> Path:
    payload = {
        "artifact": "qbattery",
        "version": __version__,
        "command": command,
        "config": config_to_dict(config),
        "oracle_tolerance": ORACLE_TOLERANCE if command == "oracle-check" else None,
        "outputs": outputs,
    }
    path = out / "run.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    newline="\n")
    return path


def _run_metrics(config: RunConfig):
    """Compute the trajectory and metrics for a single-run config."""
    params = config.params()
    frame = dressed_frame(params)
    grid = config.grid()
    traj = trajectory(params, frame, grid, engine=config.engine, tol=config.tol)
    return traj, compute_metrics(traj, frame.chi_B)


def cmd_timeseries(config: RunConfig, out: Path) -> list[Path]:
    traj, series = _run_metrics(config)
    lines = ["t,re_C1,im_C1,re_C2,im_C2,E_B,P_B,W_B"]
    for i, t in enumerate(traj.grid.samples):
        lines.append(",".join(_fmt(v) for v in (
            t, traj.c1[i].real, traj.c1[i].imag, traj.c2[i].real,
            traj.c2[i].imag, series.energy[i], series.power[i],
            series.ergotropy[i])))
    path = out / "timeseries.csv"
    path.write_text("\n".join(lines) + "\n", newline="\n")
    return [path]


def maxima_csv_text(series: MetricsSeries) -> str:
    values = (series.max_energy.value, series.max_energy.time,
              series.max_power.value, series.max_power.time,
              series.max_ergotropy.value, series.max_ergotropy.time)
    return (",".join(MAXIMA_FIELDS) + "\n"
            + ",".join(_fmt(v) for v in values) + "\n")


def cmd_maxima(config: RunConfig, out: Path) -> list[Path]:
    _, series = _run_metrics(config)
    path = out / "maxima.csv"
    path.write_text(maxima_csv_text(series), newline="\n")
    return [path]


def cmd_sweep(config: RunConfig, out: Path) -> list[Path]:
    spec = SweepSpec(base=config.params(), axes=config.axes,
                     grid=config.grid(), engine=config.engine, tol=config.tol)
    result = run_sweep(spec, threads=config.threads)
    return [write_sweep_csv(result, out / "sweep.csv")]


def cmd_reproduce(config: RunConfig, out: Path) -> list[Path]:
    if not config.figure:
        raise ConfigError("reproduce requires --figure (e.g. --figure fig2)")
    return figure_pipeline(config.figure, out, n_points=config.n_points)


def cmd_oracle_check(config: RunConfig, out: Path) -> tuple[list[Path], bool]:
    """Compare the discretized-bath ground truth against both engines."""
    params = config.params()
    frame = dressed_frame(params)
    grid = config.grid()
    bath = build_bath(frame, n_modes=config.n_modes, span=config.span)
    reference = propagate(params, frame, bath, grid, tol=config.tol)

    gaps = {}
    pseudo = general_trajectory(params, frame, grid, tol=config.tol)
    gaps[ENGINE_PSEUDOMODE] = float(max(
        np.max(np.abs(pseudo.c1 - reference.c1)),
        np.max(np.abs(pseudo.c2 - reference.c2))))
    if params.equal_detunings():
        closed = equal_frequency_trajectory(params, frame, grid)
        gaps[ENGINE_CLOSED] = float(max(
            np.max(np.abs(closed.c1 - reference.c1)),
            np.max(np.abs(closed.c2 - reference.c2))))

    report = {
        "tolerance": ORACLE_TOLERANCE,
        "n_modes": bath.n_modes,
        "span": bath.span,
        "norm_drift": float(np.max(np.abs(reference.total_norm - 1.0))),
        "engines": {name: {"sup_norm_gap": gap, "pass": gap <= ORACLE_TOLERANCE}
                    for name, gap in gaps.items()},
    }
    path = out / "oracle_check.json"
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n",
                    newline="\n")
    ok = all(entry["pass"] for entry in report["engines"].values())
    for name, entry in sorted(report["engines"].items()):
        status = "PASS" if entry["pass"] else "FAIL"
        print(f"oracle-check {name}: gap {entry['sup_norm_gap']:.3e} "
              f"vs {ORACLE_TOLERANCE:g} -> {status}")
    return [path], ok


def _resolve_out_dir(args, config: RunConfig, command: str) -> Path:
    if args.out:
        out = Path(args.out)
    elif config.out_dir:
        out = Path(config.out_dir)
    else:
        root = os.environ.get(OUT_ROOT_ENV, ".")
        out = Path(root) / command.replace("-", "_")
    out.mkdir(parents=True, exist_ok=True)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbattery",
        description="Charging dynamics of a driven open quantum battery.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
            ("timeseries", "write amplitude and metric time series as CSV"),
            ("maxima", "write the peak energy/power/ergotropy record"),
            ("sweep", "run a Cartesian parameter sweep"),
            ("reproduce", "regenerate the CSV data behind a published figure"),
            ("oracle-check", "validate engines against the discretized bath")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="path to a flat JSON config file")
        p.add_argument("--out", help=f"output directory (default: ${OUT_ROOT_ENV} "
                                     "or the current directory)")
        p.add_argument("--engine", choices=sorted(ENGINE_ALIASES),
                       help="trajectory engine for single runs and sweeps")
        p.add_argument("--tol", type=float, help="integrator relative tolerance")
        p.add_argument("--threads", type=int, help="worker threads for sweeps")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override any config key (JSON-parsed value); "
                            "repeatable")
        if name == "reproduce":
            p.add_argument("--figure", help="figure id, fig2 through fig11")
    return parser


def _resolve_config(args) -> RunConfig:
    config = load_config(args.config) if args.config else RunConfig()
    if args.set:
        config = _apply_set_overrides(config, args.set)
    updates = {}
    if args.engine:
        updates["engine"] = ENGINE_ALIASES[args.engine]
    if args.tol is not None:
        updates["tol"] = args.tol
    if args.threads is not None:
        updates["threads"] = args.threads
    if getattr(args, "figure", None):
        updates["figure"] = args.figure
    if updates:
        config = replace(config, **updates)
    if config.engine not in (ENGINE_CLOSED, ENGINE_PSEUDOMODE):
        raise ConfigError(f"unknown engine: {config.engine!r}")
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _resolve_config(args)
        out = _resolve_out_dir(args, config, args.command)
        if args.command == "timeseries":
            outputs = cmd_timeseries(config, out)
        elif args.command == "maxima":
            outputs = cmd_maxima(config, out)
        elif args.command == "sweep":
            outputs = cmd_sweep(config, out)
        elif args.command == "reproduce":
            outputs = cmd_reproduce(config, out)
        else:
            outputs, ok = cmd_oracle_check(config, out)
            _write_run_json(out, args.command, config,
                            [p.name for p in outputs])
            if not ok:
                print("oracle-check: tolerance failure", file=sys.stderr)
                return 4
            return 0
        _write_run_json(out, args.command, config, [p.name for p in outputs])
        return 0
    except SweepPointError as exc:
        numerical = isinstance(exc.cause, IntegrationError)
        kind = "numerical failure" if numerical else "config error"
        print(f"qbattery: {kind}: {exc}", file=sys.stderr)
        return 3 if numerical else 2
    except IntegrationError as exc:
        print(f"qbattery: numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError, OSError) as exc:
        print(f"qbattery: config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
