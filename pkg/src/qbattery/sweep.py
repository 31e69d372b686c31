"""Cartesian parameter sweeps and figure-reproduction pipelines.

Sweep points are independent work items; rows come back in lexicographic
axis order no matter how many workers run, and CSV payloads are
byte-reproducible (17-significant-digit floats, no timestamps).
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import TimeGrid, trajectory
from .metrics import MetricsSeries, compute_metrics
from .model import SystemParams, dressed_frame, validate

AXIS_NAMES = ("omega_drive", "delta_A", "delta_B", "delta_common", "delta_L", "R", "r1")

MAXIMA_FIELDS = ("E_max", "t_E", "P_max", "t_P", "W_max", "t_W")


class SweepPointError(RuntimeError):
    """Engine failure at one sweep point, with the point attached."""

    def __init__(self, point: dict, cause: Exception):
        super().__init__(f"sweep point {point} failed: {cause}")
        self.point = dict(point)
        self.cause = cause


@dataclass(frozen=True)
class SweepSpec:
    base: SystemParams
    axes: tuple[tuple[str, tuple[float, ...]], ...]
    grid: TimeGrid
    engine: str = "closed_form"
    tol: float = 1e-9

    def __post_init__(self):
        axes = tuple((str(name), tuple(float(v) for v in values))
                     for name, values in self.axes)
        for name, values in axes:
            if name not in AXIS_NAMES:
                raise ValueError(f"unknown sweep axis: {name!r}")
            if not values:
                raise ValueError(f"empty value list for axis {name!r}")
            if not all(math.isfinite(v) for v in values):
                raise ValueError(f"non-finite value on axis {name!r}")
        object.__setattr__(self, "axes", axes)


@dataclass(frozen=True)
class SweepRow:
    point: dict[str, float]
    E_max: float
    t_E: float
    P_max: float
    t_P: float
    W_max: float
    t_W: float


@dataclass(frozen=True, eq=False)
class SweepResult:
    spec: SweepSpec
    rows: tuple[SweepRow, ...]
    series: tuple[MetricsSeries, ...] | None = None


def apply_point(base: SystemParams, point: dict[str, float]) -> SystemParams:
    """Override base parameters with one Cartesian point."""
    updates: dict[str, float] = {}
    for name, value in point.items():
        if name == "delta_common":
            updates["delta_A"] = value
            updates["delta_B"] = value
        else:
            updates[name] = value
    return replace(base, **updates)


def _evaluate(spec: SweepSpec, point: dict[str, float],
              keep_series: bool) -> tuple[SweepRow, MetricsSeries | None]:
    try:
        params = validate(apply_point(spec.base, point))
        frame = dressed_frame(params)
        traj = trajectory(params, frame, spec.grid, engine=spec.engine, tol=spec.tol)
        series = compute_metrics(traj, frame.chi_B)
    except Exception as exc:
        raise SweepPointError(point, exc) from exc
    row = SweepRow(point=point,
                   E_max=series.max_energy.value, t_E=series.max_energy.time,
                   P_max=series.max_power.value, t_P=series.max_power.time,
                   W_max=series.max_ergotropy.value, t_W=series.max_ergotropy.time)
    return row, (series if keep_series else None)


def run_sweep(spec: SweepSpec, threads: int = 1,
              keep_series: bool = False) -> SweepResult:
    """Evaluate every Cartesian point; row order is lexicographic in the axes.

    An empty axis list produces the single base-parameter row.
    """
    names = [name for name, _ in spec.axes]
    points = [dict(zip(names, combo))
              for combo in itertools.product(*(values for _, values in spec.axes))]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcome = list(pool.map(lambda p: _evaluate(spec, p, keep_series), points))
    else:
        outcome = [_evaluate(spec, p, keep_series) for p in points]
    rows = tuple(row for row, _ in outcome)
    series = tuple(s for _, s in outcome) if keep_series else None
    return SweepResult(spec=spec, rows=rows, series=series)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def sweep_csv_text(result: SweepResult) -> str:
    names = [name for name, _ in result.spec.axes]
    header = [f"param_{n}" for n in names] + list(MAXIMA_FIELDS)
    lines = [",".join(header)]
    for row in result.rows:
        cells = [_fmt(row.point[n]) for n in names]
        cells += [_fmt(getattr(row, f)) for f in MAXIMA_FIELDS]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_sweep_csv(result: SweepResult, path) -> Path:
    path = Path(path)
    path.write_text(sweep_csv_text(result), newline="\n")
    return path


# --- figure pipelines -------------------------------------------------------
#
# The published figure captions fix R, the detunings and r1 = 1/sqrt(2) but
# not the family values; the grids below are documented defaults and are
# recorded in each figure's metadata file.

OMEGA_FAMILY = (0.0, 0.5, 1.0, 2.0)
DELTA_FAMILY = (0.0, 1.0, 3.0, 5.0)
DELTA_L_FAMILY = (0.0, 2.0, 5.0, 10.0)
OMEGA_AXIS = tuple(np.linspace(0.0, 2.0, 41))


@dataclass(frozen=True)
class FigureSpec:
    R: float
    kind: str                      # "timeseries" | "maxima"
    family: tuple[str, tuple[float, ...]]
    fixed: dict[str, float]


FIGURES: dict[str, FigureSpec] = {
    "fig2": FigureSpec(0.5, "timeseries", ("omega_drive", OMEGA_FAMILY),
                       {"delta_common": 0.0, "delta_L": 0.0}),
    "fig3": FigureSpec(0.5, "timeseries", ("delta_common", DELTA_FAMILY),
                       {"omega_drive": 1.0, "delta_L": 0.0}),
    "fig4": FigureSpec(0.5, "timeseries", ("delta_L", DELTA_L_FAMILY),
                       {"omega_drive": 1.0, "delta_common": 0.0}),
    "fig5": FigureSpec(0.5, "maxima", ("delta_common", DELTA_FAMILY),
                       {"delta_L": 0.0}),
    "fig6": FigureSpec(0.5, "maxima", ("delta_L", DELTA_L_FAMILY),
                       {"delta_common": 0.0}),
    "fig7": FigureSpec(10.0, "timeseries", ("omega_drive", OMEGA_FAMILY),
                       {"delta_common": 0.0, "delta_L": 0.0}),
    "fig8": FigureSpec(10.0, "timeseries", ("delta_common", DELTA_FAMILY),
                       {"omega_drive": 1.0, "delta_L": 0.0}),
    "fig9": FigureSpec(10.0, "timeseries", ("delta_L", DELTA_L_FAMILY),
                       {"omega_drive": 1.0, "delta_common": 0.0}),
    "fig10": FigureSpec(10.0, "maxima", ("delta_common", DELTA_FAMILY),
                        {"delta_L": 0.0}),
    "fig11": FigureSpec(10.0, "maxima", ("delta_L", DELTA_L_FAMILY),
                        {"delta_common": 0.0}),
}

_PANELS_TIMESERIES = (("a", "power"), ("b", "energy"), ("c", "ergotropy"))
_PANELS_MAXIMA = (("a", "power_max"), ("b", "energy_max"), ("c", "ergotropy_max"))


def figure_grid(fig: FigureSpec, n_points: int) -> TimeGrid:
    return TimeGrid.uniform(10.0 if fig.R <= 1.0 else 5.0, n_points)


def _table_csv(first_header: str, first_column: np.ndarray,
               columns: list[tuple[str, np.ndarray]]) -> str:
    header = [first_header] + [name for name, _ in columns]
    lines = [",".join(header)]
    for i in range(first_column.size):
        cells = [_fmt(first_column[i])] + [_fmt(col[i]) for _, col in columns]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def figure_pipeline(figure_id: str, out_dir, n_points: int = 2000) -> list[Path]:
    """Emit one CSV per panel plus a metadata file for a published figure."""
    if figure_id not in FIGURES:
        raise ValueError(f"unknown figure id: {figure_id!r} "
                         f"(known: {', '.join(sorted(FIGURES))})")
    fig = FIGURES[figure_id]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    base = SystemParams(R=fig.R)
    grid = figure_grid(fig, n_points)
    family_name, family_values = fig.family

    if fig.kind == "timeseries":
        spec = SweepSpec(base=apply_point(base, fig.fixed),
                         axes=((family_name, family_values),), grid=grid)
        result = run_sweep(spec, keep_series=True)
        panels = {name: [] for _, name in _PANELS_TIMESERIES}
        for value, series in zip(family_values, result.series):
            label = f"{family_name}={value:g}"
            panels["power"].append((label, series.power))
            panels["energy"].append((label, series.energy))
            panels["ergotropy"].append((label, series.ergotropy))
        tables = {name: _table_csv("lambda_t", grid.samples, panels[name])
                  for _, name in _PANELS_TIMESERIES}
        panel_list = _PANELS_TIMESERIES
    else:
        spec = SweepSpec(base=apply_point(base, fig.fixed),
                         axes=((family_name, family_values),
                               ("omega_drive", OMEGA_AXIS)), grid=grid)
        result = run_sweep(spec)
        n_omega = len(OMEGA_AXIS)
        panels = {name: [] for _, name in _PANELS_MAXIMA}
        for j, value in enumerate(family_values):
            block = result.rows[j * n_omega:(j + 1) * n_omega]
            label = f"{family_name}={value:g}"
            panels["power_max"].append((label, np.array([r.P_max for r in block])))
            panels["energy_max"].append((label, np.array([r.E_max for r in block])))
            panels["ergotropy_max"].append((label, np.array([r.W_max for r in block])))
        omega = np.asarray(OMEGA_AXIS)
        tables = {name: _table_csv("omega_drive", omega, panels[name])
                  for _, name in _PANELS_MAXIMA}
        panel_list = _PANELS_MAXIMA

    written: list[Path] = []
    for panel, name in panel_list:
        path = out / f"{figure_id}{panel}_{name}.csv"
        path.write_text(tables[name], newline="\n")
        written.append(path)

    meta = {
        "artifact": "qbattery",
        "version": __version__,
        "figure": figure_id,
        "kind": fig.kind,
        "R": fig.R,
        "family_axis": family_name,
        "family_values": list(family_values),
        "fixed": dict(fig.fixed),
        "defaults": {"r1": base.r1, "alpha_T": base.alpha_T, "lambda": base.lambda_,
                     "c01": [base.c01.real, base.c01.imag],
                     "c02": [base.c02.real, base.c02.imag],
                     "omega_axis": list(OMEGA_AXIS) if fig.kind == "maxima" else None},
        "grid": {"t_max": grid.t_max, "n_points": grid.n_points},
        "engine": spec.engine,
        "files": [p.name for p in written],
    }
    meta_path = out / f"{figure_id}_metadata.json"
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n",
                         newline="\n")
    written.append(meta_path)
    return written
