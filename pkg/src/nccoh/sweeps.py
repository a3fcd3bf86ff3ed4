"""Parameter sweeps reproducing the five figure families as CSV + reports.

Each experiment walks a theta (and possibly r or order) grid, evaluates
the coherence engine or the phase-estimation probability at every point,
and emits one CSV of plot data plus one JSON extremum report.  Numbers
are written with 17 significant digits and Unix newlines so identical
specs produce byte-identical files; grid points are independent pure
tasks, so the worker-pool size never changes results.
"""
from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, qpea
from .coherence import (
    BlochState,
    Distance,
    NcConfig,
    density_from_bloch,
    nc_coherence,
    rel_ent_coherence,
)

EXPERIMENTS = (
    "coherence-pure",
    "coherence-mixed",
    "coherence-orders",
    "qpea-sweep",
    "qpea-derivative",
)

DEFAULT_COHERENCE_THETA = (1e-3, math.pi - 1e-3, 1001)
DEFAULT_QPEA_THETA = (math.pi / 4002, math.pi - math.pi / 4002, 4001)
DEFAULT_R = (0.02, 1.0, 51)
R_WINDOW = (0.9, 1.0, 21)  # extra resolution where the measure peaks in r
DEFAULT_ORDERS = tuple(
    [1.0] + [float(n) for n in range(2, 11)] + [1.0 / n for n in range(2, 11)]
)
DEFAULT_M_LIST = (2, 5, 10, 15, 20, 25)
DERIV_H = 1e-4


@dataclass(frozen=True)
class SweepSpec:
    """Full description of one sweep run (grids, engine config, output)."""

    experiment: str
    out: Path
    theta_min: float
    theta_max: float
    theta_steps: int
    r_min: float = DEFAULT_R[0]
    r_max: float = DEFAULT_R[1]
    r_steps: int = DEFAULT_R[2]
    orders: tuple[float, ...] = DEFAULT_ORDERS
    m_list: tuple[int, ...] = DEFAULT_M_LIST
    delta: float | None = None
    nc: NcConfig = field(default_factory=NcConfig)
    threads: int = 1

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.theta_steps < 2:
            raise ValueError(f"theta_steps must be >= 2, got {self.theta_steps}")
        if not self.theta_min < self.theta_max:
            raise ValueError("theta_min must be below theta_max")
        if not (0.0 < self.theta_min and self.theta_max < math.pi):
            raise ValueError("theta grid must lie strictly inside (0, pi)")
        if self.threads < 1:
            raise ValueError(f"threads must be positive, got {self.threads}")
        if self.experiment == "coherence-mixed":
            if self.r_steps < 2:
                raise ValueError(f"r_steps must be >= 2, got {self.r_steps}")
            if not (0.0 < self.r_min <= self.r_max <= 1.0):
                raise ValueError("r grid must lie inside (0, 1]")
        if self.experiment == "coherence-orders":
            if not self.orders or any(n <= 0 for n in self.orders):
                raise ValueError("orders must be positive")
        if self.experiment.startswith("qpea"):
            if not self.m_list:
                raise ValueError("m_list must not be empty")
            for m in self.m_list:
                if self.delta is None and not 2 <= m <= 25:
                    raise ValueError(
                        f"m = {m} has no default delta; pass --delta explicitly"
                    )
                if not 1 <= m <= qpea.PRODUCT_M_LIMIT:
                    raise ValueError(f"m = {m} out of range")
            if self.experiment == "qpea-derivative" and (
                self.theta_min < DERIV_H or self.theta_max > math.pi - DERIV_H
            ):
                raise ValueError(
                    f"derivative sweeps need theta within [{DERIV_H}, pi - {DERIV_H}]"
                )

    def theta_grid(self) -> np.ndarray:
        return np.linspace(self.theta_min, self.theta_max, self.theta_steps)

    def r_grid(self) -> np.ndarray:
        base = np.linspace(self.r_min, self.r_max, self.r_steps)
        if self.r_max >= R_WINDOW[0]:
            window = np.linspace(
                max(R_WINDOW[0], self.r_min), self.r_max, R_WINDOW[2]
            )
            base = np.union1d(base, window)
        return base

    def config_echo(self) -> dict:
        """Scientific configuration only; output path and thread count are
        excluded so reruns stay byte-identical."""
        echo = {
            "experiment": self.experiment,
            "theta": {
                "min": self.theta_min,
                "max": self.theta_max,
                "steps": self.theta_steps,
            },
        }
        if self.experiment == "coherence-mixed":
            echo["r"] = {"min": self.r_min, "max": self.r_max, "steps": self.r_steps}
        if self.experiment == "coherence-orders":
            echo["orders_n"] = list(self.orders)
        if self.experiment.startswith("coherence"):
            echo["nc"] = {
                "order_inverse": self.nc.order_inverse,
                "distance": self.nc.distance.value,
                "coarse_grid_points": self.nc.coarse_grid_points,
                "refine_iterations": self.nc.refine_iterations,
                "boundary_eps": self.nc.boundary_eps,
            }
        if self.experiment.startswith("qpea"):
            echo["m_list"] = list(self.m_list)
            echo["delta"] = self.delta if self.delta is not None else "schedule"
        return echo


@dataclass(frozen=True)
class ExtremumEntry:
    kind: str  # "max" | "min" | "derivative-max"
    location: float
    value: float


@dataclass
class CurveReport:
    curve_id: str
    extrema: list[ExtremumEntry]
    dip_depth: float | None = None


@dataclass
class ExtremumReport:
    experiment: str
    curves: list[CurveReport]
    config: dict
    version: str
    wall_seconds: float

    def to_dict(self) -> dict:
        curves = []
        for c in self.curves:
            entry = {
                "curve_id": c.curve_id,
                "extrema": [
                    {"kind": e.kind, "location": e.location, "value": e.value}
                    for e in c.extrema
                ],
            }
            if c.dip_depth is not None:
                entry["dip_depth"] = c.dip_depth
            curves.append(entry)
        return {
            "experiment": self.experiment,
            "curves": curves,
            "config": self.config,
            "version": self.version,
            "wall_seconds": self.wall_seconds,
        }


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parallel_map(fn, items, threads: int) -> list:
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _local_maxima(ys: np.ndarray) -> list[int]:
    return [
        k
        for k in range(1, len(ys) - 1)
        if ys[k - 1] < ys[k] and ys[k] >= ys[k + 1]
    ]


def _local_minima(ys: np.ndarray) -> list[int]:
    return [
        k
        for k in range(1, len(ys) - 1)
        if ys[k - 1] > ys[k] and ys[k] <= ys[k + 1]
    ]


def _write_csv(path: Path, spec: SweepSpec, grid_lines: list[str], columns, rows):
    with open(path, "w", newline="\n") as f:
        f.write(f"# nccoh {__version__}\n")
        f.write(f"# spec: {json.dumps(spec.config_echo())}\n")
        for line in grid_lines:
            f.write(f"# grid: {line}\n")
        f.write(",".join(columns) + "\n")
        for row in rows:
            f.write(",".join(_fmt(v) for v in row) + "\n")


def _report_path(out: Path) -> Path:
    return out.with_suffix(".report.json") if out.suffix else out.with_name(out.name + ".report.json")


def _write_report(path: Path, report: ExtremumReport):
    with open(path, "w", newline="\n") as f:
        json.dump(report.to_dict(), f, indent=2)
        f.write("\n")


def _grid_line(name: str, values: np.ndarray) -> str:
    return (
        f"{name}: start={_fmt(values[0])} stop={_fmt(values[-1])} count={len(values)}"
    )


def _run_coherence_pure(spec: SweepSpec):
    thetas = spec.theta_grid()
    cfg = spec.nc

    def point(theta: float):
        rho = density_from_bloch(BlochState(1.0, theta))
        res = nc_coherence(rho, cfg)
        conventional, _ = rel_ent_coherence(rho)
        return res.value, conventional, res.argmax_p

    results = _parallel_map(point, thetas, spec.threads)
    rows = [
        (theta, v, c, p) for theta, (v, c, p) in zip(thetas, results)
    ]
    nc_vals = np.array([r[1] for r in rows])
    conv_vals = np.array([r[2] for r in rows])

    maxima = sorted(_local_maxima(nc_vals), key=lambda k: -nc_vals[k])[:2]
    entries = [
        ExtremumEntry("max", float(thetas[k]), float(nc_vals[k]))
        for k in sorted(maxima)
    ]
    minima = _local_minima(nc_vals)
    if minima:
        k_mid = min(minima, key=lambda k: abs(thetas[k] - math.pi / 2))
        entries.append(ExtremumEntry("min", float(thetas[k_mid]), float(nc_vals[k_mid])))
    k_c = int(np.argmax(conv_vals))
    curves = [
        CurveReport("c_nc", entries),
        CurveReport("c_rel_ent", [ExtremumEntry("max", float(thetas[k_c]), float(conv_vals[k_c]))]),
    ]
    columns = ("theta_rad", "c_nc_bits", "c_rel_ent_bits", "argmax_p")
    return rows, columns, [_grid_line("theta", thetas)], curves


def _run_coherence_mixed(spec: SweepSpec):
    thetas = spec.theta_grid()
    rs = spec.r_grid()
    cfg = spec.nc

    def point(args):
        r, theta = args
        res = nc_coherence(density_from_bloch(BlochState(r, theta)), cfg)
        return res.value, res.argmax_p

    tasks = [(r, theta) for r in rs for theta in thetas]
    results = _parallel_map(point, tasks, spec.threads)
    rows = [(r, theta, v, p) for (r, theta), (v, p) in zip(tasks, results)]

    k_mid = int(np.argmin(np.abs(thetas - math.pi / 2)))
    curves = []
    n_t = len(thetas)
    for i, r in enumerate(rs):
        vals = np.array([rows[i * n_t + j][2] for j in range(n_t)])
        k = int(np.argmax(vals))
        mid_val = float(vals[k_mid])
        curves.append(
            CurveReport(
                f"r={_fmt(float(r))}",
                [
                    ExtremumEntry("max", float(thetas[k]), float(vals[k])),
                    ExtremumEntry("min", float(thetas[k_mid]), mid_val),
                ],
                dip_depth=float(vals[k]) - mid_val,
            )
        )
    columns = ("r", "theta_rad", "c_nc_bits", "argmax_p")
    grid_lines = [_grid_line("r", rs), _grid_line("theta", thetas)]
    return rows, columns, grid_lines, curves


def _run_coherence_orders(spec: SweepSpec):
    thetas = spec.theta_grid()
    alphas = [1.0 / n for n in spec.orders]

    def point(args):
        alpha, theta = args
        cfg = NcConfig(
            order_inverse=alpha,
            distance=spec.nc.distance,
            coarse_grid_points=spec.nc.coarse_grid_points,
            refine_iterations=spec.nc.refine_iterations,
            boundary_eps=spec.nc.boundary_eps,
        )
        return nc_coherence(density_from_bloch(BlochState(1.0, theta)), cfg).value

    tasks = [(alpha, theta) for alpha in alphas for theta in thetas]
    values = _parallel_map(point, tasks, spec.threads)
    rows = [(alpha, theta, v) for (alpha, theta), v in zip(tasks, values)]

    curves = []
    n_t = len(thetas)
    for i, alpha in enumerate(alphas):
        vals = np.array([values[i * n_t + j] for j in range(n_t)])
        k = int(np.argmax(vals))
        curves.append(
            CurveReport(
                f"alpha={_fmt(alpha)}",
                [ExtremumEntry("max", float(thetas[k]), float(vals[k]))],
            )
        )
    columns = ("alpha", "theta_rad", "c_nc_bits")
    return rows, columns, [_grid_line("theta", thetas)], curves


def _qpea_deltas(spec: SweepSpec) -> list[float]:
    if spec.delta is not None:
        return [spec.delta for _ in spec.m_list]
    return [qpea.default_delta(m) for m in spec.m_list]


def _refined_grid_max(f, thetas, values, upto=None) -> tuple[float, float]:
    """Grid argmax plus bracket refinement, confined to the swept range."""
    n = len(thetas) if upto is None else max(int(upto), 1)
    k = int(np.argmax(values[:n]))
    a = float(thetas[k - 1]) if k > 0 else float(thetas[0])
    b = float(thetas[k + 1]) if k < n - 1 else float(thetas[n - 1])
    return qpea._refine_max(f, a, float(thetas[k]), b, float(values[k]))


def _run_qpea(spec: SweepSpec, derivative: bool):
    thetas = spec.theta_grid()
    deltas = _qpea_deltas(spec)

    def curve(args):
        m, delta = args
        return qpea.prob_curve(m, delta, thetas, with_derivs=derivative)

    curves_data = _parallel_map(curve, list(zip(spec.m_list, deltas)), spec.threads)

    rows = []
    reports = []
    for (m, delta), data in zip(zip(spec.m_list, deltas), curves_data):
        col = data.derivs if derivative else data.probs
        rows.extend((m, delta, t, v) for t, v in zip(thetas, col))
        if derivative:
            # search the rising segment only, up to the probability maximum
            f = lambda t: qpea.success_prob_derivative(
                qpea.QpeaParams(m, t, delta), DERIV_H
            )
            loc, val = _refined_grid_max(
                f, thetas, data.derivs, upto=int(np.argmax(data.probs)) + 1
            )
            kind = "derivative-max"
        else:
            f = lambda t: qpea.success_prob_product(qpea.QpeaParams(m, t, delta))
            loc, val = _refined_grid_max(f, thetas, data.probs)
            kind = "max"
        reports.append(CurveReport(f"m={m}", [ExtremumEntry(kind, loc, val)]))
    columns = (
        ("m", "delta", "theta_rad", "dp_dtheta")
        if derivative
        else ("m", "delta", "theta_rad", "p_a")
    )
    return rows, columns, [_grid_line("theta", thetas)], reports


def run_sweep(spec: SweepSpec) -> ExtremumReport:
    """Execute one experiment, write CSV + JSON report, return the report."""
    start = time.perf_counter()
    if spec.experiment == "coherence-pure":
        rows, columns, grid_lines, curves = _run_coherence_pure(spec)
    elif spec.experiment == "coherence-mixed":
        rows, columns, grid_lines, curves = _run_coherence_mixed(spec)
    elif spec.experiment == "coherence-orders":
        rows, columns, grid_lines, curves = _run_coherence_orders(spec)
    elif spec.experiment == "qpea-sweep":
        rows, columns, grid_lines, curves = _run_qpea(spec, derivative=False)
    else:
        rows, columns, grid_lines, curves = _run_qpea(spec, derivative=True)

    report = ExtremumReport(
        experiment=spec.experiment,
        curves=curves,
        config=spec.config_echo(),
        version=__version__,
        wall_seconds=time.perf_counter() - start,
    )
    out = Path(spec.out)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    _write_csv(out, spec, grid_lines, columns, rows)
    _write_report(_report_path(out), report)
    return report
