"""Command-line front end for the sweep experiments.

Exit codes: 0 success, 2 usage error (argparse), 3 parameter domain
violation, 1 output I/O failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import __version__, _kernels
from .coherence import Distance, NcConfig
from .sweeps import (
    DEFAULT_COHERENCE_THETA,
    DEFAULT_M_LIST,
    DEFAULT_ORDERS,
    DEFAULT_QPEA_THETA,
    EXPERIMENTS,
    SweepSpec,
    run_sweep,
)

EXIT_DOMAIN = 3


def _parse_orders(text: str) -> tuple[float, ...]:
    orders = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if "/" in token:
            num, den = token.split("/", 1)
            orders.append(float(num) / float(den))
        else:
            orders.append(float(token))
    if not orders:
        raise ValueError("empty orders list")
    return tuple(orders)


def _parse_m_list(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(",") if tok.strip())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nccoh-sweep",
        description="Run coherence / phase-estimation sweeps and write CSV plot "
        "data plus a JSON extremum report.",
    )
    p.add_argument("--experiment", required=True, choices=EXPERIMENTS)
    p.add_argument("--out", required=True, help="CSV output path; the report is "
                   "written next to it with suffix .report.json")
    p.add_argument("--theta-min", type=float, default=None)
    p.add_argument("--theta-max", type=float, default=None)
    p.add_argument("--theta-steps", type=int, default=None)
    p.add_argument("--r-min", type=float, default=None)
    p.add_argument("--r-max", type=float, default=None)
    p.add_argument("--r-steps", type=int, default=None)
    p.add_argument("--orders", type=str, default=None,
                   help="comma list of orders n; fractions like 1/3 allowed")
    p.add_argument("--m-list", type=str, default=None,
                   help="comma list of auxiliary register sizes")
    p.add_argument("--delta", type=float, default=None,
                   help="phase offset; overrides the per-m schedule")
    p.add_argument("--distance", choices=[d.value for d in Distance],
                   default=Distance.REL_ENT.value)
    p.add_argument("--grid", type=int, default=2001,
                   help="coarse grid points for the p optimizer")
    p.add_argument("--refine", type=int, default=60,
                   help="bracket refinement iterations for the p optimizer")
    p.add_argument("--boundary-eps", type=float, default=1e-4)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--version", action="version", version=f"nccoh {__version__}")
    return p


def build_spec(args: argparse.Namespace) -> SweepSpec:
    qpea_like = args.experiment.startswith("qpea")
    theta_default = DEFAULT_QPEA_THETA if qpea_like else DEFAULT_COHERENCE_THETA
    theta_min = args.theta_min if args.theta_min is not None else theta_default[0]
    theta_max = args.theta_max if args.theta_max is not None else theta_default[1]
    theta_steps = args.theta_steps if args.theta_steps is not None else theta_default[2]
    nc = NcConfig(
        distance=Distance(args.distance),
        coarse_grid_points=args.grid,
        refine_iterations=args.refine,
        boundary_eps=args.boundary_eps,
    )
    kwargs = {}
    if args.r_min is not None:
        kwargs["r_min"] = args.r_min
    if args.r_max is not None:
        kwargs["r_max"] = args.r_max
    if args.r_steps is not None:
        kwargs["r_steps"] = args.r_steps
    if args.orders is not None:
        kwargs["orders"] = _parse_orders(args.orders)
    if args.m_list is not None:
        kwargs["m_list"] = _parse_m_list(args.m_list)
    return SweepSpec(
        experiment=args.experiment,
        out=Path(args.out),
        theta_min=theta_min,
        theta_max=theta_max,
        theta_steps=theta_steps,
        delta=args.delta,
        nc=nc,
        threads=args.threads,
        **kwargs,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = build_spec(args)
    except ValueError as exc:
        print(f"nccoh-sweep: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    try:
        report = run_sweep(spec)
    except ValueError as exc:
        print(f"nccoh-sweep: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"nccoh-sweep: cannot write output: {exc}", file=sys.stderr)
        return 1
    print(
        f"{spec.experiment}: wrote {spec.out} "
        f"(kernel backend: {_kernels.backend_name()}, "
        f"{report.wall_seconds:.2f} s)"
    )
    for curve in report.curves:
        for e in curve.extrema:
            print(f"  {curve.curve_id}: {e.kind} at {e.location:.6f} -> {e.value:.6g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
