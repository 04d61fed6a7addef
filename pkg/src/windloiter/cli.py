"""Command-line front end.

    windloiter run --list
    windloiter run --scenario small-radius --mode adaptive --out traj.csv
    windloiter run --scenario const-overwind --mode prevention --summary
    windloiter run --all --out-dir results/ --jobs 4
    windloiter feasmap --out feas.csv
    windloiter gnuplot traj_a.csv traj_b.csv --out plot.gp
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Optional, Sequence

import numpy as np

from .controller import MODES
from .errors import InvalidArgumentError, SimulationFault
from .outputs import export_feasibility_map, gnuplot_script
from .scenarios import RunSummary, ScenarioSpec, builtin_catalog, get_scenario, load_config
from .wind_feas import FeasibilityParams


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="windloiter", description="Wind-aware L1 loiter guidance simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a scenario")
    run.add_argument("--scenario", help="catalog scenario name")
    run.add_argument("--mode", choices=sorted(MODES), help="guidance configuration (default: scenario's own)")
    run.add_argument("--out", help="trajectory CSV path ('-' for stdout)")
    run.add_argument("--summary", action="store_true", help="print run summary metrics")
    run.add_argument("--config", help="INI-style config file; flags override it")
    run.add_argument("--list", action="store_true", help="list catalog scenarios and exit")
    run.add_argument("--dt", type=float, help="integration step [s]")
    run.add_argument("--t-end", type=float, help="simulation duration [s]")
    run.add_argument("--backend", choices=("auto", "compiled", "python"), default="auto")
    run.add_argument("--all", action="store_true", help="run every catalog scenario in each of its modes")
    run.add_argument("--out-dir", default=".", help="output directory for --all")
    run.add_argument("--jobs", type=int, default=1, help="parallel workers for --all")

    fm = sub.add_parser("feasmap", help="tabulate the feasibility function")
    fm.add_argument("--out", required=True, help="grid CSV path")
    fm.add_argument("--beta-max", type=float, default=2.0)
    fm.add_argument("--beta-n", type=int, default=201)
    fm.add_argument("--lambda-n", type=int, default=181)
    fm.add_argument("--v-A", type=float, default=9.0, help="airspeed setting the buffer ratio [m/s]")
    fm.add_argument("--v-A-buf", type=float, default=FeasibilityParams().v_A_buf)
    fm.add_argument("--lambda-co-deg", type=float, default=15.0)
    fm.add_argument("--no-legacy", action="store_true", help="omit the legacy function column")

    gp = sub.add_parser("gnuplot", help="write a gnuplot script for trajectory CSVs")
    gp.add_argument("csv", nargs="+")
    gp.add_argument("--out", help="script path (default stdout)")
    gp.add_argument("--png", default="windloiter.png", help="image the script renders")
    return parser


def _resolve_spec(args, parser) -> ScenarioSpec:
    spec: Optional[ScenarioSpec] = None
    if args.scenario:
        try:
            spec = get_scenario(args.scenario)
        except InvalidArgumentError as exc:
            parser.error(str(exc))
    if args.config:
        try:
            spec = load_config(args.config, base=spec)
        except (OSError, InvalidArgumentError, ValueError) as exc:
            parser.error(f"config: {exc}")
    if spec is None:
        parser.error("need --scenario, --config, --all or --list")
    if args.mode:
        spec = spec.with_mode(args.mode)
    if args.dt is not None or args.t_end is not None:
        try:
            spec = replace(spec, sim=replace(
                spec.sim,
                dt=args.dt if args.dt is not None else spec.sim.dt,
                t_end=args.t_end if args.t_end is not None else spec.sim.t_end,
            ))
        except InvalidArgumentError as exc:
            parser.error(str(exc))
    return spec


def _run_one(spec: ScenarioSpec, out: Optional[str], backend: str) -> RunSummary:
    traj = spec.run(backend=backend)
    if out == "-":
        traj.write_csv(sys.stdout)
    elif out:
        traj.write_csv(out)
    return RunSummary.from_trajectory(traj)


def _batch_job(job: tuple) -> tuple[str, str]:
    spec, path, backend = job
    summary = _run_one(spec, path, backend)
    return path, summary.format()


def _cmd_run(args, parser) -> int:
    if args.list:
        for spec in builtin_catalog():
            print(f"{spec.name}\t{','.join(spec.modes)}\t{spec.description}")
        return 0
    if args.all:
        os.makedirs(args.out_dir, exist_ok=True)
        jobs = [
            (spec.with_mode(mode), os.path.join(args.out_dir, f"{spec.name}_{mode}.csv"), args.backend)
            for spec in builtin_catalog()
            for mode in spec.modes
        ]
        try:
            if args.jobs > 1:
                with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                    results = list(pool.map(_batch_job, jobs))
            else:
                results = [_batch_job(j) for j in jobs]
        except SimulationFault as exc:
            print(f"simulation fault: {exc}", file=sys.stderr)
            return 1
        for path, text in results:
            print(f"# {path}\n{text}")
        return 0

    spec = _resolve_spec(args, parser)
    out = args.out if args.out else (None if args.summary else "-")
    try:
        summary = _run_one(spec, out, args.backend)
    except SimulationFault as exc:
        print(f"simulation fault: {exc}", file=sys.stderr)
        return 1
    except InvalidArgumentError as exc:
        parser.error(str(exc))
    if args.summary:
        print(f"# scenario {spec.name} mode {spec.mode}")
        print(summary.format())
    return 0


def _cmd_feasmap(args) -> int:
    params = FeasibilityParams(v_A_buf=args.v_A_buf, lambda_co=math.radians(args.lambda_co_deg))
    betas = np.linspace(0.0, args.beta_max, args.beta_n)
    lams = np.linspace(-math.pi, math.pi, args.lambda_n)
    export_feasibility_map(params, betas, lams, args.out, v_A=args.v_A, legacy=not args.no_legacy)
    return 0


def _cmd_gnuplot(args) -> int:
    text = gnuplot_script(args.csv, output=args.png)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(args, parser)
    if args.command == "feasmap":
        return _cmd_feasmap(args)
    return _cmd_gnuplot(args)


if __name__ == "__main__":
    sys.exit(main())
