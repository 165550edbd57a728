"""Command line interface: simulate / sweep / reference / verify-filters /
validate over one problem config.

Every output file gets a .manifest.json sidecar with the resolved
parameters, so any artifact can be regenerated from its manifest alone.
Exit codes: 0 success, 2 config or usage error, 3 numerical abort.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, MaxwellProblem, build_problem, load_config
from .experiments import (
    SweepConfig,
    emit_csv,
    log_tau_grid,
    resonance_tau_grid,
    run_sweep,
)
from .filters import FILTER_SET_NAMES, filter_set, verify_conditions
from .integrators import BlowUpError, make_context, triple_split_run
from .model import State, build_yee_operators, validate_assumptions
from .reference import build_oracle, exact_e, exact_state

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class UsageError(Exception):
    pass


def _write_manifest(out_path: Path, subcommand: str, params: dict,
                    config: dict | None) -> None:
    manifest = {
        "tool": "oscsplit",
        "version": __version__,
        "subcommand": subcommand,
        "config": config,
        "params": params,
        "outputs": [str(out_path)],
    }
    side = out_path.with_name(out_path.name + ".manifest.json")
    side.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _parse_colon_spec(text: str, flag: str, n_parts: int) -> list[str]:
    parts = text.split(":")
    if len(parts) != n_parts:
        raise UsageError(f"{flag}: expected {n_parts} colon-separated values, got {text!r}")
    return parts


def _cmd_validate(args) -> int:
    cfg = load_config(args.config)
    problem = build_problem(cfg)
    if isinstance(problem, MaxwellProblem):
        report = validate_assumptions(problem.ops, problem.state0)
    else:
        # wave problem: same structural checks, zero impulse/flux data
        zeros = np.zeros(problem.grid.n_points)
        ops = build_yee_operators(problem.grid).with_omega(problem.omega)
        report = validate_assumptions(ops, State(p=zeros, e=problem.e0, b=zeros))
    for line in report.lines():
        print(line)
    print("ALL PASS" if report.all_pass else "FAILED")
    return EXIT_OK if report.all_pass else EXIT_NUMERICAL


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    problem = build_problem(cfg)
    if not isinstance(problem, MaxwellProblem):
        raise ConfigError("simulate runs the splitting scheme; config must be maxwell1d")
    fs = filter_set(args.filter)
    ctx = make_context(args.tau, problem.ops, fs)
    stride = max(1, args.steps // args.snapshots) if args.snapshots else 0
    out = Path(args.out)
    params = {"tau": args.tau, "steps": args.steps, "filter": args.filter,
              "snapshots": args.snapshots}
    try:
        result = triple_split_run(problem.state0, ctx, args.steps,
                                  sample_stride=stride)
    except BlowUpError as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        _write_manifest(out, "simulate", {**params, "aborted": str(exc)}, cfg)
        return EXIT_NUMERICAL
    states = result.snapshots if stride else [result.final]
    if stride and states[-1] is not result.final:
        states.append(result.final)
    x = problem.grid.x
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "node", "x", "p", "e", "b"])
        for st in states:
            for j in range(st.n):
                w.writerow([repr(float(st.t)), j + 1, repr(float(x[j])),
                            repr(float(st.p[j])), repr(float(st.e[j])),
                            repr(float(st.b[j]))])
    _write_manifest(out, "simulate", params, cfg)
    return EXIT_OK


def _cmd_reference(args) -> int:
    cfg = load_config(args.config)
    problem = build_problem(cfg)
    out = Path(args.out)
    x = problem.grid.x
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        if isinstance(problem, MaxwellProblem):
            oracle = build_oracle(problem.ops)
            st = exact_state(oracle, problem.ops, problem.state0, args.t)
            w.writerow(["node", "x", "p", "e", "b"])
            for j in range(st.n):
                w.writerow([j + 1, repr(float(x[j])), repr(float(st.p[j])),
                            repr(float(st.e[j])), repr(float(st.b[j]))])
        else:
            oracle = build_oracle(problem)
            e_t, edot_t = exact_e(oracle, problem.e0, problem.edot0, args.t)
            w.writerow(["node", "x", "e", "edot"])
            for j in range(len(e_t)):
                w.writerow([j + 1, repr(float(x[j])), repr(float(e_t[j])),
                            repr(float(edot_t[j]))])
    _write_manifest(out, "reference", {"t": args.t}, cfg)
    return EXIT_OK


def _cmd_verify_filters(args) -> int:
    fs = filter_set(args.set)
    report = verify_conditions(fs, z_max=args.zmax)
    out = Path(args.out)
    report.write_csv(out)
    _write_manifest(out, "verify-filters", {"set": args.set, "zmax": args.zmax}, None)
    divergent = [r.condition for r in report.results.values() if r.divergent]
    print(f"filter set {args.set!r}: "
          + (f"divergent on {', '.join(divergent)}" if divergent else "all conditions finite"))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    problem = build_problem(cfg)
    points = []
    if args.tau_log:
        lo_s, hi_s, n_s = _parse_colon_spec(args.tau_log, "--tau-log", 3)
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
        if lo > hi:
            raise UsageError(f"--tau-log: lo={lo:g} exceeds hi={hi:g}")
        points.extend(log_tau_grid(lo, hi, n))
    if isinstance(problem, MaxwellProblem):
        omega = problem.ops.omega.omega_tilde
    else:
        omega = problem.omega.omega_tilde
    for zoom in args.zoom or []:
        k_s, lo_s, hi_s, n_s = _parse_colon_spec(zoom, "--zoom", 4)
        if omega <= 0:
            raise UsageError("--zoom: the configured problem has zero frequency")
        points.extend(resonance_tau_grid(omega, [int(k_s)], float(lo_s),
                                         float(hi_s), int(n_s)))
    if not points:
        raise UsageError("sweep needs --tau-log and/or --zoom")
    method = args.method
    sweep_cfg = SweepConfig(method=method, filter_name=args.filter,
                            final_time=args.T, points=tuple(points))
    records = run_sweep(problem, sweep_cfg, jobs=args.jobs)
    out = Path(args.out)
    emit_csv(records, out)
    params = {"method": method, "filter": args.filter, "T": args.T,
              "tau_log": args.tau_log, "zoom": args.zoom, "jobs": args.jobs}
    _write_manifest(out, "sweep", params, cfg)
    n_blow = sum(r.blow_up for r in records)
    print(f"wrote {len(records)} records to {out}"
          + (f" ({n_blow} blow-ups)" if n_blow else ""))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscsplit",
        description="Filtered splitting integrators, exact references, and "
                    "resonance experiments for oscillatory wave systems.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check structural assumptions of a problem")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("simulate", help="run the splitting scheme, write snapshots")
    p.add_argument("--config", required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--filter", default="new", choices=FILTER_SET_NAMES)
    p.add_argument("--snapshots", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("reference", help="exact solution at a time, as CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_reference)

    p = sub.add_parser("verify-filters", help="estimate filter admissibility constants")
    p.add_argument("--set", required=True, choices=FILTER_SET_NAMES)
    p.add_argument("--zmax", type=float, default=16.0 * math.pi)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_verify_filters)

    p = sub.add_parser("sweep", help="error-versus-step-size sweep, as CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--method", default="triple_split",
                   choices=("triple_split", "kg_two_step"))
    p.add_argument("--filter", default="new",
                   help="filter set name (triple_split) or family label (kg_two_step)")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--tau-log", dest="tau_log", default=None,
                   help="lo:hi:n log-uniform step sizes")
    p.add_argument("--zoom", action="append", default=None,
                   help="k:lo:hi:n resonance window around 2*pi*k/omega (repeatable)")
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes (default: logical cores)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; keep its code
        return int(exc.code or 0)
    if getattr(args, "jobs", None) is None and args.command == "sweep":
        import os
        args.jobs = os.cpu_count() or 1
    try:
        return args.func(args)
    except (ConfigError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
