"""Convergence sweeps, resonance step-size scans, order estimation, and the
CSV emission used by the figures.

A sweep integrates one problem to a final time T for a list of step sizes
and records the euclidean error per field against the exact spectral
reference.  Step sizes from a log range are snapped to T/n so the final
time is hit exactly; resonance-window step sizes are kept as requested and
the reference is evaluated at the nearest reachable time n*tau instead, so
the scan is not polluted by endpoint adjustment.
"""

from __future__ import annotations

import csv
import math
import multiprocessing
import os
from dataclasses import dataclass

import numpy as np

from .config import MaxwellProblem
from .filters import filter_set, two_step_family
from .integrators import BlowUpError, kg_two_step_run, make_context, triple_split_run
from .model import KGProblem
from .reference import StatePropagator, build_oracle, exact_e

__all__ = [
    "MAXWELL_FIELDS",
    "KG_FIELDS",
    "TauPoint",
    "SweepConfig",
    "ErrorRecord",
    "log_tau_grid",
    "resonance_tau_grid",
    "run_sweep",
    "OrderFit",
    "InsufficientDataError",
    "estimate_order",
    "emit_csv",
    "load_records",
]

MAXWELL_FIELDS = ("err_p", "err_e", "err_b")
KG_FIELDS = ("err_x",)


@dataclass(frozen=True)
class TauPoint:
    """One requested step size; snapped points are replaced by T/round(T/tau)."""

    tau: float
    snap: bool = True

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError("step size must be positive")


def log_tau_grid(lo: float, hi: float, n: int) -> list[TauPoint]:
    """n log-uniform step sizes in [lo, hi], to be snapped to the final time."""
    if not (0 < lo <= hi):
        raise ValueError("need 0 < lo <= hi")
    if n < 1:
        raise ValueError("need at least one point")
    taus = np.geomspace(lo, hi, n)
    return [TauPoint(float(t), snap=True) for t in taus]


def resonance_tau_grid(
    omega: float,
    k_list,
    window_factor_lo: float,
    window_factor_hi: float,
    n: int,
) -> list[TauPoint]:
    """Uniform step sizes over windows around 2*pi*k/omega, plus the exact
    center of each window; these keep their requested value (no snapping)."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    if window_factor_lo > window_factor_hi:
        raise ValueError("window_factor_lo must not exceed window_factor_hi")
    points: list[TauPoint] = []
    for k in k_list:
        if k <= 0:
            raise ValueError("resonance index k must be a positive integer")
        center = 2.0 * math.pi * k / omega
        taus = {center}
        if window_factor_lo == window_factor_hi:
            taus.add(window_factor_lo * center)
        else:
            taus.update(float(t) for t in
                        np.linspace(window_factor_lo * center,
                                    window_factor_hi * center, n))
        points.extend(TauPoint(t, snap=False) for t in sorted(taus))
    return points


@dataclass(frozen=True)
class SweepConfig:
    method: str                 # "triple_split" | "kg_two_step"
    filter_name: str            # filter set name or two-step family label
    final_time: float
    points: tuple[TauPoint, ...]

    def __post_init__(self):
        if self.method not in ("triple_split", "kg_two_step"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.final_time <= 0:
            raise ValueError("final time must be positive")
        if not self.points:
            raise ValueError("sweep needs at least one step size")


@dataclass(frozen=True)
class ErrorRecord:
    tau: float
    n_steps: int
    fields: tuple[str, ...]
    errors: tuple[float, ...]
    blow_up: bool

    def get(self, name: str) -> float:
        return self.errors[self.fields.index(name)]


def _resolve_point(point: TauPoint, T: float) -> tuple[float, int]:
    n = max(1, round(T / point.tau))
    if point.snap:
        return T / n, n
    return point.tau, n


def _maxwell_point(problem: MaxwellProblem, propagator: StatePropagator,
                   fs, point: TauPoint, T: float) -> ErrorRecord:
    tau, n = _resolve_point(point, T)
    ctx = make_context(tau, problem.ops, fs)
    try:
        final = triple_split_run(problem.state0, ctx, n).final
    except BlowUpError:
        return ErrorRecord(tau, n, MAXWELL_FIELDS,
                           (math.inf, math.inf, math.inf), True)
    ref = propagator.at(n * tau)
    errs = (
        float(np.linalg.norm(final.p - ref.p)),
        float(np.linalg.norm(final.e - ref.e)),
        float(np.linalg.norm(final.b - ref.b)),
    )
    return ErrorRecord(tau, n, MAXWELL_FIELDS, errs, False)


def _kg_point(problem: KGProblem, oracle, pair, point: TauPoint, T: float) -> ErrorRecord:
    tau, n = _resolve_point(point, T)
    try:
        x_n = kg_two_step_run(problem.e0, problem.edot0, tau,
                              problem.omega.diag, problem.lap, pair, n)
    except BlowUpError:
        return ErrorRecord(tau, n, KG_FIELDS, (math.inf,), True)
    ref, _ = exact_e(oracle, problem.e0, problem.edot0, n * tau)
    return ErrorRecord(tau, n, KG_FIELDS, (float(np.linalg.norm(x_n - ref)),), False)


_WORK = None  # set in the parent before forking sweep workers


def _run_indexed(i: int) -> ErrorRecord:
    runner, points, T = _WORK
    return runner(points[i], T)


def run_sweep(problem, cfg: SweepConfig, jobs: int = 1) -> list[ErrorRecord]:
    """Integrate the problem for every step size and record per-field errors.

    Blow-ups become records with infinite errors, never exceptions.  Points
    are independent; with jobs > 1 they run in forked worker processes.  The
    result is sorted by step size, so it does not depend on the schedule.
    """
    if cfg.method == "triple_split":
        if not isinstance(problem, MaxwellProblem):
            raise TypeError("triple_split sweeps need a MaxwellProblem")
        fs = filter_set(cfg.filter_name)
        oracle = build_oracle(problem.ops)
        propagator = StatePropagator(oracle, problem.ops, problem.state0)

        def runner(point, T):
            return _maxwell_point(problem, propagator, fs, point, T)
    else:
        if not isinstance(problem, KGProblem):
            raise TypeError("kg_two_step sweeps need a KGProblem")
        pair = two_step_family(cfg.filter_name)
        oracle = build_oracle(problem)

        def runner(point, T):
            return _kg_point(problem, oracle, pair, point, T)

    points = list(cfg.points)
    if jobs > 1 and hasattr(os, "fork"):
        global _WORK
        _WORK = (runner, points, cfg.final_time)
        try:
            with multiprocessing.get_context("fork").Pool(jobs) as pool:
                records = pool.map(_run_indexed, range(len(points)))
        finally:
            _WORK = None
    else:
        records = [runner(p, cfg.final_time) for p in points]
    return sorted(records, key=lambda r: (r.tau, r.n_steps))


class InsufficientDataError(ValueError):
    """Too few usable records in the requested step-size range."""


@dataclass(frozen=True)
class OrderFit:
    slope: float
    stderr: float
    n_points: int


def estimate_order(records, tau_min: float, tau_max: float,
                   field_name: str) -> OrderFit:
    """Least-squares slope of log err versus log tau over [tau_min, tau_max].

    Blow-up rows and zero errors are excluded; at least 4 usable records are
    required.
    """
    xs, ys = [], []
    for r in records:
        if r.blow_up or not (tau_min <= r.tau <= tau_max):
            continue
        err = r.get(field_name)
        if err > 0 and math.isfinite(err):
            xs.append(math.log(r.tau))
            ys.append(math.log(err))
    if len(xs) < 4:
        raise InsufficientDataError(
            f"need >= 4 usable records in [{tau_min:g}, {tau_max:g}], got {len(xs)}")
    x = np.asarray(xs)
    y = np.asarray(ys)
    xc = x - x.mean()
    sxx = float(xc @ xc)
    slope = float(xc @ y) / sxx
    resid = y - (y.mean() + slope * xc)
    dof = len(xs) - 2
    var = float(resid @ resid) / dof if dof > 0 else 0.0
    return OrderFit(slope=slope, stderr=math.sqrt(var / sxx), n_points=len(xs))


def _fmt(x: float) -> str:
    return repr(float(x))


def emit_csv(records, path) -> None:
    """Write records as CSV: header tau,n_steps,<fields>,blow_up, rows in
    ascending tau, floats in shortest round-trip form, inf spelled 'inf'."""
    records = sorted(records, key=lambda r: (r.tau, r.n_steps))
    fields = records[0].fields if records else MAXWELL_FIELDS
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["tau", "n_steps", *fields, "blow_up"])
            for r in records:
                if r.fields != fields:
                    raise ValueError("mixed record kinds in one CSV")
                w.writerow([_fmt(r.tau), r.n_steps, *map(_fmt, r.errors),
                            "true" if r.blow_up else "false"])
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV {path}: {exc}") from exc


def load_records(path) -> list[ErrorRecord]:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise OSError(f"cannot read sweep CSV {path}: {exc}") from exc
    if not rows:
        raise ValueError(f"{path}: empty file, expected a header row")
    header = rows[0]
    if header[:2] != ["tau", "n_steps"] or header[-1] != "blow_up":
        raise ValueError(f"{path}: unexpected header {header!r}")
    fields = tuple(header[2:-1])
    out = []
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ValueError(f"{path}: line {i}: expected {len(header)} columns, "
                             f"got {len(row)}")
        out.append(ErrorRecord(
            tau=float(row[0]),
            n_steps=int(row[1]),
            fields=fields,
            errors=tuple(float(v) for v in row[2:-1]),
            blow_up=row[-1] == "true",
        ))
    return out
