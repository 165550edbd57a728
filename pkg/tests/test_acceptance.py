"""Acceptance suite: every criterion runs at its stated tolerance and prints
one PASS/FAIL line.  Run with `pytest -s tests/test_acceptance.py` to see the
lines; plain `pytest` still enforces every assertion."""

import math
import os
import time

import numpy as np
import pytest

from oscsplit.config import build_problem, kg_interaction_config, maxwell_desk_config
from oscsplit.experiments import (
    SweepConfig,
    TauPoint,
    estimate_order,
    log_tau_grid,
    resonance_tau_grid,
    run_sweep,
)
from oscsplit.filters import filter_set, two_step_family, verify_conditions
from oscsplit.integrators import (
    kg_two_step_run,
    make_context,
    oscillation_block,
    triple_split_step,
    two_step_run,
)
from oscsplit.model import (
    DensityProfile,
    Grid1D,
    PulseConfig,
    State,
    build_omega,
    build_yee_operators,
    hamiltonian,
    laser_pulse_initial,
)
from oscsplit.reference import StatePropagator, build_oracle, exact_e

JOBS = min(4, os.cpu_count() or 1)
OMEGA = 3000.0
T_FINAL = 20.0


def report(name: str, ok: bool, detail: str) -> bool:
    print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


@pytest.fixture(scope="module")
def desk_problem():
    return build_problem(maxwell_desk_config())


@pytest.fixture(scope="module")
def convergence_records(desk_problem):
    t0 = time.monotonic()
    centers = [TauPoint(2 * math.pi * k / OMEGA, snap=False) for k in (1, 2, 3, 4)]
    cfg = SweepConfig("triple_split", "new", T_FINAL,
                      tuple(log_tau_grid(1e-4, 1e-2, 9) + centers))
    recs = run_sweep(desk_problem, cfg, jobs=JOBS)
    center_taus = {p.tau for p in centers}
    return recs, center_taus, time.monotonic() - t0


def test_second_order_uniform_convergence(convergence_records):
    """Slope in [1.8, 2.2] per field over tau in [1e-4, 1e-2] including the
    four resonant step sizes, which must sit within 3x of the smooth trend."""
    recs, center_taus, sweep_seconds = convergence_records
    t0 = time.monotonic() - sweep_seconds
    slopes = {}
    for f in ("err_p", "err_e", "err_b"):
        slopes[f] = estimate_order(recs, 1e-4, 1e-2, f).slope
    log_rows = [r for r in recs if r.tau not in center_taus]
    res_rows = [r for r in recs if r.tau in center_taus]
    assert len(res_rows) == 4
    worst = 0.0
    for f in ("err_p", "err_e", "err_b"):
        fit = estimate_order(log_rows, 1e-4, 1e-2, f)
        xs = np.array([math.log(r.tau) for r in log_rows])
        ys = np.array([math.log(r.get(f)) for r in log_rows])
        intercept = ys.mean() - fit.slope * xs.mean()
        for r in res_rows:
            trend = math.exp(fit.slope * math.log(r.tau) + intercept)
            worst = max(worst, r.get(f) / trend)
    elapsed = time.monotonic() - t0
    ok = all(1.8 <= s <= 2.2 for s in slopes.values()) and worst <= 3.0
    assert report(
        "second-order uniform convergence", ok,
        f"slopes p/e/b = {slopes['err_p']:.3f}/{slopes['err_e']:.3f}/"
        f"{slopes['err_b']:.3f}, resonance/trend <= {worst:.2f}, {elapsed:.0f}s")
    assert elapsed <= 300.0


def test_frequency_independence_of_slope(convergence_records, desk_problem):
    """Raising the foil frequency to 1e4 moves every slope by at most 0.2."""
    t0 = time.monotonic()
    recs3, _, _ = convergence_records
    prob4 = build_problem(maxwell_desk_config(rho=1e8))
    centers = [TauPoint(2 * math.pi * k / 1e4, snap=False) for k in (1, 2, 3, 4)]
    cfg = SweepConfig("triple_split", "new", T_FINAL,
                      tuple(log_tau_grid(1e-4, 1e-2, 9) + centers))
    recs4 = run_sweep(prob4, cfg, jobs=JOBS)
    drift = 0.0
    out = []
    for f in ("err_p", "err_e", "err_b"):
        s3 = estimate_order(recs3, 1e-4, 1e-2, f).slope
        s4 = estimate_order(recs4, 1e-4, 1e-2, f).slope
        drift = max(drift, abs(s4 - s3))
        out.append(f"{f}:{s3:.2f}->{s4:.2f}")
    elapsed = time.monotonic() - t0
    assert report("slope stability across frequencies", drift <= 0.2,
                  ", ".join(out) + f", {elapsed:.0f}s")
    assert elapsed <= 300.0


def test_resonance_of_original_filter(desk_problem):
    """Original filter: sharp error peak inside the narrow zoom window around
    the first resonant step size, at least 10x the window-edge error; the
    peak sits at the laser-beat offsets tau*(omega -+ 2*pi) = 2*pi, not at
    the exact center (where the filter zero switches the channel off)."""
    t0 = time.monotonic()
    cfg = SweepConfig("triple_split", "orig", T_FINAL,
                      tuple(resonance_tau_grid(OMEGA, [1], 0.997, 1.003, 41)))
    recs = run_sweep(desk_problem, cfg, jobs=JOBS)
    edge = min(recs, key=lambda r: r.tau).get("err_e")
    peak = max(r.get("err_e") for r in recs)
    ratio = peak / edge
    elapsed = time.monotonic() - t0
    assert report("sharp resonance of the original filter", ratio >= 10.0,
                  f"window peak {peak:.3e} vs 0.997-edge {edge:.3e}, "
                  f"ratio {ratio:.1f}, {elapsed:.0f}s")
    assert elapsed <= 300.0


def test_broad_resonance_without_filter(desk_problem):
    """No filter: broad elevated plateau across the wide resonance window."""
    t0 = time.monotonic()
    center = 2 * math.pi / OMEGA
    win = resonance_tau_grid(OMEGA, [1], 0.923, 1.075, 15)
    off = [TauPoint(f * center, snap=False)
           for f in (0.80, 0.85, 0.90, 1.10, 1.15, 1.20)]
    r_in = run_sweep(desk_problem,
                     SweepConfig("triple_split", "none", T_FINAL, tuple(win)),
                     jobs=JOBS)
    r_off = run_sweep(desk_problem,
                      SweepConfig("triple_split", "none", T_FINAL, tuple(off)),
                      jobs=JOBS)
    med_in = float(np.median([r.get("err_e") for r in r_in]))
    med_off = float(np.median([r.get("err_e") for r in r_off]))
    ratio = med_in / med_off
    elapsed = time.monotonic() - t0
    assert report("broad resonance without filter", ratio >= 10.0,
                  f"in-window median {med_in:.3e} vs off-window {med_off:.3e}, "
                  f"ratio {ratio:.1f}, {elapsed:.0f}s")
    assert elapsed <= 300.0


def test_two_step_equivalence():
    """Splitting field iterates equal the seeded three-term recursion to
    1e-11 relative over 200 steps for 20 random (tau, filter) draws."""
    t0 = time.monotonic()
    g = Grid1D(24, 0.0, 24.0)
    ops = build_yee_operators(g).with_omega(
        build_omega(DensityProfile.step(g, 8.0, 12.0, 1600.0)))
    rng = np.random.default_rng(42)
    names = ("none", "orig", "new", "sinc2z")
    worst = 0.0
    for k in range(20):
        fs = filter_set(names[k % 4])
        tau = float(np.exp(rng.uniform(np.log(1e-3), np.log(0.2))))
        if fs.name == "none" and abs(np.sinc(tau * 40.0 / np.pi)) < 1e-2:
            tau *= 1.05
        st = State(*rng.standard_normal((3, 24)))
        ctx = make_context(tau, ops, fs)
        iters = two_step_run(st, ctx, 200)
        scale = max(np.linalg.norm(e) for e in iters)
        cur = st
        for n in range(1, 201):
            cur = triple_split_step(cur, ctx)
            worst = max(worst, float(np.linalg.norm(cur.e - iters[n])) / scale)
    elapsed = time.monotonic() - t0
    assert report("two-step equivalence", worst <= 1e-11,
                  f"max relative deviation {worst:.2e} over 20 draws, {elapsed:.0f}s")
    assert elapsed <= 10.0


def test_leapfrog_reduction():
    """Vacuum splitting with unit filters matches an independently coded
    staggered leapfrog to 1e-13 over 1000 steps."""
    t0 = time.monotonic()
    g = Grid1D(240, 0.0, 24.0)
    ops = build_yee_operators(g).with_omega(build_omega(DensityProfile.vacuum(g)))
    st = laser_pulse_initial(g, PulseConfig(1.0, 10.0, 10.0))
    tau = 0.9 * g.h
    h = g.h

    def d_back(u):
        return (u - np.roll(u, 1)) / h

    def d_fwd_neg(u):
        return (u - np.roll(u, -1)) / h

    p, e, b = st.p.copy(), st.e.copy(), st.b.copy()
    ctx = make_context(tau, ops, filter_set("none"))
    split = st
    worst = 0.0
    for _ in range(1000):
        b_half = b - 0.5 * tau * d_back(e)
        e_new = e + tau * d_fwd_neg(b_half)
        p = p + tau * 0.5 * (e + e_new)
        e = e_new
        b = b_half - 0.5 * tau * d_back(e)
        split = triple_split_step(split, ctx)
        scale = max(np.linalg.norm(e), 1e-30)
        worst = max(worst,
                    float(np.linalg.norm(split.e - e)) / scale,
                    float(np.linalg.norm(split.b - b)) / scale,
                    float(np.linalg.norm(split.p - p)) / scale)
    elapsed = time.monotonic() - t0
    assert report("leapfrog reduction in vacuum", worst <= 1e-13,
                  f"max relative deviation {worst:.2e} over 1000 steps, {elapsed:.0f}s")
    assert elapsed <= 5.0


def test_filter_condition_verifier():
    """The new filter set passes every second-order condition with the known
    constants; the original set is flagged exactly on the squared condition
    near 2*pi but passes its weakened form; the new set also passes the
    multi-frequency conditions with a vanishing mixed-difference constant."""
    t0 = time.monotonic()
    rep_new = verify_conditions(filter_set("new"))
    rep_orig = verify_conditions(filter_set("orig"))
    checks = {
        "new 13 all finite": rep_new.all_finite(
            ["13a", "13b", "13c", "13d", "13e", "13f", "13g", "13h"]),
        "new C1<=2": rep_new["13a"].sup <= 2.0 + 1e-6,
        "new C5<=1/6": rep_new["13e"].sup <= 1.0 / 6.0 + 1e-6,
        "new C8<=1/2": rep_new["13h"].sup <= 0.5 + 1e-6,
        "new 33 all finite": rep_new.all_finite(["33a", "33b", "33c", "33d", "33e"]),
        "new C12<=1e-9": rep_new["33d"].sup <= 1e-9,
        "orig 13a divergent near 2pi": rep_orig["13a"].divergent and any(
            abs(z - 2 * math.pi) < 1e-6 for z in rep_orig["13a"].divergence_zeros),
        "orig weak C0<=2": (not rep_orig["13a-weak"].divergent)
                            and rep_orig["13a-weak"].sup <= 2.0,
    }
    elapsed = time.monotonic() - t0
    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    assert report("filter condition verifier", ok,
                  ("all checks hold" if ok else "failed: " + ", ".join(failed))
                  + f", C1={rep_new['13a'].sup:.6f}, C5={rep_new['13e'].sup:.6f}, "
                    f"C8={rep_new['13h'].sup:.6f}, C12={rep_new['33d'].sup:.1e}, "
                    f"{elapsed:.0f}s")
    assert elapsed <= 30.0


def test_kg_family_study():
    """Two-step families on the foil wave problem (240 nodes, frequency 9e3,
    final time 3), with the pulse launched next to the foil so the resonant
    channel carries field: A and F keep slope 2 through the zoom window;
    G and I spike by 10x against the off-resonance flanks at 1% detuning.
    The window edges themselves sit on the beat humps tau*(omega -+ 2*pi)
    = 2*pi*k, so the flanks are the faithful background reference."""
    t0 = time.monotonic()
    omega = 9.0e3
    T = 3.0
    prob = build_problem(kg_interaction_config())
    orc = build_oracle(prob)
    center = 2 * math.pi / omega
    window = list(np.linspace((2 * math.pi - 5e-3) / omega,
                              (2 * math.pi + 5e-3) / omega, 21))
    flanks = [0.99 * center, 1.01 * center]
    # fit range brackets the window and the first four resonances; below
    # z ~ 4 family F crosses between force regimes (constant transition, both
    # asymptotic ends are clean order 2) which would bias a global fit
    log_taus = [T / max(1, round(T / t)) for t in np.geomspace(5e-4, 3e-3, 9)]

    def errors(label, taus):
        pair = two_step_family(label)
        out = []
        for tau in taus:
            n = max(1, round(T / tau))
            x = kg_two_step_run(prob.e0, prob.edot0, tau, prob.omega.diag,
                                prob.lap, pair, n)
            ref, _ = exact_e(orc, prob.e0, prob.edot0, n * tau)
            out.append(float(np.linalg.norm(x - ref)))
        return out

    slopes = {}
    for label in ("A", "F"):
        taus = log_taus + window
        errs = errors(label, taus)
        x = np.log(taus)
        y = np.log(errs)
        xc = x - x.mean()
        slopes[label] = float(xc @ y / (xc @ xc))
    spikes = {}
    edge_ratios = {}
    for label in ("G", "I"):
        w_errs = errors(label, window)
        f_errs = errors(label, flanks)
        spikes[label] = max(w_errs) / max(f_errs)
        edge_ratios[label] = max(w_errs) / max(w_errs[0], w_errs[-1])
    elapsed = time.monotonic() - t0
    ok = (all(1.8 <= s <= 2.2 for s in slopes.values())
          and all(r >= 10.0 for r in spikes.values()))
    assert report(
        "two-step family study", ok,
        f"slopes A={slopes['A']:.2f} F={slopes['F']:.2f}; spike vs flanks "
        f"G={spikes['G']:.0f}x I={spikes['I']:.0f}x (vs window edges "
        f"G={edge_ratios['G']:.1f}x I={edge_ratios['I']:.1f}x), {elapsed:.0f}s")
    assert elapsed <= 300.0


def test_oracle_self_checks(desk_problem):
    """Reference solver invariants: energy conservation along the exact
    field, defect of the full-state output against the governing equations,
    and exactness of the oscillation block."""
    t0 = time.monotonic()
    ops = desk_problem.ops
    st = desk_problem.state0
    orc = build_oracle(ops)

    edot0 = ops.curl_b @ st.b - ops.omega.diag**2 * st.p
    h0 = hamiltonian(st.e, edot0, ops.omega, ops.curl_e)
    drift = 0.0
    for t in np.linspace(0.0, T_FINAL, 50):
        e_t, d_t = exact_e(orc, st.e, edot0, float(t))
        drift = max(drift, abs(hamiltonian(e_t, d_t, ops.omega, ops.curl_e) - h0) / h0)

    g = Grid1D(240, 0.0, 24.0)
    ops2 = build_yee_operators(g).with_omega(
        build_omega(DensityProfile.step(g, 20.0, 21.0, 2500.0)))
    st2 = laser_pulse_initial(g, PulseConfig(1.0, 10.0, 10.0))
    prop = StatePropagator(build_oracle(ops2), ops2, st2)
    t, dt = 1.0, 1e-5
    mid, lo, hi = prop.at(t), prop.at(t - dt), prop.at(t + dt)
    rhs_p = mid.e
    rhs_e = ops2.curl_b @ mid.b - ops2.omega.diag**2 * mid.p
    rhs_b = -(ops2.curl_e @ mid.e)
    scale = max(np.linalg.norm(v) for v in (rhs_p, rhs_e, rhs_b))
    residual = max(
        float(np.linalg.norm((hi.p - lo.p) / (2 * dt) - rhs_p)),
        float(np.linalg.norm((hi.e - lo.e) / (2 * dt) - rhs_e)),
        float(np.linalg.norm((hi.b - lo.b) / (2 * dt) - rhs_b)),
    ) / scale

    rng = np.random.default_rng(3)
    ctx = make_context(0.013, ops, filter_set("none"))
    w2 = ops.omega.diag**2
    energy_defect = 0.0
    for _ in range(10):
        p, e = rng.standard_normal((2, ops.n))
        p1, e1 = oscillation_block(p, e, ctx)
        before = w2 * p**2 + e**2
        after = w2 * p1**2 + e1**2
        energy_defect = max(energy_defect,
                            float(np.max(np.abs(after - before)
                                         / np.maximum(before, 1e-300))))
    elapsed = time.monotonic() - t0
    ok = drift <= 1e-9 and residual <= 1e-6 and energy_defect <= 1e-14
    assert report("oracle self-checks", ok,
                  f"energy drift {drift:.1e}, equation residual {residual:.1e}, "
                  f"block energy defect {energy_defect:.1e}, {elapsed:.0f}s")
    assert elapsed <= 10.0
