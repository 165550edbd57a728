"""Time integrators: the filtered three-way splitting for the impulse/field/
flux system, its two-step field-only reformulation, and the generic filtered
two-step method for second-order wave problems."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .filters import FilterSet, TwoStepFilterPair, chi, eval_on_omega, sinc
from .model import DiscreteOperators, State

__all__ = [
    "BlowUpError",
    "StepContext",
    "make_context",
    "oscillation_block",
    "triple_split_step",
    "triple_split_run",
    "RunResult",
    "perturbed_initial_velocity",
    "TwoStepState",
    "two_step_first",
    "two_step_step",
    "two_step_run",
    "one_step_impulse_flux",
    "kg_two_step",
    "kg_two_step_first",
    "kg_two_step_run",
]

BLOWUP_NORM = 1e12


class BlowUpError(RuntimeError):
    """The iteration left the trust region (norm above the overflow cap)."""

    def __init__(self, step: int, norm: float):
        self.step = step
        self.norm = norm
        super().__init__(f"state norm {norm:.3e} exceeded {BLOWUP_NORM:.0e} at step {step}")


@dataclass(frozen=True)
class StepContext:
    """Per-(tau, problem, filter) precomputed diagonal matrix functions.

    All filters act elementwise because the frequency matrix is diagonal;
    precomputing them makes the step loop a handful of axpy operations and
    sparse matvecs.
    """

    tau: float
    ops: DiscreteOperators
    fs: FilterSet
    cos_t: np.ndarray        # cos(tau*Omega)
    omega_sin_t: np.ndarray  # Omega*sin(tau*Omega)
    tau_sinc_t: np.ndarray   # tau*sinc(tau*Omega)
    psi_e_h: np.ndarray      # psi_e(tau/2*Omega)
    phi_e_h: np.ndarray
    psi_b_h: np.ndarray
    phi_b_h: np.ndarray

    @property
    def n(self) -> int:
        return self.ops.n


def make_context(tau: float, ops: DiscreteOperators, fs: FilterSet) -> StepContext:
    """Build the precomputed step context (tau may be negative for adjoint steps)."""
    if tau == 0.0:
        raise ValueError("step size must be nonzero")
    w = ops.omega.diag
    tw = tau * w
    return StepContext(
        tau=tau,
        ops=ops,
        fs=fs,
        cos_t=np.cos(tw),
        omega_sin_t=w * np.sin(tw),
        tau_sinc_t=tau * sinc(tw),
        psi_e_h=eval_on_omega(fs.psi_e, 0.5 * tau, w),
        phi_e_h=eval_on_omega(fs.phi_e, 0.5 * tau, w),
        psi_b_h=eval_on_omega(fs.psi_b, 0.5 * tau, w),
        phi_b_h=eval_on_omega(fs.phi_b, 0.5 * tau, w),
    )


def oscillation_block(p: np.ndarray, e: np.ndarray, ctx: StepContext):
    """Exact flow of dp/dt = e, de/dt = -Omega^2 p over one step."""
    p_new = ctx.cos_t * p + ctx.tau_sinc_t * e
    e_new = -ctx.omega_sin_t * p + ctx.cos_t * e
    return p_new, e_new


def triple_split_step(state: State, ctx: StepContext) -> State:
    """One step of the symmetric splitting: flux half-step, field kick,
    exact oscillation, field kick, flux half-step."""
    if state.n != ctx.n:
        raise ValueError("state does not match the context's operators")
    ops, tau = ctx.ops, ctx.tau
    b_half = state.b - 0.5 * tau * ctx.psi_b_h * (ops.curl_e @ (ctx.phi_e_h * state.e))
    kick = 0.5 * tau * ctx.psi_e_h * (ops.curl_b @ (ctx.phi_b_h * b_half))
    e_plus = state.e + kick
    p_next, e_minus = oscillation_block(state.p, e_plus, ctx)
    e_next = e_minus + kick
    b_next = b_half - 0.5 * tau * ctx.psi_b_h * (ops.curl_e @ (ctx.phi_e_h * e_next))
    return State(p=p_next, e=e_next, b=b_next, t=state.t + tau)


@dataclass
class RunResult:
    final: State
    snapshots: list[State] = field(default_factory=list)
    n_steps: int = 0


def triple_split_run(
    state0: State,
    ctx: StepContext,
    n_steps: int,
    sample_stride: int = 0,
) -> RunResult:
    """Iterate the splitting; aborts with :class:`BlowUpError` on overflow.

    ``sample_stride`` > 0 stores a snapshot every that many steps (plus the
    initial state).
    """
    if n_steps < 0:
        raise ValueError("n_steps must be nonnegative")
    state = state0
    snaps = [state0.copy()] if sample_stride else []
    for k in range(1, n_steps + 1):
        state = triple_split_step(state, ctx)
        nrm = state.norm()
        if not math.isfinite(nrm) or nrm > BLOWUP_NORM:
            raise BlowUpError(k, nrm)
        if sample_stride and k % sample_stride == 0:
            snaps.append(state)
    return RunResult(final=state, snapshots=snaps, n_steps=n_steps)


def perturbed_initial_velocity(p0: np.ndarray, b0: np.ndarray,
                               ctx: StepContext) -> np.ndarray:
    """Starter velocity chi(tau*Omega) curl_b b0 - Omega^2 p0 for the
    two-step recursion (reduces to the plain field velocity at Omega = 0)."""
    w = ctx.ops.omega.diag
    chi_diag = np.asarray(chi(ctx.fs, ctx.tau * w))
    return chi_diag * (ctx.ops.curl_b @ b0) - w**2 * p0


def _require_unit_b(ctx: StepContext):
    if not (np.all(ctx.psi_b_h == 1.0) and np.all(ctx.phi_b_h == 1.0)):
        raise ValueError("two-step reformulation requires unit flux filters")


def _filtered_force(e: np.ndarray, ctx: StepContext) -> np.ndarray:
    """(cos(tau*Omega)+1) psi_e(tau/2 Omega) lap phi_e(tau/2 Omega) e."""
    return (ctx.cos_t + 1.0) * ctx.psi_e_h * (ctx.ops.lap @ (ctx.phi_e_h * e))


def two_step_first(e0: np.ndarray, edot0: np.ndarray, ctx: StepContext) -> np.ndarray:
    """Distinct first step of the two-step recursion."""
    _require_unit_b(ctx)
    return (ctx.cos_t * e0 + ctx.tau_sinc_t * edot0
            + 0.25 * ctx.tau**2 * _filtered_force(e0, ctx))


@dataclass
class TwoStepState:
    e_prev: np.ndarray
    e_curr: np.ndarray
    index: int = 1


def two_step_step(ts: TwoStepState, ctx: StepContext) -> np.ndarray:
    """Three-term recursion for the field:
    e_{n+1} = 2 cos(tau*Omega) e_n - e_{n-1} + tau^2/2 * filtered force."""
    _require_unit_b(ctx)
    return ((2.0 * ctx.cos_t * ts.e_curr + 0.5 * ctx.tau**2 * _filtered_force(ts.e_curr, ctx))
            - ts.e_prev)


def two_step_run(state0: State, ctx: StepContext, n_steps: int) -> list[np.ndarray]:
    """Field iterates e_0..e_n of the two-step path seeded from a full state
    (starter velocity from the perturbed initial value)."""
    _require_unit_b(ctx)
    iterates = [state0.e.copy()]
    if n_steps == 0:
        return iterates
    edot0 = perturbed_initial_velocity(state0.p, state0.b, ctx)
    iterates.append(two_step_first(state0.e, edot0, ctx))
    ts = TwoStepState(e_prev=iterates[0], e_curr=iterates[1], index=1)
    for _ in range(n_steps - 1):
        e_next = two_step_step(ts, ctx)
        iterates.append(e_next)
        ts = TwoStepState(e_prev=ts.e_curr, e_curr=e_next, index=ts.index + 1)
    return iterates


def one_step_impulse_flux(
    p: np.ndarray, e_curr: np.ndarray, e_next: np.ndarray, b: np.ndarray,
    ctx: StepContext,
) -> tuple[np.ndarray, np.ndarray]:
    """Closed one-step updates of impulse and flux consistent with the
    splitting (unit flux filters), given consecutive field iterates."""
    _require_unit_b(ctx)
    s = ctx.tau_sinc_t  # tau*sinc already carries one factor of tau
    p_next = (ctx.cos_t * p + s * e_curr
              + 0.5 * ctx.tau * s * ctx.psi_e_h * (ctx.ops.curl_b @ b)
              + 0.25 * ctx.tau**2 * s * ctx.psi_e_h
              * (ctx.ops.lap @ (ctx.phi_e_h * e_curr)))
    b_next = b - 0.5 * ctx.tau * (ctx.ops.curl_e @ (ctx.phi_e_h * (e_curr + e_next)))
    return p_next, b_next


# --------------------------------------------------------------------------
# Generic filtered two-step method for d^2 x/dt^2 = lap x - Omega^2 x
# --------------------------------------------------------------------------


def _kg_diagonals(tau: float, omega_diag: np.ndarray, pair: TwoStepFilterPair):
    tw = tau * omega_diag
    return np.cos(tw), np.asarray(pair.psi(tw)), np.asarray(pair.phi(tw))


def kg_two_step(
    x_prev: np.ndarray, x_curr: np.ndarray, tau: float,
    omega_diag: np.ndarray, lap: sp.csr_matrix, pair: TwoStepFilterPair,
) -> np.ndarray:
    """x_{n+1} = 2 cos(tau*Omega) x_n - x_{n-1} + tau^2 psi(tau*Omega) lap phi(tau*Omega) x_n."""
    c, psi_d, phi_d = _kg_diagonals(tau, omega_diag, pair)
    return 2.0 * c * x_curr - x_prev + tau**2 * psi_d * (lap @ (phi_d * x_curr))


def kg_two_step_first(
    x0: np.ndarray, xdot0: np.ndarray, tau: float,
    omega_diag: np.ndarray, lap: sp.csr_matrix, pair: TwoStepFilterPair,
) -> np.ndarray:
    """One-step starter consistent to third order with the exact flow."""
    c, psi_d, phi_d = _kg_diagonals(tau, omega_diag, pair)
    tw = tau * omega_diag
    return (c * x0 + tau * sinc(tw) * xdot0
            + 0.5 * tau**2 * psi_d * (lap @ (phi_d * x0)))


def kg_two_step_run(
    x0: np.ndarray, xdot0: np.ndarray, tau: float,
    omega_diag: np.ndarray, lap: sp.csr_matrix, pair: TwoStepFilterPair,
    n_steps: int,
) -> np.ndarray:
    """Iterate the two-step method for n_steps; returns x_n.

    Diagonals are precomputed once; aborts with :class:`BlowUpError` on
    overflow like the splitting runner.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be nonnegative")
    if n_steps == 0:
        return x0.copy()
    c, psi_d, phi_d = _kg_diagonals(tau, omega_diag, pair)
    tw = tau * omega_diag
    x1 = (c * x0 + tau * sinc(tw) * xdot0
          + 0.5 * tau**2 * psi_d * (lap @ (phi_d * x0)))
    x_prev, x_curr = x0, x1
    tau2 = tau * tau
    for k in range(2, n_steps + 1):
        x_next = 2.0 * c * x_curr - x_prev + tau2 * psi_d * (lap @ (phi_d * x_curr))
        nrm = float(np.linalg.norm(x_next))
        if not math.isfinite(nrm) or nrm > BLOWUP_NORM:
            raise BlowUpError(k, nrm)
        x_prev, x_curr = x_curr, x_next
    return x_curr
