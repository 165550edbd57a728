"""Exact reference propagation via symmetric eigendecomposition.

The field equation d^2 e/dt^2 = -(Omega^2 - lap) e is solved in closed form
per eigenmode of A = Omega^2 - lap; impulse and flux follow from the exact
time integral of the field, also computed modewise.  Evaluation uses
t*sinc(sqrt(l)*t) and t^2*sinc(sqrt(l)*t/2)^2/2 for the mode integrals,
which are stable uniformly in the eigenvalue including l = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .filters import sinc
from .model import DiscreteOperators, KGProblem, State

__all__ = ["SpectralOracle", "build_oracle", "exact_e", "exact_state", "StatePropagator"]

_MAX_N = 2000


@dataclass(frozen=True)
class SpectralOracle:
    """Eigendecomposition of the symmetric oscillator matrix A = Omega^2 - lap."""

    eigenvalues: np.ndarray  # ascending, clipped to >= 0
    vectors: np.ndarray      # orthonormal columns
    a_norm: float

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    @property
    def frequencies(self) -> np.ndarray:
        return np.sqrt(self.eigenvalues)

    def to_modes(self, v: np.ndarray) -> np.ndarray:
        return self.vectors.T @ v

    def from_modes(self, c: np.ndarray) -> np.ndarray:
        return self.vectors @ c


def _build_from_matrix(a: np.ndarray) -> SpectralOracle:
    n = a.shape[0]
    if n > _MAX_N:
        raise ValueError(f"problem size {n} exceeds the oracle cap {_MAX_N}")
    a_norm = float(np.abs(a).sum(axis=1).max())
    defect = float(np.abs(a - a.T).max())
    if defect > 1e-8 * max(a_norm, 1.0):
        raise ValueError(f"oscillator matrix not symmetric (defect {defect:.3g})")
    w, v = np.linalg.eigh(0.5 * (a + a.T))
    if w[0] < -1e-10 * max(a_norm, 1.0):
        raise ValueError(f"oscillator matrix not positive semidefinite (min eig {w[0]:.3g})")
    return SpectralOracle(eigenvalues=np.clip(w, 0.0, None), vectors=v, a_norm=a_norm)


def build_oracle(ops: DiscreteOperators | KGProblem) -> SpectralOracle:
    """Decompose Omega^2 - lap for a built problem."""
    return _build_from_matrix(ops.oscillator_matrix())


def exact_e(oracle: SpectralOracle, e0: np.ndarray, edot0: np.ndarray,
            t: float) -> tuple[np.ndarray, np.ndarray]:
    """Field and field velocity at time t from initial (e0, edot0)."""
    freq = oracle.frequencies
    ft = freq * t
    c = np.cos(ft)
    ts = t * sinc(ft)
    e_hat = oracle.to_modes(e0)
    d_hat = oracle.to_modes(edot0)
    e_t = c * e_hat + ts * d_hat
    d_t = -freq * np.sin(ft) * e_hat + c * d_hat
    return oracle.from_modes(e_t), oracle.from_modes(d_t)


def _mode_integrals(freq: np.ndarray, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Integrals over [0, t] of cos(w s) and s*sinc(w s) per mode frequency w."""
    ft = freq * t
    int_cos = t * sinc(ft)
    half = sinc(0.5 * ft)
    int_ssinc = 0.5 * t * t * half * half
    return int_cos, int_ssinc


class StatePropagator:
    """Exact propagator for one initial state, reusable across many times."""

    def __init__(self, oracle: SpectralOracle, ops: DiscreteOperators, state0: State):
        if state0.n != oracle.n:
            raise ValueError("state size does not match the oracle")
        self.oracle = oracle
        self.ops = ops
        self.state0 = state0
        edot0 = ops.curl_b @ state0.b - ops.omega.diag**2 * state0.p
        self._e_hat = oracle.to_modes(state0.e)
        self._d_hat = oracle.to_modes(edot0)

    def at(self, t: float) -> State:
        orc = self.oracle
        freq = orc.frequencies
        ft = freq * t
        c = np.cos(ft)
        e_t = orc.from_modes(c * self._e_hat + t * sinc(ft) * self._d_hat)
        int_cos, int_ssinc = _mode_integrals(freq, t)
        integral = orc.from_modes(int_cos * self._e_hat + int_ssinc * self._d_hat)
        p_t = self.state0.p + integral
        b_t = self.state0.b - self.ops.curl_e @ integral
        return State(p=p_t, e=e_t, b=b_t, t=self.state0.t + t)


def exact_state(oracle: SpectralOracle, ops: DiscreteOperators, state0: State,
                t: float) -> State:
    """All three fields at time t: the field from the mode formulas, impulse
    and flux from p(t) = p0 + I(t), b(t) = b0 - curl_e I(t) with
    I(t) the exact time integral of the field."""
    return StatePropagator(oracle, ops, state0).at(t)
