"""Problem setup: periodic 1-d grids, discrete curl operators, density
profiles, pulse initial data, and structural validation of the built
operators and initial values."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp

__all__ = [
    "Grid1D",
    "DensityProfile",
    "OmegaMatrix",
    "DiscreteOperators",
    "State",
    "PulseConfig",
    "KGProblem",
    "build_yee_operators",
    "build_omega",
    "laser_pulse_initial",
    "pulse_field",
    "pulse_velocity",
    "smooth_cutoff",
    "build_kg_problem",
    "hamiltonian",
    "CheckItem",
    "AssumptionReport",
    "validate_assumptions",
]


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic grid with nodes x_j = x_min + j*h, j = 1..n_points."""

    n_points: int
    x_min: float
    x_max: float

    def __post_init__(self):
        if self.n_points < 3:
            raise ValueError("grid needs at least 3 points")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / self.n_points

    @property
    def x(self) -> np.ndarray:
        # endpoint-exact node coordinates (x_j = x_min + j*h)
        return np.linspace(self.x_min + self.h, self.x_max, self.n_points)


@dataclass(frozen=True)
class DensityProfile:
    """Piecewise-constant electron density: rho_f on the open foil interval,
    zero elsewhere."""

    values: np.ndarray
    foil: tuple[float, float]
    rho_f: float

    @classmethod
    def step(cls, grid: Grid1D, lo: float, hi: float, rho_f: float) -> "DensityProfile":
        if rho_f < 0:
            raise ValueError("density must be nonnegative")
        if not hi > lo:
            raise ValueError("foil interval must have positive width")
        x = grid.x
        vals = np.where((x > lo) & (x < hi), float(rho_f), 0.0)
        return cls(values=vals, foil=(lo, hi), rho_f=float(rho_f))

    @classmethod
    def vacuum(cls, grid: Grid1D) -> "DensityProfile":
        return cls(values=np.zeros(grid.n_points), foil=(0.0, 0.0), rho_f=0.0)


@dataclass(frozen=True)
class OmegaMatrix:
    """Diagonal frequency matrix; diag entries are the per-node frequencies."""

    diag: np.ndarray
    single_frequency: bool

    @property
    def omega_tilde(self) -> float:
        """The single positive frequency (0 for a vacuum problem)."""
        return float(self.diag.max()) if self.diag.size else 0.0

    @property
    def n(self) -> int:
        return self.diag.size

    @classmethod
    def zero(cls, n: int) -> "OmegaMatrix":
        return cls(diag=np.zeros(n), single_frequency=True)


def build_omega(density: DensityProfile, coupling: float = 1.0) -> OmegaMatrix:
    """Per-node frequencies omega_j = coupling * sqrt(rho_j)."""
    diag = coupling * np.sqrt(density.values)
    distinct = np.unique(diag[diag > 0])
    return OmegaMatrix(diag=diag, single_frequency=distinct.size <= 1)


@dataclass(frozen=True)
class DiscreteOperators:
    """Discrete curls on the periodic staggered grid and derived quantities.

    ``lap`` is minus the curl product (-curl_b @ curl_e), the periodic
    second-difference matrix with row stencil (1, -2, 1)/h^2; ``curl_bound``
    is the frequency-independent bound 2/h on the curl operator norms.
    """

    curl_e: sp.csr_matrix
    curl_b: sp.csr_matrix
    lap: sp.csr_matrix
    omega: OmegaMatrix
    curl_bound: float

    @property
    def n(self) -> int:
        return self.curl_e.shape[0]

    def with_omega(self, omega: OmegaMatrix) -> "DiscreteOperators":
        if omega.n != self.n:
            raise ValueError("frequency diagonal does not match operator size")
        return replace(self, omega=omega)

    def oscillator_matrix(self) -> np.ndarray:
        """Dense symmetric matrix Omega^2 - lap governing the field equation."""
        a = -self.lap.toarray()
        a[np.diag_indices_from(a)] += self.omega.diag**2
        return a


def build_yee_operators(grid: Grid1D) -> DiscreteOperators:
    """Periodic 1-d staggered-difference curls (frequencies left at zero).

    curl_b (forward difference, negated) discretizes -d/dx acting on the
    flux, curl_e (backward difference) discretizes d/dx acting on the field,
    so the semi-discrete system reads
    dp/dt = e, de/dt = curl_b b - Omega^2 p, db/dt = -curl_e e.
    """
    n, h = grid.n_points, grid.h
    ones = np.ones(n)
    curl_e = sp.diags([ones / h, -ones / h, [-1.0 / h]], [0, -1, n - 1],
                      shape=(n, n)).tocsr()
    curl_b = sp.diags([ones / h, -ones / h, [-1.0 / h]], [0, 1, -(n - 1)],
                      shape=(n, n)).tocsr()
    lap = (-(curl_b @ curl_e)).tocsr()
    return DiscreteOperators(curl_e=curl_e, curl_b=curl_b, lap=lap,
                             omega=OmegaMatrix.zero(n), curl_bound=2.0 / h)


@dataclass(frozen=True)
class State:
    """Impulse, electric field and magnetic flux on the grid at time t."""

    p: np.ndarray
    e: np.ndarray
    b: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        if not (len(self.p) == len(self.e) == len(self.b)):
            raise ValueError("field vectors must have equal length")

    @property
    def n(self) -> int:
        return len(self.e)

    def norm(self) -> float:
        return math.sqrt(
            float(self.p @ self.p) + float(self.e @ self.e) + float(self.b @ self.b)
        )

    def copy(self) -> "State":
        return State(self.p.copy(), self.e.copy(), self.b.copy(), self.t)


@dataclass(frozen=True)
class PulseConfig:
    """Right-traveling modulated Gaussian pulse (wavelength 1 in scaled units)."""

    a0: float = 1.0
    xbar: float = 10.0
    sigma0: float = 10.0

    def __post_init__(self):
        if self.sigma0 <= 0:
            raise ValueError("pulse width must be positive")


def pulse_field(x: np.ndarray, pulse: PulseConfig, t: float = 0.0) -> np.ndarray:
    """Field amplitude of the traveling pulse at time t."""
    arg = 2.0 * math.pi * ((x - pulse.xbar) - t)
    return pulse.a0 * np.exp(-(arg**2) / (2.0 * pulse.sigma0**2)) * np.cos(arg)


def pulse_velocity(x: np.ndarray, pulse: PulseConfig) -> np.ndarray:
    """Time derivative of the pulse field at t = 0."""
    two_pi = 2.0 * math.pi
    xs = x - pulse.xbar
    env = np.exp(-(two_pi * xs) ** 2 / (2.0 * pulse.sigma0**2))
    return pulse.a0 * env * (
        (two_pi / pulse.sigma0) ** 2 * xs * np.cos(two_pi * xs)
        + two_pi * np.sin(two_pi * xs)
    )


def laser_pulse_initial(grid: Grid1D, pulse: PulseConfig) -> State:
    """Initial state: e = b = pulse profile, zero impulses."""
    e0 = pulse_field(grid.x, pulse)
    return State(p=np.zeros(grid.n_points), e=e0, b=e0.copy(), t=0.0)


@dataclass(frozen=True)
class KGProblem:
    """Second-order wave problem d^2e/dt^2 = lap e - Omega^2 e with pulse data.

    ``convention`` records how the foil frequency parameter enters: with
    "squared" the diagonal of Omega is the frequency omega itself (so the
    filters see tau*omega); with "linear" the diagonal is sqrt(omega) and
    the equation matches a restoring term linear in omega.
    """

    grid: Grid1D
    lap: sp.csr_matrix
    omega: OmegaMatrix
    e0: np.ndarray
    edot0: np.ndarray
    convention: str = "squared"

    def oscillator_matrix(self) -> np.ndarray:
        a = -self.lap.toarray()
        a[np.diag_indices_from(a)] += self.omega.diag**2
        return a


def smooth_cutoff(x: np.ndarray, start: float, end: float) -> np.ndarray:
    """Cosine taper: 1 for x <= start, 0 for x >= end, smooth in between."""
    if not end > start:
        raise ValueError("cutoff end must exceed start")
    ramp = np.clip((end - x) / (end - start), 0.0, 1.0)
    return np.where(ramp >= 1.0, 1.0,
                    np.where(ramp <= 0.0, 0.0, 0.5 - 0.5 * np.cos(math.pi * ramp)))


def build_kg_problem(
    grid: Grid1D,
    omega: float,
    foil: tuple[float, float] = (10.0, 11.0),
    convention: str = "squared",
    pulse: PulseConfig | None = None,
    cutoff: tuple[float, float] | None = None,
) -> KGProblem:
    """Assemble the foil wave problem on a periodic grid.

    The spatial operator is the periodic second-difference matrix
    (1, -2, 1)/h^2 including the wrap-around corner entries; the foil
    frequency acts on nodes strictly inside ``foil``; initial data is the
    traveling pulse (default: centered at 0 with width 10) and its exact
    velocity.  ``cutoff`` optionally tapers the data to zero ahead of the
    foil (smooth cosine ramp over [start, end]), which keeps the foil-
    weighted initial energy bounded when the pulse is launched close by.
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    if convention not in ("squared", "linear"):
        raise ValueError("convention must be 'squared' or 'linear'")
    lo, hi = foil
    if not (grid.x_min <= lo < hi <= grid.x_max):
        raise ValueError("foil interval must lie inside the grid")
    ops = build_yee_operators(grid)
    x = grid.x
    indicator = (x > lo) & (x < hi)
    freq = omega if convention == "squared" else math.sqrt(omega)
    om = OmegaMatrix(diag=np.where(indicator, freq, 0.0), single_frequency=True)
    if pulse is None:
        pulse = PulseConfig(a0=1.0, xbar=0.0, sigma0=10.0)
    e0 = pulse_field(x, pulse)
    edot0 = pulse_velocity(x, pulse)
    if cutoff is not None:
        taper = smooth_cutoff(x, cutoff[0], cutoff[1])
        e0 = e0 * taper
        edot0 = edot0 * taper
    return KGProblem(grid=grid, lap=ops.lap, omega=om, e0=e0, edot0=edot0,
                     convention=convention)


def hamiltonian(e: np.ndarray, f: np.ndarray, omega: OmegaMatrix,
                curl_e: sp.csr_matrix) -> float:
    """Conserved energy of the field equation:
    H = ||f||^2/2 + ||Omega e||^2/2 + ||curl_e e||^2/2."""
    oe = omega.diag * e
    ce = curl_e @ e
    return 0.5 * (float(f @ f) + float(oe @ oe) + float(ce @ ce))


@dataclass(frozen=True)
class CheckItem:
    name: str
    value: float
    threshold: float
    passed: bool


@dataclass(frozen=True)
class AssumptionReport:
    items: tuple[CheckItem, ...]
    h0_min: float

    @property
    def all_pass(self) -> bool:
        return all(it.passed for it in self.items)

    def __getitem__(self, name: str) -> CheckItem:
        for it in self.items:
            if it.name == name:
                return it
        raise KeyError(name)

    def lines(self) -> list[str]:
        out = [
            f"{'PASS' if it.passed else 'FAIL'}  {it.name}: value={it.value:.6g} "
            f"threshold={it.threshold:.6g}"
            for it in self.items
        ]
        out.append(f"smallest admissible H0: {self.h0_min:.6g}")
        return out


# Worst-case bound on the starter ratio over the shipped filter sets; enters
# the admissible-energy bound for the initial flux term.
_C4_DEFAULT = 2.0


def validate_assumptions(
    ops: DiscreteOperators,
    state0: State,
    sym_tol: float = 1e-8,
    psd_tol: float = 1e-10,
    c4: float = _C4_DEFAULT,
) -> AssumptionReport:
    """Check the structural requirements on the operators and initial data.

    Reports (never raises): symmetry defect of the curl product, negative
    semidefiniteness of it, positive semidefiniteness of Omega^2 - lap, the
    squared norms entering the initial-data energy bounds, and the smallest
    H0 for which all those bounds hold.
    """
    g = ops.lap.toarray()
    g_scale = float(np.linalg.norm(g)) or 1.0
    sym_defect = float(np.linalg.norm(g - g.T))

    neg_g = -0.5 * (g + g.T)
    eig_neg_g = float(np.linalg.eigvalsh(neg_g)[0])
    neg_g_scale = float(np.abs(neg_g).sum(axis=1).max()) or 1.0

    a = ops.oscillator_matrix()
    a = 0.5 * (a + a.T)
    eig_a = float(np.linalg.eigvalsh(a)[0])
    a_scale = float(np.abs(a).sum(axis=1).max()) or 1.0

    om2 = ops.omega.diag**2
    q = {
        "norm2_omega_e0": float(np.sum((ops.omega.diag * state0.e) ** 2)),
        "norm2_curlb_b0": float(np.sum((ops.curl_b @ state0.b) ** 2)),
        "norm2_omega2_p0": float(np.sum((om2 * state0.p) ** 2)),
        "norm2_curle_e0": float(np.sum((ops.curl_e @ state0.e) ** 2)),
        "norm2_e0": float(state0.e @ state0.e),
        "norm2_b0": float(state0.b @ state0.b),
        "norm2_omega2_curlb_b0": float(np.sum((om2 * (ops.curl_b @ state0.b)) ** 2)),
    }
    flux_factor = min(1.0, 4.0 / c4**2)
    h0_min = max(
        1.5 * q["norm2_omega_e0"],
        3.0 * q["norm2_curlb_b0"] / flux_factor,
        3.0 * q["norm2_omega2_p0"],
        0.5 * q["norm2_curle_e0"],
        q["norm2_e0"],
        q["norm2_b0"],
        q["norm2_omega2_curlb_b0"],
    )

    items = [
        CheckItem("curl_product_symmetry_defect", sym_defect, sym_tol * g_scale,
                  sym_defect <= sym_tol * g_scale),
        CheckItem("neg_curl_product_min_eig", eig_neg_g, -psd_tol * neg_g_scale,
                  eig_neg_g >= -psd_tol * neg_g_scale),
        CheckItem("oscillator_matrix_min_eig", eig_a, -psd_tol * a_scale,
                  eig_a >= -psd_tol * a_scale),
    ]
    for name, value in q.items():
        items.append(CheckItem(name, value, math.inf, bool(np.isfinite(value))))
    return AssumptionReport(items=tuple(items), h0_min=float(h0_min))
