"""Filter functions for trigonometric integrators and their admissibility checks.

Scalar primitives (sinc, cosc, eta), the named filter sets used by the
splitting scheme, the two-step filter families (A)-(I), and a numerical
verifier that estimates the constants in the admissibility inequalities
by scanning quotients over a refinable z-grid.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "sinc",
    "cosc",
    "eta",
    "FilterSet",
    "FilterPoleError",
    "filter_set",
    "FILTER_SET_NAMES",
    "chi",
    "eval_on_omega",
    "TwoStepFilterPair",
    "two_step_family",
    "TWO_STEP_FAMILY_LABELS",
    "ConditionResult",
    "ConditionReport",
    "verify_conditions",
    "CONDITION_IDS",
]


def sinc(z):
    """sin(z)/z with the removable singularity at z=0 (value 1)."""
    return np.sinc(np.asarray(z) / np.pi)


def cosc(z):
    """(1 - cos z)/z**2, value 1/2 at z=0.

    Evaluated through the identity cosc(z) = sinc(z/2)**2 / 2, which is
    stable for all z (no cancellation near 0) and makes |cosc| <= 1/2
    structural.
    """
    s = sinc(np.asarray(z) * 0.5)
    return 0.5 * s * s


def eta(z):
    """(1 + cos z)/2, evaluated as cos(z/2)**2 (nonnegative by construction)."""
    c = np.cos(np.asarray(z) * 0.5)
    return c * c


def _one(z):
    return np.ones_like(np.asarray(z, dtype=float))


class FilterPoleError(ValueError):
    """The starter ratio chi was requested at (or too close to) a genuine pole."""

    def __init__(self, z_values):
        self.z_values = np.atleast_1d(z_values)
        super().__init__(
            "starter ratio has a pole near z = "
            + ", ".join(f"{z:.6g}" for z in self.z_values[:5])
        )


@dataclass(frozen=True)
class FilterSet:
    """The four scalar filters of the splitting scheme.

    Each function must be even with value 1 at 0.  ``chi_fn`` optionally
    carries a closed form of the starter ratio
    chi(z) = (1 + cos z)/2 * psi_e(z/2) / sinc(z); when absent the generic
    quotient is used with pole detection.
    """

    name: str
    psi_e: Callable
    phi_e: Callable
    psi_b: Callable
    phi_b: Callable
    chi_fn: Callable | None = None
    unit_b_filters: bool = True


def _sinc_sq(z):
    s = sinc(z)
    return s * s


def _sinc_2z(z):
    return sinc(2.0 * np.asarray(z))


def _chi_orig(z):
    return np.cos(np.asarray(z) * 0.5)


_CATALOG: dict[str, FilterSet] = {
    "none": FilterSet("none", _one, _one, _one, _one, chi_fn=None),
    "orig": FilterSet("orig", sinc, sinc, _one, _one, chi_fn=_chi_orig),
    "new": FilterSet("new", _sinc_sq, sinc, _one, _one, chi_fn=sinc),
    "sinc2z": FilterSet("sinc2z", _sinc_sq, _sinc_2z, _one, _one, chi_fn=sinc),
}

FILTER_SET_NAMES = tuple(_CATALOG)


def filter_set(name: str) -> FilterSet:
    """Look up a named filter set (none, orig, new, sinc2z)."""
    try:
        return _CATALOG[name]
    except KeyError:
        raise ValueError(f"unknown filter set {name!r}; choose from {FILTER_SET_NAMES}") from None


# Quotients whose denominator falls below this have their boundedness checked
# instead of being evaluated blindly.
_CHI_DEN_GUARD = 1e-3
_CHI_POLE_CAP = 1e3


def chi(fs: FilterSet, z):
    """Starter ratio chi(z) = (1+cos z)/2 * psi_e(z/2) / sinc(z).

    Used to perturb the initial field velocity so that the two-step
    recursion reproduces the splitting scheme's field iterates.  Raises
    :class:`FilterPoleError` where sinc(z) nearly vanishes and the
    numerator does not vanish along with it.
    """
    if fs.chi_fn is not None:
        return fs.chi_fn(z)
    z = np.asarray(z, dtype=float)
    num = eta(z) * fs.psi_e(0.5 * z)
    den = sinc(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = num / den
    near = np.abs(den) < _CHI_DEN_GUARD
    bad = near & (~np.isfinite(q) | (np.abs(q) > _CHI_POLE_CAP))
    if np.any(bad):
        raise FilterPoleError(z[bad] if z.ndim else z)
    return q


def eval_on_omega(f: Callable, tau: float, omega) -> np.ndarray:
    """Evaluate a scalar filter on the diagonal frequency matrix.

    Returns the diagonal of f(tau * Omega) as a 1-d array; ``omega`` may be
    the diagonal array itself or any object exposing it as ``.diag``.
    """
    diag = getattr(omega, "diag", omega)
    return np.asarray(f(tau * np.asarray(diag, dtype=float)))


@dataclass(frozen=True)
class TwoStepFilterPair:
    """(psi, phi) pair for the generic filtered two-step method."""

    label: str
    psi: Callable
    phi: Callable


def _sinc_half(z):
    return sinc(0.5 * np.asarray(z))


def _sinc_half_sq(z):
    s = _sinc_half(z)
    return s * s


def _phi_corrected(z):
    # sinc(z) * (1 + sin(z/2)^2 / 3)
    z = np.asarray(z)
    s = np.sin(0.5 * z)
    return sinc(z) * (1.0 + s * s / 3.0)


# Families F and G are the two-step forms of the splitting scheme's filter
# choices; there the inner filter acts at half argument and picks up the
# eta(z) = (1+cos z)/2 weight, so e.g. psi_F(z) = eta(z)*sinc(z/2)^2, which
# collapses to sinc(z)^2.
_FAMILIES: dict[str, TwoStepFilterPair] = {
    "A": TwoStepFilterPair("A", _sinc_half_sq, _one),
    "B": TwoStepFilterPair("B", sinc, _one),
    "C": TwoStepFilterPair("C", lambda z: _sinc_half(z) * sinc(z), sinc),
    "D": TwoStepFilterPair("D", _sinc_half_sq, _phi_corrected),
    "E": TwoStepFilterPair("E", _sinc_sq, _one),
    "F": TwoStepFilterPair("F", lambda z: eta(z) * _sinc_half_sq(z), _sinc_half),
    "G": TwoStepFilterPair("G", lambda z: eta(z) * _sinc_half(z), _sinc_half),
    "H": TwoStepFilterPair("H", _sinc_half, sinc),
    "I": TwoStepFilterPair("I", sinc, _sinc_half),
}

TWO_STEP_FAMILY_LABELS = tuple(_FAMILIES)


def two_step_family(label: str) -> TwoStepFilterPair:
    """Look up one of the two-step filter families A..I."""
    try:
        return _FAMILIES[label]
    except KeyError:
        raise ValueError(
            f"unknown family {label!r}; choose from {TWO_STEP_FAMILY_LABELS}"
        ) from None


# --------------------------------------------------------------------------
# Admissibility condition verifier
# --------------------------------------------------------------------------

# Numerator differences smaller than this fraction of the largest term are
# indistinguishable from roundoff and count as exact zero.
_NOISE_REL = 1e-13


@dataclass(frozen=True)
class _Condition:
    cid: str
    constant: str
    # terms(fs, z) -> tuple of arrays; combined as product (len 1) or |a - b|
    terms: Callable
    den: Callable
    zero_period: float | None  # spacing of denominator zeros (pi or 2*pi)


def _half(fs_fun, z):
    return fs_fun(0.5 * z)


_CONDITIONS: list[_Condition] = [
    _Condition("13a", "C1", lambda fs, z: (2.0 * eta(z) * _half(fs.psi_e, z),),
               lambda z: _sinc_half_sq(z), 2.0 * math.pi),
    _Condition("13b", "C2", lambda fs, z: (_half(fs.phi_e, z),),
               lambda z: np.abs(_sinc_half(z)), 2.0 * math.pi),
    _Condition("13c", "C3", lambda fs, z: (2.0 * eta(z) * _half(fs.psi_e, z) * _half(fs.phi_e, z),),
               lambda z: np.abs(sinc(z)), math.pi),
    _Condition("13d", "C4", lambda fs, z: (2.0 * eta(z) * _half(fs.psi_e, z),),
               lambda z: np.abs(sinc(z)), math.pi),
    _Condition("13e", "C5", lambda fs, z: (sinc(z), eta(z) * _half(fs.psi_e, z)),
               lambda z: z * z * np.abs(sinc(z)), math.pi),
    _Condition("13f", "C6", lambda fs, z: (sinc(z), _half(fs.phi_e, z)),
               lambda z: np.abs(z * np.sin(0.5 * z)), 2.0 * math.pi),
    _Condition("13g", "C7", lambda fs, z: (fs.psi_e(z),),
               lambda z: np.ones_like(z), None),
    _Condition("13h", "C8", lambda fs, z: (_sinc_half_sq(z), sinc(z) * _half(fs.phi_e, z)),
               lambda z: np.sin(0.5 * z) ** 2, 2.0 * math.pi),
    # weakened variant of 13a (single sinc power on the right hand side)
    _Condition("13a-weak", "C0", lambda fs, z: (2.0 * eta(z) * _half(fs.psi_e, z),),
               lambda z: np.abs(_sinc_half(z)), 2.0 * math.pi),
    _Condition("33a", "C9", lambda fs, z: (np.ones_like(z), _half(fs.phi_e, z)),
               lambda z: np.abs(z), None),
    _Condition("33b", "C10", lambda fs, z: (_sinc_half_sq(z), eta(z) * _half(fs.psi_e, z)),
               lambda z: np.abs(np.sin(0.5 * z)), 2.0 * math.pi),
    _Condition("33c", "C11", lambda fs, z: (sinc(z), _half(fs.phi_e, z)),
               lambda z: np.abs(z * np.sin(0.5 * z)), 2.0 * math.pi),
    _Condition("33d", "C12", lambda fs, z: (_sinc_sq(z), eta(z) * _half(fs.psi_e, z)),
               lambda z: np.abs(np.sin(z) * np.sin(0.5 * z)), math.pi),
    _Condition("33e", "C13", lambda fs, z: (_sinc_sq(z), eta(z) * _half(fs.psi_e, z) * np.cos(z)),
               lambda z: np.abs(np.sin(z) * np.sin(0.5 * z)), math.pi),
]

CONDITION_IDS = tuple(c.cid for c in _CONDITIONS)


@dataclass
class ConditionResult:
    condition: str
    constant: str
    sup: float
    argmax_z: float
    divergent: bool
    # denominator zeros whose neighborhoods pushed the quotient past the cap
    divergence_zeros: tuple[float, ...] = ()

    @property
    def verdict(self) -> str:
        return "divergent" if self.divergent else "finite"


@dataclass
class ConditionReport:
    filter_name: str
    z_max: float
    cap: float
    results: dict[str, ConditionResult]

    def __getitem__(self, cid: str) -> ConditionResult:
        return self.results[cid]

    @property
    def constants(self) -> dict[str, float]:
        return {r.constant: r.sup for r in self.results.values() if not r.divergent}

    def all_finite(self, ids: Sequence[str]) -> bool:
        return all(not self.results[i].divergent for i in ids)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["condition", "sup", "argmax_z", "verdict"])
            for r in self.results.values():
                w.writerow([r.condition, repr(r.sup), repr(r.argmax_z), r.verdict])


def _quotient(cond: _Condition, fs: FilterSet, z: np.ndarray) -> np.ndarray:
    terms = cond.terms(fs, z)
    if len(terms) == 1:
        num = np.abs(terms[0])
    else:
        a, b = terms
        num = np.abs(a - b)
        floor = _NOISE_REL * np.maximum(np.abs(a), np.abs(b))
        num = np.where(num <= floor, 0.0, num)
    den = cond.den(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(num == 0.0, 0.0, num / den)
    return np.where(np.isfinite(q), q, np.inf)


def _sup_on(cond: _Condition, fs: FilterSet, z: np.ndarray):
    q = _quotient(cond, fs, z)
    i = int(np.argmax(q))
    return float(q[i]), float(z[i])


def verify_conditions(
    fs: FilterSet,
    z_max: float = 16.0 * math.pi,
    n_base: int = 200_000,
    cap: float = 1e6,
    extra_z: Sequence[float] | None = None,
) -> ConditionReport:
    """Estimate the admissibility constants of a filter set by grid scan.

    Each condition is an inequality |LHS(z)| <= C * RHS(z); the estimated
    constant is the supremum of the quotient over a grid on (0, z_max],
    sharpened by two local refinement rounds (factor 100 each) around the
    zeros of the denominator.  A condition is flagged divergent when the
    supremum exceeds ``cap`` while refining; otherwise the supremum is the
    estimated constant.

    ``extra_z`` adds spot-check points (e.g. the actual tau*omega values of
    a planned run) to the base grid.
    """
    if z_max <= 0:
        raise ValueError("z_max must be positive")
    base = np.linspace(0.0, z_max, n_base + 1)[1:]
    if extra_z is not None:
        pts = np.asarray(list(extra_z), dtype=float)
        base = np.sort(np.concatenate([base, pts[(pts > 0) & (pts <= z_max)]]))
    spacing0 = z_max / n_base

    results: dict[str, ConditionResult] = {}
    for cond in _CONDITIONS:
        sup, arg = _sup_on(cond, fs, base)
        exceed_zeros: set[float] = set()
        if cond.zero_period is not None:
            zeros = np.arange(cond.zero_period, z_max + 0.5 * cond.zero_period,
                              cond.zero_period)
            if sup > cap:
                exceed_zeros.add(float(zeros[np.argmin(np.abs(zeros - arg))]))
            width = 2.0 * spacing0
            for _round in range(2):
                for z0 in zeros:
                    local = z0 + np.linspace(-width, width, 401)
                    local = local[(local > 0.0) & (local <= z_max) & (local != z0)]
                    if local.size == 0:
                        continue
                    s, a = _sup_on(cond, fs, local)
                    if s > sup:
                        sup, arg = s, a
                    if s > cap:
                        exceed_zeros.add(float(z0))
                width /= 100.0
        results[cond.cid] = ConditionResult(
            condition=cond.cid,
            constant=cond.constant,
            sup=sup,
            argmax_z=arg,
            divergent=bool(sup > cap),
            divergence_zeros=tuple(sorted(exceed_zeros)),
        )
    return ConditionReport(filter_name=fs.name, z_max=z_max, cap=cap, results=results)
