"""Finite-dimensional and step-profile noncommutative Orlicz numerics.

Two representations carry operator data: :class:`HermitianOperator` for
matrices and :class:`~orlicz_kit.spaces.StepRearrangement` for the
singular-value profile ``t -> mu_t`` of an operator in a semifinite algebra.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence, Union

import numpy as np
from scipy.special import xlogy

from .spaces import (MeasureSpace, NormReport, OutsideSpaceError, StepRearrangement,
                     luxemburg_vw)
from .young import YoungFunction, catalog

HERMITIAN_TOL = 1e-12
CLAMP_TOL = 1e-12
TRACE_TOL = 1e-9
T_LADDER = (1e-3, 1e-2, 1e-1, 1.0)


class NotDensityMatrixError(ValueError):
    pass


class HermitianOperator:
    """Self-adjoint matrix with cached eigendata (eigenvalues descending)."""

    def __init__(self, matrix, tol: float = HERMITIAN_TOL):
        a = np.array(matrix, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("operator must be a square matrix")
        if a.size and np.max(np.abs(a - a.conj().T)) > tol * max(1.0, np.max(np.abs(a))):
            raise ValueError("matrix is not Hermitian")
        a = 0.5 * (a + a.conj().T)
        a.setflags(write=False)
        self._matrix = a

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dimension(self) -> int:
        return self._matrix.shape[0]

    @cached_property
    def _eigh(self):
        w, v = np.linalg.eigh(self._matrix)
        w, v = w[::-1].copy(), v[:, ::-1].copy()
        w.setflags(write=False)
        v.setflags(write=False)
        return w, v

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._eigh[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._eigh[1]

    def apply(self, g: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Matrix function ``g(A)`` through the eigendecomposition."""
        w, v = self._eigh
        return (v * g(w)) @ v.conj().T


Operand = Union[HermitianOperator, np.ndarray, Sequence]


def singular_values(b: Operand) -> np.ndarray:
    """Eigenvalues of ``|b|``, descending.

    Hermitian input uses ``|eigenvalues|``; a general square matrix goes
    through the Hermitian dilation ``[[0, b], [b*, 0]]`` whose spectrum is
    ``±`` the singular values.
    """
    if isinstance(b, HermitianOperator):
        return np.sort(np.abs(b.eigenvalues))[::-1]
    a = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("singular_values needs a square matrix")
    n = a.shape[0]
    if n == 0:
        return np.empty(0)
    if np.allclose(a, a.conj().T, rtol=0, atol=HERMITIAN_TOL):
        w = np.linalg.eigvalsh(0.5 * (a + a.conj().T))
        return np.sort(np.abs(w))[::-1]
    z = np.zeros_like(a)
    dil = np.block([[z, a], [a.conj().T, z]])
    w = np.linalg.eigvalsh(dil)
    return np.maximum(w[::-1][:n], 0.0)


def _sequence(a) -> np.ndarray:
    a = np.asarray(a, dtype=float).ravel()
    if np.any(a < 0) or np.any(np.diff(a) > 0):
        raise ValueError("singular sequence must be nonnegative and nonincreasing")
    return a


def sequence_orlicz_norm(a, phi: YoungFunction) -> NormReport:
    """``inf{eps > 0 : sum phi(a_n / eps) <= 1}`` over unit-weight cells."""
    a = _sequence(a)
    return luxemburg_vw(a, np.ones(a.size), phi)


def _density_spectrum(rho: Operand) -> np.ndarray:
    op = rho if isinstance(rho, HermitianOperator) else HermitianOperator(rho)
    w = np.array(op.eigenvalues, dtype=float)
    if w.size and w.min() < -CLAMP_TOL:
        raise NotDensityMatrixError(f"eigenvalue {w.min():.3g} below -{CLAMP_TOL:g}")
    w = np.maximum(w, 0.0)
    if abs(np.trace(op.matrix).real - 1.0) > TRACE_TOL:
        raise NotDensityMatrixError("trace differs from 1")
    return w


def _group_levels(w: np.ndarray, tol: float = 1e-13):
    """Merge numerically equal eigenvalues into ``(value, multiplicity)``
    so that degenerate spectra such as ``I/n`` sum exactly."""
    levels = []
    for x in np.sort(w)[::-1]:
        if levels and abs(levels[-1][0] - x) <= tol:
            levels[-1][1] += 1
            levels[-1][2] += x
        else:
            levels.append([x, 1, x])
    return [(s / m, m) for _, m, s in levels]


def von_neumann_entropy(rho: Operand) -> float:
    """``-Tr rho log rho`` from the clamped spectrum (``0 log 0 = 0``).

    Numerically equal eigenvalues are grouped and summed as
    ``multiplicity * x log x``; a single level (``rho = I/n``) gives
    ``log n`` exactly.
    """
    w = _density_spectrum(rho)
    levels = _group_levels(w)
    if len(levels) == 1:
        m = levels[0][1]
        return math.log(m)
    return float(-sum(m * xlogy(x, x) for x, m in levels)) + 0.0


def regularized_entropy(rho: Operand, eps: float) -> float:
    """``-Tr rho log(rho + eps)``; finite for every ``eps > 0``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    w = _density_spectrum(rho)
    return float(-np.sum(xlogy(w, w + eps))) + 0.0


# ------------------------------------------------------- step/spectral data

def _as_steps(f) -> StepRearrangement:
    if isinstance(f, StepRearrangement):
        return f
    op = f if isinstance(f, HermitianOperator) else HermitianOperator(f)
    w = op.eigenvalues
    if w.size and w.min() < -CLAMP_TOL:
        raise ValueError("operator must be positive semidefinite")
    w = np.maximum(w, 0.0)
    vals, counts = np.unique(w, return_counts=True)
    return StepRearrangement(vals[::-1], counts[::-1].astype(float))


@dataclass
class LlogLMembership:
    llogl_modular: float
    unit_mass: float
    entropy_integral: float
    interval: tuple
    interval_mass: float

    @property
    def forward_hypotheses(self) -> bool:
        return math.isfinite(self.llogl_modular) and math.isfinite(self.unit_mass)

    @property
    def entropy_exists(self) -> bool:
        return math.isfinite(self.entropy_integral)

    @property
    def forward_ok(self) -> bool:
        """Forward implication: finite modular and finite ``tau(chi_[0,1])``
        give a finite entropy integral."""
        return (not self.forward_hypotheses) or self.entropy_exists

    @property
    def converse_hypotheses(self) -> bool:
        return self.entropy_exists and math.isfinite(self.llogl_modular)

    @property
    def converse_ok(self) -> bool:
        """Converse: finite entropy integral and modular give finite measure
        of the spectral set of the chosen open subinterval."""
        return (not self.converse_hypotheses) or math.isfinite(self.interval_mass)

    def to_dict(self) -> dict:
        def num(x):
            return x if math.isfinite(x) else "inf"
        return {"llogl_modular": num(self.llogl_modular), "unit_mass": num(self.unit_mass),
                "entropy_integral": num(self.entropy_integral),
                "interval": list(self.interval), "interval_mass": num(self.interval_mass),
                "forward_hypotheses": self.forward_hypotheses, "forward_ok": self.forward_ok,
                "converse_hypotheses": self.converse_hypotheses, "converse_ok": self.converse_ok}


def _mass_where(steps: StepRearrangement, mask: np.ndarray) -> float:
    if not np.any(mask):
        return 0.0
    return float(np.sum(steps.lengths[mask]))


def llogl_membership(f, interval=(0.25, 0.75)) -> LlogLMembership:
    """Spectral trace criteria for ``L log L`` membership.

    Reports the ``t log+ t`` modular, ``tau(chi_[0,1])`` (infinite when an
    infinite zero tail is present), ``tau(|f log f|)`` and the measure where
    the profile lies in the open ``interval``.
    """
    s = _as_steps(f)
    v, ln = s.values, s.lengths
    lo, hi = interval
    if not 0.0 <= lo < hi <= 1.0:
        raise ValueError("interval must be an open subinterval of [0, 1]")
    fin = np.isfinite(ln)
    llogl = float(np.sum(np.where(v[fin] > 1.0, xlogy(v[fin], v[fin]), 0.0) * ln[fin]))
    ent = float(np.sum(np.abs(xlogy(v[fin], v[fin])) * ln[fin]))
    return LlogLMembership(
        llogl_modular=llogl,
        unit_mass=_mass_where(s, v <= 1.0),
        entropy_integral=ent if ent <= 1e300 else math.inf,
        interval=(float(lo), float(hi)),
        interval_mass=_mass_where(s, (v > lo) & (v < hi)),
    )


def partial_entropy_sums(s: StepRearrangement) -> np.ndarray:
    """Cumulative ``sum |v log v| * length`` over the steps."""
    return np.cumsum(np.abs(xlogy(s.values, s.values)) * s.lengths)


@dataclass
class InclusionReport:
    K: float
    l1: float
    llog1: float
    per_term_ok: bool
    worst_slack: float

    @property
    def passed(self) -> bool:
        return self.per_term_ok and math.isfinite(self.llog1)

    def to_dict(self) -> dict:
        return {"K": self.K, "l1": self.l1, "llog1": self.llog1,
                "per_term_ok": self.per_term_ok, "worst_slack": self.worst_slack,
                "passed": self.passed}


def l1_subset_llog1_check(a) -> InclusionReport:
    """Per-term ``a_i log(a_i + 1) <= K a_i`` with ``K = log(a_1 + 1)``."""
    a = _sequence(a)
    if a.size == 0:
        return InclusionReport(0.0, 0.0, 0.0, True, 0.0)
    logs = np.log1p(a)
    K = float(logs[0])
    terms = a * logs
    rhs = K * a
    slack = rhs - terms
    ok = bool(np.all(terms <= rhs))
    return InclusionReport(K, float(np.sum(a)), float(np.sum(terms)), ok,
                           float(np.min(slack)) if slack.size else 0.0)


# ---------------------------------------------------------- weighted spaces

@dataclass(frozen=True)
class WeightedSpace:
    """Measure ``mu_t(x) dt`` from a step weight, paired with ``psi``."""

    weight: StepRearrangement
    psi: YoungFunction

    def __post_init__(self):
        if not math.isfinite(float(np.sum(self.weight.finite_part().lengths
                                          * self.weight.finite_part().values))):
            raise ValueError("weight must have finite total mass")


def common_refinement(g: StepRearrangement, x: StepRearrangement):
    """Pieces of the joint partition of ``g`` and ``x`` as
    ``(g value, x value, length)`` arrays, including where ``g`` is 0."""
    xf = x.finite_part()
    pts = np.union1d(g.finite_part().breakpoints, xf.breakpoints)
    pts = pts[pts <= xf.total_length]
    left, right = pts[:-1], pts[1:]
    gv = g(left)
    xv = xf(left)
    return gv, xv, right - left


def weighted_luxemburg_norm(g: StepRearrangement, space: WeightedSpace) -> NormReport:
    """Luxemburg norm of ``g`` for the measure ``mu_t(x) dt``."""
    gv, xv, ln = common_refinement(g, space.weight)
    w = xv * ln
    keep = w > 0
    return luxemburg_vw(gv[keep], w[keep], space.psi)


def moment_transform(g: StepRearrangement, x: StepRearrangement, t: float) -> float:
    """``int exp(t mu_s(g)) mu_s(x) ds`` as an exact piecewise sum."""
    gv, xv, ln = common_refinement(g, x)
    w = xv * ln
    keep = w > 0
    with np.errstate(over="ignore"):
        terms = np.exp(t * gv[keep]) * w[keep]
    total = float(np.sum(terms))
    return math.inf if total > 1e300 else total


def _converged(seq: Sequence[float], rtol: float) -> bool:
    if not seq or not all(math.isfinite(v) for v in seq):
        return False
    if len(seq) == 1:
        return True
    a, b = seq[-2], seq[-1]
    return abs(b - a) <= rtol * max(abs(b), 1e-300)


@dataclass
class RegularityReport:
    transforms: dict
    finite_at: list
    regular: bool
    cosh_norms: list
    cosh_member: bool

    @property
    def agree(self) -> bool:
        return self.regular == self.cosh_member

    def to_dict(self) -> dict:
        def num(x):
            return x if math.isfinite(x) else "inf"
        return {"transforms": {k: [num(v) for v in vals] for k, vals in self.transforms.items()},
                "finite_at": self.finite_at, "regular": self.regular,
                "cosh_norms": [num(v) for v in self.cosh_norms],
                "cosh_member": self.cosh_member, "agree": self.agree}


def regularity_probe(g, x: StepRearrangement, t_ladder: Sequence[float] = T_LADDER,
                     rtol: float = 1e-4) -> RegularityReport:
    """Probe whether the moment transform is finite near 0.

    ``g`` is one step profile or a sequence of successively finer
    truncations. At each ``t`` the transform counts as finite when its
    values along the sweep are finite and the last two agree to ``rtol``;
    ``g`` is declared regular when this holds at some pair ``±t``. The
    weighted ``cosh-1`` Luxemburg norm is swept the same way as a
    cross-check.
    """
    sweep = [g] if isinstance(g, StepRearrangement) else list(g)
    transforms = {}
    finite_at = []
    for t in t_ladder:
        plus = [moment_transform(s, x, t) for s in sweep]
        minus = [moment_transform(s, x, -t) for s in sweep]
        transforms[f"{t:g}"] = plus
        transforms[f"{-t:g}"] = minus
        if _converged(plus, rtol) and _converged(minus, rtol):
            finite_at.append(float(t))
    space = WeightedSpace(x, catalog("cosh-1"))
    norms = []
    for s in sweep:
        try:
            norms.append(weighted_luxemburg_norm(s, space).norm)
        except OutsideSpaceError:
            norms.append(math.inf)
    return RegularityReport(transforms, finite_at, bool(finite_at), norms,
                            _converged(norms, rtol))


def trace_function(f: Operand, g: Callable[[np.ndarray], np.ndarray]) -> float:
    """``Tr g(f)`` for Hermitian ``f`` via the matrix function."""
    op = f if isinstance(f, HermitianOperator) else HermitianOperator(f)
    return float(np.trace(op.apply(g)).real)


def unit_weight_space(n: int) -> MeasureSpace:
    return MeasureSpace.counting(n)
