"""Discretized measure spaces, rearrangements, modulars and Orlicz norms.

Infinite measure spaces are handled through finite truncations, so any
membership verdict here holds "at this truncation".
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from . import kernels
from .numerics import golden_section_min
from .young import YoungFunction, catalog, complementary

BIG = kernels.BIG
NORM_RTOL = 1e-10
BRACKET_CAP = 1e30
HOLDER_SLACK = 1e-9


class OutsideSpaceError(ArithmeticError):
    """The modular stays above 1 (or infinite) on the whole scale range."""


class SpaceMismatchError(ValueError):
    """Two densities live on different measure spaces."""


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class MeasureSpace:
    """Finitely many cells with positive weights."""

    labels: tuple
    weights: np.ndarray

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        w = _frozen(self.weights)
        if w.ndim != 1 or w.size != len(labels):
            raise ValueError("need one weight per label")
        if np.any(~np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("weights must be positive and finite")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be unique")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, n: int, total: float = 1.0) -> "MeasureSpace":
        return cls(tuple(f"c{i}" for i in range(n)), np.full(n, total / n))

    @classmethod
    def counting(cls, n: int) -> "MeasureSpace":
        return cls(tuple(f"c{i}" for i in range(n)), np.ones(n))

    @classmethod
    def from_weights(cls, weights: Sequence[float]) -> "MeasureSpace":
        return cls(tuple(f"c{i}" for i in range(len(weights))), np.asarray(weights, dtype=float))

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    def __len__(self):
        return len(self.labels)

    def __eq__(self, other):
        if not isinstance(other, MeasureSpace):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.labels, self.weights.tobytes()))


@dataclass(frozen=True)
class SampledDensity:
    """A function on a :class:`MeasureSpace`, one finite value per cell."""

    space: MeasureSpace
    values: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values)
        if v.shape != (len(self.space),):
            raise ValueError("need one value per cell")
        if np.any(~np.isfinite(v)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "values", v)

    @classmethod
    def on_weights(cls, values, weights) -> "SampledDensity":
        return cls(MeasureSpace.from_weights(weights), np.asarray(values, dtype=float))

    @property
    def weights(self) -> np.ndarray:
        return self.space.weights

    def scaled(self, c: float) -> "SampledDensity":
        return SampledDensity(self.space, c * self.values)

    def with_values(self, values) -> "SampledDensity":
        return SampledDensity(self.space, np.asarray(values, dtype=float))

    def integral(self) -> float:
        return float(np.sum(self.values * self.weights))


@dataclass(frozen=True)
class StepRearrangement:
    """Decreasing right-continuous step function ``t -> mu_t`` on ``[0, L)``.

    ``values`` strictly decrease and are nonnegative; ``lengths`` are
    positive. A final step of value 0 may have infinite length (the
    infinite-tail marker).
    """

    values: np.ndarray
    lengths: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values)
        ln = _frozen(self.lengths)
        if v.ndim != 1 or v.shape != ln.shape:
            raise ValueError("values and lengths must be 1-d and equally long")
        if np.any(~np.isfinite(v)) or np.any(v < 0):
            raise ValueError("step values must be finite and nonnegative")
        if np.any(np.diff(v) >= 0):
            raise ValueError("step values must be strictly decreasing")
        if np.any(np.isnan(ln)) or np.any(ln <= 0):
            raise ValueError("step lengths must be positive")
        if np.any(np.isinf(ln[:-1])) or (ln.size and np.isinf(ln[-1]) and v[-1] != 0):
            raise ValueError("only a final zero-valued step may have infinite length")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "lengths", ln)

    @classmethod
    def from_pairs(cls, pairs) -> "StepRearrangement":
        pairs = list(pairs)
        return cls(np.array([p[0] for p in pairs], dtype=float),
                   np.array([p[1] for p in pairs], dtype=float))

    @property
    def infinite_tail(self) -> bool:
        return bool(self.lengths.size and np.isinf(self.lengths[-1]))

    @property
    def total_length(self) -> float:
        return float(np.sum(self.lengths))

    @property
    def breakpoints(self) -> np.ndarray:
        return np.concatenate([[0.0], np.cumsum(self.lengths)])

    def pairs(self) -> list:
        return [(float(v), float(ln)) for v, ln in zip(self.values, self.lengths)]

    def __call__(self, t):
        """Evaluate ``mu_t``; zero beyond the last step."""
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.breakpoints[1:], t, side="right")
        padded = np.concatenate([self.values, [0.0]])
        return padded[np.minimum(idx, self.values.size)]

    def finite_part(self) -> "StepRearrangement":
        if not self.infinite_tail:
            return self
        return StepRearrangement(self.values[:-1], self.lengths[:-1])


Data = Union[SampledDensity, StepRearrangement]


@dataclass
class NormReport:
    norm: float
    modular: float
    iterations: int
    bracket: tuple
    kind: str = "luxemburg"
    psi: str = ""
    at_cap: bool = False

    def to_dict(self) -> dict:
        return {"kind": self.kind, "psi": self.psi, "norm": self.norm,
                "modular": self.modular, "iterations": self.iterations,
                "bracket": list(self.bracket), "at_cap": self.at_cap}


# --------------------------------------------------------------- rearrange

def rearrange(f: SampledDensity) -> StepRearrangement:
    """Decreasing rearrangement of ``|f|``: cells sorted by ``|value|``
    (stable in label order), equal values merged into one step. Cells with
    ``f = 0`` form a trailing zero step."""
    a = np.abs(f.values)
    order = np.argsort(-a, kind="stable")
    a = a[order]
    w = f.weights[order]
    if a.size == 0:
        return StepRearrangement(np.empty(0), np.empty(0))
    starts = np.concatenate([[True], a[1:] != a[:-1]])
    idx = np.nonzero(starts)[0]
    return StepRearrangement(a[idx], np.add.reduceat(w, idx))


def _vw(f: Data):
    if isinstance(f, SampledDensity):
        return np.abs(f.values), f.weights
    if isinstance(f, StepRearrangement):
        g = f.finite_part()
        return g.values, g.lengths
    if isinstance(f, tuple) and len(f) == 2:
        return np.abs(np.asarray(f[0], dtype=float)), np.asarray(f[1], dtype=float)
    raise TypeError(f"expected SampledDensity or StepRearrangement, got {type(f).__name__}")


def _plain_kernel(psi: YoungFunction):
    k = psi.kernel
    return k if k is not None and not k.inverse else None


def _modular_vw(v: np.ndarray, w: np.ndarray, psi: YoungFunction, scale: float = 1.0) -> float:
    k = _plain_kernel(psi)
    if k is not None:
        return float(kernels.modular_sum(k.kind, k.p, v, w, scale))
    vals = psi.values(scale * v)
    with np.errstate(invalid="ignore"):
        terms = np.where((vals == 0) | (w == 0), 0.0, vals * w)
    total = float(np.sum(terms))
    return math.inf if total > BIG else total


def modular(f: Data, psi: YoungFunction) -> float:
    """``sum Psi(|f|) * weight`` over cells or steps; ``inf`` propagates and
    ``Psi(0) * inf = 0`` for an infinite zero tail."""
    v, w = _vw(f)
    return _modular_vw(v, w, psi)


# -------------------------------------------------------------------- norms

def _bracket(m: Callable[[float], float], start: float, cap: float):
    hi = start
    steps = 0
    while not m(hi) <= 1.0:
        hi *= 10.0
        steps += 1
        if hi > cap:
            raise OutsideSpaceError(f"modular stays above 1 up to {cap:g} times max|f|")
    lo = hi / 10.0 if steps else hi
    if not steps:
        while m(lo) <= 1.0:
            lo /= 10.0
            steps += 1
            if lo < 1.0 / cap:
                return 0.0, lo, steps
    return lo, hi, steps


def luxemburg_vw(v: np.ndarray, w: np.ndarray, psi: YoungFunction,
                 rtol: float = NORM_RTOL, cap: float = BRACKET_CAP) -> NormReport:
    v = np.abs(np.asarray(v, dtype=float))
    w = np.asarray(w, dtype=float)
    keep = (v > 0) & (w > 0)
    v, w = np.ascontiguousarray(v[keep]), np.ascontiguousarray(w[keep])
    if v.size == 0:
        return NormReport(0.0, 0.0, 0, (0.0, 0.0), psi=psi.name)
    # work with f / max|f| so the search is scale free and 1/lam cannot overflow
    top = float(v.max())
    v = v / top

    def m(lam):
        return _modular_vw(v, w, psi, 1.0 / lam)

    lo, hi, steps = _bracket(m, 1.0, cap)
    bracket = (lo * top, hi * top)
    if lo == 0.0:
        return NormReport(hi * top, m(hi), steps, bracket, psi=psi.name)
    k = _plain_kernel(psi)
    if k is not None:
        lam, m_hi, it = kernels.luxemburg_bisect(k.kind, k.p, v, w, lo, hi, rtol, 400)
    else:
        it = 0
        m_hi = m(hi)
        while hi - lo > rtol * hi and it < 400:
            mid = 0.5 * (lo + hi)
            val = m(mid)
            if val <= 1.0:
                hi, m_hi = mid, val
            else:
                lo = mid
            it += 1
        lam = hi
    return NormReport(float(lam) * top, float(m_hi), steps + int(it), bracket, psi=psi.name)


def luxemburg_norm(f: Data, psi: YoungFunction, rtol: float = NORM_RTOL,
                   cap: float = BRACKET_CAP) -> NormReport:
    """Luxemburg norm ``inf{lam > 0 : modular(f/lam) <= 1}``.

    Brackets geometrically by factors of 10 from ``max|f|`` and then bisects
    to relative width ``rtol``; the reported norm is the upper end, so the
    reported modular is at most 1.

    Raises
    ------
    OutsideSpaceError
        If the modular exceeds 1 at every scale up to ``cap * max|f|``.
    """
    v, w = _vw(f)
    return luxemburg_vw(v, w, psi, rtol, cap)


def amemiya_norm(f: Data, psi: YoungFunction, rtol: float = 1e-8,
                 cap: float = BRACKET_CAP, kappa_range=(1e-2, 1e10)) -> NormReport:
    """Orlicz norm in Amemiya form ``inf_k (1 + modular(k f)) / k``.

    ``k`` is searched as ``kappa / L`` with ``L`` the Luxemburg norm and
    ``kappa`` in ``kappa_range``: a log-grid scan followed by a golden-section
    refinement in ``log kappa``. When the infimum is approached only as
    ``k -> inf`` (e.g. ``Psi(t) = t``) the value at the upper end of the
    range is returned and ``at_cap`` is set.
    """
    v, w = _vw(f)
    v = np.abs(np.asarray(v, dtype=float))
    keep = (v > 0) & (w > 0)
    v, w = np.ascontiguousarray(v[keep]), np.ascontiguousarray(w[keep])
    if v.size == 0:
        return NormReport(0.0, 0.0, 0, (0.0, 0.0), kind="amemiya", psi=psi.name)
    top = float(v.max())
    v = v / top
    L = luxemburg_vw(v, w, psi, NORM_RTOL, cap).norm

    def g(logk):
        k = math.exp(logk) / L
        return (1.0 + _modular_vw(v, w, psi, k)) / k

    lo, hi = math.log(kappa_range[0]), math.log(kappa_range[1])
    grid = np.linspace(lo, hi, 241)
    vals = np.array([g(x) for x in grid])
    i = int(np.argmin(vals))
    at_cap = i == grid.size - 1
    if at_cap:
        x, best = grid[i], vals[i]
        it = grid.size
    else:
        a = grid[max(i - 1, 0)]
        b = grid[min(i + 1, grid.size - 1)]
        x, best = golden_section_min(g, a, b, tol=rtol)
        best = min(best, vals[i])
        it = grid.size + int(math.ceil(math.log(rtol) / math.log(0.618)))
    k = math.exp(x) / L
    return NormReport(float(best) * top, float(_modular_vw(v, w, psi, k)), it,
                      (kappa_range[0] / (L * top), kappa_range[1] / (L * top)), kind="amemiya",
                      psi=psi.name, at_cap=bool(at_cap))


def in_space(f: Data, psi: YoungFunction, cap: float = BRACKET_CAP) -> dict:
    """Two membership tests: modular of ``f`` itself finite, and modular of
    ``f / lam`` finite for some ``lam`` up to ``cap``. They agree for
    Delta_2 functions."""
    v, w = _vw(f)
    direct = math.isfinite(_modular_vw(v, w, psi))
    scaled = False
    lam = 1.0
    while lam <= cap:
        if math.isfinite(_modular_vw(v, w, psi, 1.0 / lam)):
            scaled = True
            break
        lam *= 10.0
    return {"modular_finite": direct, "scaled_modular_finite": scaled}


# ---------------------------------------------------------------- pairings

@dataclass
class HolderReport:
    pairing: float
    norm_f: float
    norm_g: float
    psi: str
    phi: str

    @property
    def bound(self) -> float:
        return 2.0 * self.norm_f * self.norm_g

    @property
    def holds(self) -> bool:
        # relative slack at the level of the norm tolerance
        return self.pairing <= self.bound * (1.0 + HOLDER_SLACK)

    def to_dict(self) -> dict:
        return {"pairing": self.pairing, "norm_f": self.norm_f, "norm_g": self.norm_g,
                "bound": self.bound, "holds": self.holds, "psi": self.psi, "phi": self.phi}


def holder_pairing(f: SampledDensity, g: SampledDensity, psi: YoungFunction,
                   known: bool = True) -> HolderReport:
    """``int |f g|`` against ``2 ||f||_Psi ||g||_Phi`` with ``Phi`` the
    complementary function (Luxemburg norms on both sides)."""
    if f.space != g.space:
        raise SpaceMismatchError("f and g must share a measure space")
    phi = complementary(psi, known=known)
    pairing = float(np.sum(np.abs(f.values * g.values) * f.weights))
    return HolderReport(pairing, luxemburg_norm(f, psi).norm, luxemburg_norm(g, phi).norm,
                        psi.name, phi.name)


# --------------------------------------------------------------- embedding

@dataclass
class EmbeddingReport:
    names: list
    norms: list
    ratios: list = field(default_factory=list)

    @property
    def chain_ok(self) -> bool:
        """Finiteness propagates left to right along the chain."""
        return all(math.isfinite(b) or not math.isfinite(a)
                   for a, b in zip(self.norms, self.norms[1:]))

    def to_dict(self) -> dict:
        return {"chain": [{"space": n, "norm": x if math.isfinite(x) else "inf"}
                          for n, x in zip(self.names, self.norms)],
                "ratios": [r if math.isfinite(r) else "inf" for r in self.ratios],
                "chain_ok": self.chain_ok}


def _safe_norm(f, psi) -> float:
    try:
        return luxemburg_norm(f, psi).norm
    except OutsideSpaceError:
        return math.inf


def embedding_report(f: SampledDensity, p_values: Sequence[float] = (2.0,)) -> EmbeddingReport:
    """Norms along ``L^inf -> L_exp -> L^p -> L log L -> L^1`` on a
    probability space, with the ratios of consecutive norms."""
    if abs(f.space.total_mass - 1.0) > 1e-9:
        raise ValueError("embedding_report needs a probability space")
    names = ["Linf", "Lexp"]
    norms = [float(np.max(np.abs(f.values))) if f.values.size else 0.0,
             _safe_norm(f, catalog("phi-exp"))]
    for p in sorted(p_values, reverse=True):
        names.append(f"L{p:g}")
        norms.append(_safe_norm(f, catalog(f"lp:{p}")))
    names += ["LlogL", "L1"]
    norms += [_safe_norm(f, catalog("llogl")), float(np.sum(np.abs(f.values) * f.weights))]
    ratios = []
    for a, b in zip(norms, norms[1:]):
        ratios.append(b / a if a > 0 and math.isfinite(a) else (math.inf if b > 0 else 0.0))
    return EmbeddingReport(names, norms, ratios)


def refinement_trend(values: Sequence[float]) -> dict:
    """Summarize a norm sequence along a refinement ladder.

    Flags ``diverging`` when the sequence increases and its increments do
    not shrink (last increment at least half the first); a heuristic for
    documenting divergence, not a proof.
    """
    x = np.asarray(values, dtype=float)
    inc = np.diff(x)
    increasing = bool(np.all(inc > 0)) if inc.size else False
    diverging = bool(increasing and inc.size >= 2 and inc[-1] >= 0.5 * inc[0])
    return {"values": x.tolist(), "increments": inc.tolist(),
            "increasing": increasing, "diverging": diverging}
