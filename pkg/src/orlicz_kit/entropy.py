"""Classical entropy functionals on sampled densities.

Conventions: ``0 log 0 = 0``; ``H(f) = -sum f log f`` and
``H_plus(f) = sum f log f`` (weighted by cell measure).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import xlogy

from .spaces import SampledDensity, modular
from .young import catalog

EPS_LADDER = (1.0, 0.1, 0.01, 1e-4)
STABLE_TOL = 1e-9


class NonMembershipWarning(UserWarning):
    """The density is outside ``L^1 ∩ L log(L+1)`` at this truncation."""


class NegativeDensityError(ValueError):
    pass


def _nonneg(f: SampledDensity) -> np.ndarray:
    if np.any(f.values < 0):
        raise NegativeDensityError("density must be nonnegative")
    return f.values


class TruncatedEntropy(NamedTuple):
    value: float
    mass: float


def level_set_mass(f: SampledDensity, eps: float) -> float:
    """Measure of ``{|f| > eps}``."""
    return float(np.sum(f.weights[np.abs(f.values) > eps]))


def truncated_entropy(f: SampledDensity, eps: float) -> TruncatedEntropy:
    """``sum |f| log |f|`` over the cells where ``|f| > eps``, with the mass
    of that level set. Bounded below by ``-mass / e``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    a = np.abs(f.values)
    keep = a > eps
    with np.errstate(over="ignore"):
        value = float(np.sum(xlogy(a[keep], a[keep]) * f.weights[keep]))
    return TruncatedEntropy(value, float(np.sum(f.weights[keep])))


def h_plus(f: SampledDensity) -> float:
    """``sum f log f`` with ``0 log 0 = 0``."""
    v = _nonneg(f)
    with np.errstate(over="ignore"):
        return float(np.sum(xlogy(v, v) * f.weights))


def h_epsilon(f: SampledDensity, eps: float, check: bool = True) -> float:
    """Regularized functional ``sum f log(f + eps)``.

    Warns with :class:`NonMembershipWarning` (and still computes) when ``f``
    is outside ``L^1 ∩ L log(L+1)``.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    v = _nonneg(f)
    if check and not membership_check(f).member:
        warnings.warn("density outside L1 ∩ L log(L+1) at this truncation",
                      NonMembershipWarning, stacklevel=2)
    with np.errstate(over="ignore"):
        return float(np.sum(xlogy(v, v + eps) * f.weights))


def jensen_lower_bound(f: SampledDensity) -> float | None:
    """``2 M log(M / N)`` with ``M = sum f`` and ``N = sum sqrt(f)``; a lower
    bound for ``H_plus``. ``None`` when ``M = 0`` or ``M`` or ``N`` is infinite."""
    v = _nonneg(f)
    with np.errstate(over="ignore"):
        M = float(np.sum(v * f.weights))
    N = modular(f.with_values(np.sqrt(v)), catalog("lp:1"))
    if M == 0.0 or not math.isfinite(M) or not math.isfinite(N):
        return None
    return 2.0 * M * math.log(M / N)


@dataclass
class EntropyReport:
    H: float
    H_plus: float
    H_eps: list
    jensen_lower: float | None
    truncation: dict
    stabilized: bool
    upper: float = field(init=False)

    def __post_init__(self):
        self.upper = min((v for _, v in self.H_eps), default=math.inf)

    @property
    def bounds_ok(self) -> bool:
        lo = -math.inf if self.jensen_lower is None else self.jensen_lower
        return lo <= self.H_plus <= self.upper

    def to_dict(self) -> dict:
        return {"H": self.H, "H_plus": self.H_plus,
                "H_eps": [[e, v] for e, v in self.H_eps],
                "upper": self.upper, "jensen_lower": self.jensen_lower,
                "truncation": self.truncation, "stabilized": self.stabilized}


def _stabilization(f: SampledDensity, eps: float, max_halvings: int = 200):
    prev = truncated_entropy(f, eps).value
    calm = 0
    for _ in range(max_halvings):
        eps *= 0.5
        cur = truncated_entropy(f, eps).value
        calm = calm + 1 if abs(cur - prev) < STABLE_TOL else 0
        prev = cur
        if calm >= 2:
            return True, eps
    return False, eps


def continuous_entropy(f: SampledDensity, eps_ladder: Sequence[float] = EPS_LADDER) -> EntropyReport:
    """Entropy ``H = -H_plus`` with its ``H_eps`` upper bounds for
    ``H_plus``, the Jensen lower bound, and whether the truncated entropies
    stabilize as the threshold is halved."""
    hp = h_plus(f)
    ladder = sorted(eps_ladder, reverse=True)
    h_eps = [(float(e), h_epsilon(f, e, check=False)) for e in ladder]
    e_min = ladder[-1] if ladder else 1e-4
    t = truncated_entropy(f, e_min)
    stable, _ = _stabilization(f, e_min)
    return EntropyReport(H=-hp + 0.0, H_plus=hp, H_eps=h_eps,
                         jensen_lower=jensen_lower_bound(f),
                         truncation={"eps": e_min, "mass": t.mass, "value": t.value},
                         stabilized=stable)


@dataclass
class MembershipReport:
    l1: float
    llog1: float
    llogl: float
    entropy_integral: float

    @property
    def member(self) -> bool:
        return math.isfinite(self.l1) and math.isfinite(self.llog1)

    def to_dict(self) -> dict:
        out = {k: (v if math.isfinite(v) else "inf") for k, v in
               (("l1", self.l1), ("llog1", self.llog1), ("llogl", self.llogl),
                ("entropy_integral", self.entropy_integral))}
        out["member"] = self.member
        return out


def membership_check(f: SampledDensity) -> MembershipReport:
    """Modulars for ``t``, ``t log(t+1)`` and ``t log+ t``, plus
    ``sum |f log f|``; membership in ``L^1 ∩ L log(L+1)`` needs the first two
    finite."""
    a = np.abs(f.values)
    with np.errstate(over="ignore"):
        ent = float(np.sum(np.abs(xlogy(a, a)) * f.weights))
    return MembershipReport(modular(f, catalog("lp:1")), modular(f, catalog("xlogx1")),
                            modular(f, catalog("llogl")), ent)


def approximation_sequence(f: SampledDensity, n: int) -> SampledDensity:
    """``f`` restricted to ``{1/n <= f <= n}``."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    v = _nonneg(f)
    keep = (v >= 1.0 / n) & (v <= n)
    return f.with_values(np.where(keep, v, 0.0))
