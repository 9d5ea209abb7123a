"""Deterministic test densities, step profiles and spectra.

Unbounded profiles are discretized by exact cell averages, so every
discretization is a conditional expectation of the true function. For a
convex Young function the modular of a cell-averaged profile is then at
most the true modular (Jensen), and it increases under nested refinement.
"""
from __future__ import annotations

import math

import numpy as np

from .spaces import MeasureSpace, SampledDensity, StepRearrangement


def _uniform_edges(n: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, n + 1)


def neg_log_cells(n: int) -> SampledDensity:
    """Cell averages of ``-log u`` on ``n`` equal cells of ``(0, 1]``."""
    e = _uniform_edges(n)
    # antiderivative of -log u is u - u log u, zero at u = 0
    F = np.where(e > 0, e - e * np.log(np.where(e > 0, e, 1.0)), 0.0)
    return SampledDensity(MeasureSpace.uniform(n), np.diff(F) * n)


def inv_sqrt_cells(n: int) -> SampledDensity:
    """Cell averages of ``u**-0.5`` on ``n`` equal cells of ``(0, 1]``."""
    e = _uniform_edges(n)
    return SampledDensity(MeasureSpace.uniform(n), 2.0 * np.diff(np.sqrt(e)) * n)


def constant_density(n: int = 4, c: float = 1.0) -> SampledDensity:
    return SampledDensity(MeasureSpace.uniform(n), np.full(n, float(c)))


def uniform_density(n: int = 16) -> SampledDensity:
    """The uniform probability density on ``[0, 1]``."""
    return constant_density(n, 1.0)


def gaussian_density(sigma: float, n: int, half_width: float = 12.0) -> SampledDensity:
    """Midpoint samples of the centred normal density on ``[-w sigma, w sigma]``."""
    h = 2.0 * half_width * sigma / n
    x = -half_width * sigma + h * (np.arange(n) + 0.5)
    vals = np.exp(-0.5 * (x / sigma) ** 2) / (sigma * math.sqrt(2.0 * math.pi))
    return SampledDensity(MeasureSpace.from_weights(np.full(n, h)), vals)


def gaussian_entropy(sigma: float) -> float:
    """Differential entropy of the normal law with standard deviation ``sigma``."""
    return 0.5 * math.log(2.0 * math.pi * math.e * sigma * sigma)


def maxwellian_family(temperatures=(0.5, 1.0, 2.0), n: int = 4000) -> list:
    """One-dimensional Maxwellians (unit mass, variance ``T``)."""
    return [gaussian_density(math.sqrt(T), n) for T in temperatures]


def log_tail_density(s_max: float, n: int = 4000) -> SampledDensity:
    """Samples of ``1 / (u log(u)**2)`` on ``(e, exp(s_max)]``.

    Cells are uniform in ``s = log u``; the ``L^1`` mass stays below 1 while
    ``int f |log f|`` grows like ``log(s_max)``. Needs ``s_max < 700``.
    """
    if not 1.0 < s_max < 700.0:
        raise ValueError("s_max must lie in (1, 700)")
    edges = np.linspace(1.0, s_max, n + 1)
    s = 0.5 * (edges[1:] + edges[:-1])
    vals = np.exp(-s) / s ** 2
    weights = np.exp(edges[1:]) - np.exp(edges[:-1])
    return SampledDensity(MeasureSpace.from_weights(weights), vals)


def random_density(rng: np.random.Generator, n: int | None = None,
                   positive: bool = False) -> SampledDensity:
    """Random weighted density; heavy-ish values from a lognormal."""
    n = int(rng.integers(1, 60)) if n is None else n
    w = rng.uniform(0.05, 2.0, n)
    v = rng.lognormal(0.0, 1.0, n)
    if not positive:
        v = v * rng.choice([-1.0, 0.0, 1.0], n, p=[0.3, 0.1, 0.6])
    return SampledDensity(MeasureSpace.from_weights(w), v)


def random_probability_density(rng: np.random.Generator, n: int | None = None) -> SampledDensity:
    n = int(rng.integers(2, 60)) if n is None else n
    v = rng.lognormal(0.0, 1.0, n)
    w = rng.dirichlet(np.ones(n))
    w = np.maximum(w, 1e-12)
    return SampledDensity(MeasureSpace.from_weights(w / w.sum()), v / np.sum(v * w / w.sum()))


# ------------------------------------------------------------ step profiles

CHI_UNIT = StepRearrangement(np.array([1.0]), np.array([1.0]))


def constant_steps(c: float = 1.0, length: float = 1.0) -> StepRearrangement:
    return StepRearrangement(np.array([float(c)]), np.array([float(length)]))


def log_inverse_steps(levels: int) -> StepRearrangement:
    """Cell averages of ``log(1/s)`` on dyadic cells of ``(0, 1]``.

    The first step covers ``[0, 2**-levels]``; each later one doubles.
    """
    a = 2.0 ** -np.arange(levels, 0, -1)          # left ends of [a, 2a]
    first = 1.0 + levels * math.log(2.0)
    rest = 1.0 - 2.0 * math.log(2.0) - np.log(a)
    return StepRearrangement(np.concatenate([[first], rest]),
                             np.concatenate([[2.0 ** -levels], a]))


def inverse_steps(s0: float, per_octave: int = 4) -> StepRearrangement:
    """``1/s`` on ``(0, 1]`` capped at ``1/s0`` on ``[0, s0]``.

    Geometric cells on ``[s0, 1]`` carry exact cell averages.
    """
    k = max(1, int(math.ceil(per_octave * math.log2(1.0 / s0))))
    edges = np.geomspace(s0, 1.0, k + 1)
    avg = np.log(edges[1:] / edges[:-1]) / np.diff(edges)
    return StepRearrangement(np.concatenate([[1.0 / s0], avg]),
                             np.concatenate([[s0], np.diff(edges)]))


def divergent_entropy_steps(k_max: int) -> StepRearrangement:
    """Values ``exp(-k)`` on lengths ``exp(k) / k**2``, ``k = 1..k_max``.

    Summable (``sum 1/k**2``) while ``sum |f log f|`` is the harmonic sum.
    ``k_max`` is limited to 700 by the double range.
    """
    if not 1 <= k_max <= 700:
        raise ValueError("k_max must lie in [1, 700]")
    k = np.arange(1, k_max + 1, dtype=float)
    return StepRearrangement(np.exp(-k), np.exp(k) / k ** 2)


def random_steps(rng: np.random.Generator, n: int | None = None) -> StepRearrangement:
    n = int(rng.integers(1, 30)) if n is None else n
    v = np.sort(rng.lognormal(0.0, 1.0, n))[::-1]
    v = np.unique(v)[::-1]
    return StepRearrangement(v, rng.uniform(0.05, 2.0, v.size))


# ------------------------------------------------------------------ spectra

def random_density_matrix(rng: np.random.Generator, n: int, rank: int | None = None) -> np.ndarray:
    rank = n if rank is None else rank
    a = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = a @ a.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


def random_summable_spectrum(rng: np.random.Generator) -> np.ndarray:
    """Nonincreasing nonnegative spectrum with a random decay law."""
    n = int(rng.integers(1, 200))
    kind = rng.integers(0, 3)
    k = np.arange(1, n + 1, dtype=float)
    scale = rng.uniform(0.01, 50.0)
    if kind == 0:
        a = scale * rng.uniform(0.1, 0.95) ** k
    elif kind == 1:
        a = scale * k ** -rng.uniform(1.1, 3.0)
    else:
        a = scale * rng.random(n)
    return np.sort(a)[::-1]
