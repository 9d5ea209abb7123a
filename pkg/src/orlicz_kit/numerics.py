"""Scalar root finding, inversion and quadrature for Python callables.

Catalog Young functions use the kernels in :mod:`orlicz_kit.kernels`; the
routines here serve arbitrary user-supplied densities.
"""
import math

from ._pycore import BIG, adaptive_simpson

__all__ = [
    "QUAD_RTOL",
    "QUAD_ATOL",
    "INVERSE_TOL",
    "adaptive_simpson",
    "generalized_inverse",
    "infinity_threshold",
    "golden_section_min",
]

QUAD_RTOL = 1e-10
QUAD_ATOL = 1e-14
INVERSE_TOL = 1e-12


def generalized_inverse(f, v, tol=INVERSE_TOL):
    """``inf{w >= 0 : f(w) >= v}`` for nondecreasing ``f`` by bisection.

    Returns ``inf`` when ``f`` stays below ``v`` up to ``BIG``. At a jump
    of ``f`` the left end of the final bracket is returned, which matches
    the infimum.
    """
    if v <= 0.0:
        return 0.0
    if v == math.inf:
        return math.inf
    lo, hi = 0.0, 1.0
    while f(hi) < v:
        lo = hi
        hi *= 2.0
        if hi > BIG:
            return math.inf
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if f(mid) >= v:
            hi = mid
        else:
            lo = mid
    return lo


def infinity_threshold(f, b, tol=INVERSE_TOL):
    """Largest point of ``[0, b]`` (to ``tol``) where ``f`` is still finite.

    ``f`` is nondecreasing with ``f(0)`` finite and ``f(b) == inf``.
    """
    lo, hi = 0.0, float(b)
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if math.isinf(f(mid)):
            hi = mid
        else:
            lo = mid
    return lo


def golden_section_min(g, a, b, tol=1e-8, maxiter=200):
    """Minimize a unimodal ``g`` on ``[a, b]``; returns ``(x, g(x))``."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(maxiter):
        if abs(b - a) <= tol * max(1.0, abs(a) + abs(b)):
            break
        if gc <= gd:
            b, d, gd = d, c, gc
            c = b - invphi * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + invphi * (b - a)
            gd = g(d)
    if gc <= gd:
        return c, gc
    return d, gd
