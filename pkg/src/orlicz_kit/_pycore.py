"""Pure-Python numerical kernels.

Reference implementation of the hot loops. The compiled module ``_core``
exposes exactly the same functions; :mod:`orlicz_kit.kernels` picks one at
import time.

Young-function kinds are small integer codes, see ``KIND_*`` below. Every
kind has a closed-form value ``Psi(x)`` and a density ``psi(u)``. Values
above ``BIG`` are reported as ``inf``.
"""
import math

import numpy as np

BIG = 1e300

KIND_LP = 0         # t**p
KIND_POWER = 1      # t**p / p
KIND_COSH = 2       # cosh(t) - 1
KIND_ASINH_INT = 3  # t*asinh(t) - sqrt(1+t^2) + 1
KIND_XLOG1 = 4      # t*log(t+1)
KIND_LLOGL = 5      # t*log+(t)
KIND_PHI_EXP = 6    # t on [0,1], exp(t-1) beyond
KIND_EXPM = 7       # exp(t) - t - 1
KIND_X1LOG = 8      # (t+1)*log(t+1) - t
KIND_LINF = 9       # 0 on [0,1], inf beyond

MODEL_CARLEMAN = 0
MODEL_BROADWELL = 1

_INF = math.inf


def _exp(x):
    try:
        return math.exp(x)
    except OverflowError:
        return _INF


def _clip(r):
    return _INF if r > BIG else r


def psi_value(kind, p, x):
    """Closed-form Young function of the given kind at ``x >= 0``."""
    x = float(x)
    if x == _INF:
        return _INF
    if kind == KIND_LP:
        try:
            r = x ** p
        except OverflowError:
            r = _INF
    elif kind == KIND_POWER:
        try:
            r = x ** p / p
        except OverflowError:
            r = _INF
    elif kind == KIND_COSH:
        if x > 1400.0:
            return _INF
        s = math.sinh(0.5 * x)
        r = 2.0 * s * s
    elif kind == KIND_ASINH_INT:
        r = x * math.asinh(x) - x * (x / (math.hypot(1.0, x) + 1.0))
    elif kind == KIND_XLOG1:
        r = x * math.log1p(x)
    elif kind == KIND_LLOGL:
        r = 0.0 if x <= 1.0 else x * math.log(x)
    elif kind == KIND_PHI_EXP:
        r = x if x <= 1.0 else _exp(x - 1.0)
    elif kind == KIND_EXPM:
        if x > 709.0:
            return _INF
        r = math.expm1(x) - x
    elif kind == KIND_X1LOG:
        r = (x + 1.0) * math.log1p(x) - x
    elif kind == KIND_LINF:
        r = 0.0 if x <= 1.0 else _INF
    else:
        raise ValueError(f"unknown kind {kind}")
    return _clip(r)


def density_value(kind, p, u):
    """Left-continuous density ``psi`` of the given kind at ``u >= 0``."""
    u = float(u)
    if u == _INF:
        return _INF
    if kind == KIND_LP:
        if u == 0.0:
            return 0.0
        try:
            r = p * u ** (p - 1.0)
        except OverflowError:
            r = _INF
    elif kind == KIND_POWER:
        if u == 0.0:
            return 0.0
        try:
            r = u ** (p - 1.0)
        except OverflowError:
            r = _INF
    elif kind == KIND_COSH:
        if u > 700.0:
            return _INF
        r = math.sinh(u)
    elif kind == KIND_ASINH_INT:
        r = math.asinh(u)
    elif kind == KIND_XLOG1:
        r = math.log1p(u) + u / (1.0 + u)
    elif kind == KIND_LLOGL:
        r = 0.0 if u <= 1.0 else 1.0 + math.log(u)
    elif kind == KIND_PHI_EXP:
        if u == 0.0:
            r = 0.0
        elif u <= 1.0:
            r = 1.0
        else:
            r = _exp(u - 1.0)
    elif kind == KIND_EXPM:
        if u > 709.0:
            return _INF
        r = math.expm1(u)
    elif kind == KIND_X1LOG:
        r = math.log1p(u)
    elif kind == KIND_LINF:
        r = 0.0 if u <= 1.0 else _INF
    else:
        raise ValueError(f"unknown kind {kind}")
    return _clip(r)


def psi_values(kind, p, x):
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape)
    flat_in = x.ravel()
    flat_out = out.ravel()
    for i in range(flat_in.size):
        flat_out[i] = psi_value(kind, p, flat_in[i])
    return out


def density_inverse(kind, p, v, tol):
    """Generalized inverse ``inf{w : psi(w) >= v}`` by bisection.

    At a jump of ``psi`` the left end of the final bracket is returned.
    """
    if v <= 0.0:
        return 0.0
    if v == _INF:
        return _INF
    lo = 0.0
    hi = 1.0
    while density_value(kind, p, hi) < v:
        lo = hi
        hi *= 2.0
        if hi > BIG:
            return _INF
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if density_value(kind, p, mid) >= v:
            hi = mid
        else:
            lo = mid
    return lo


def _integrand(kind, p, inverse, tol):
    if inverse:
        return lambda v: density_inverse(kind, p, v, tol)
    return lambda u: density_value(kind, p, u)


def _simpson(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    if not math.isfinite(left + right):
        return math.inf
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol or not (lm > a and rm < b):
        return left + right + delta / 15.0
    return (_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + _simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1))


def adaptive_simpson(f, a, b, rtol, atol, max_depth=48):
    """Adaptive Simpson quadrature of a finite integrand on ``[a, b]``.

    The absolute target is ``max(rtol * |I0|, atol)`` where ``I0`` is a
    16-panel composite estimate. The interval is pre-split into 8 panels so
    that symmetric integrands cannot fool the first error estimate.
    """
    if b <= a:
        return 0.0
    n = 16
    h = (b - a) / n
    xs = [a + i * h for i in range(n)] + [b]
    fx = [f(x) for x in xs]
    i0 = h / 3.0 * (fx[0] + fx[-1]
                    + 4.0 * sum(fx[1:-1:2]) + 2.0 * sum(fx[2:-1:2]))
    tol = max(rtol * abs(i0), atol)
    total = 0.0
    panel_tol = tol / 8.0
    for k in range(8):
        pa, pm, pb = xs[2 * k], xs[2 * k + 1], xs[2 * k + 2]
        fa, fm, fb = fx[2 * k], fx[2 * k + 1], fx[2 * k + 2]
        whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb)
        total += _simpson(f, pa, pb, fa, fm, fb, whole, panel_tol, max_depth)
    return total


def integrate_density(kind, p, a, b, rtol, atol, inverse, inv_tol):
    """Integral of ``psi`` (or its generalized inverse) over ``[a, b]``."""
    return adaptive_simpson(_integrand(kind, p, inverse, inv_tol), a, b, rtol, atol)


def modular_sum(kind, p, values, weights, scale):
    """``sum_i Psi(scale*|values_i|) * weights_i`` with ``inf`` propagation."""
    total = 0.0
    vals = np.asarray(values, dtype=float).tolist()
    wts = np.asarray(weights, dtype=float).tolist()
    for v, w in zip(vals, wts):
        if w == 0.0:
            continue
        t = psi_value(kind, p, scale * abs(v))
        if t == 0.0:
            continue
        total += t * w
        if total > BIG:
            return _INF
    return total


def luxemburg_bisect(kind, p, values, weights, lo, hi, rtol, maxiter):
    """Bisection for ``inf{lam : modular(f/lam) <= 1}`` on a valid bracket.

    Requires ``modular(f/lo) > 1 >= modular(f/hi)``. Returns
    ``(hi, modular at hi, iterations)``.
    """
    it = 0
    m_hi = modular_sum(kind, p, values, weights, 1.0 / hi)
    while hi - lo > rtol * hi and it < maxiter:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        m = modular_sum(kind, p, values, weights, 1.0 / mid)
        if m <= 1.0:
            hi = mid
            m_hi = m
        else:
            lo = mid
        it += 1
    return hi, m_hi, it


def _rhs(model, y):
    if model == MODEL_CARLEMAN:
        g = y[1] * y[1] - y[0] * y[0]
        return [g, -g]
    if model == MODEL_BROADWELL:
        g = y[2] * y[3] - y[0] * y[1]
        return [g, g, -g, -g]
    raise ValueError(f"unknown model {model}")


def rk4_run(model, state, dt, nsteps):
    """Classical RK4 for the discrete-velocity models.

    Returns an ``(nsteps + 1, dim)`` array of states. Positivity is not
    checked here; callers inspect the result.
    """
    y = [float(s) for s in state]
    dim = len(y)
    if model not in (MODEL_CARLEMAN, MODEL_BROADWELL):
        raise ValueError(f"unknown model {model}")
    if dim != (2 if model == MODEL_CARLEMAN else 4):
        raise ValueError("state has wrong dimension for model")
    out = np.empty((nsteps + 1, dim))
    out[0] = y
    h2 = 0.5 * dt
    h6 = dt / 6.0
    for n in range(nsteps):
        k1 = _rhs(model, y)
        k2 = _rhs(model, [y[i] + h2 * k1[i] for i in range(dim)])
        k3 = _rhs(model, [y[i] + h2 * k2[i] for i in range(dim)])
        k4 = _rhs(model, [y[i] + dt * k3[i] for i in range(dim)])
        y = [y[i] + h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
             for i in range(dim)]
        out[n + 1] = y
    return out
