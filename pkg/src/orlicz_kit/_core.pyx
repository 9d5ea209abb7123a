# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels, a drop-in twin of ``_pycore``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport (INFINITY, asinh, exp, expm1, fabs, hypot, isfinite, log,
                        log1p, pow, sinh)

cnp.import_array()

BIG = 1e300
cdef double _BIG = 1e300

KIND_LP = 0
KIND_POWER = 1
KIND_COSH = 2
KIND_ASINH_INT = 3
KIND_XLOG1 = 4
KIND_LLOGL = 5
KIND_PHI_EXP = 6
KIND_EXPM = 7
KIND_X1LOG = 8
KIND_LINF = 9

MODEL_CARLEMAN = 0
MODEL_BROADWELL = 1


cdef inline double _clip(double r) noexcept nogil:
    return INFINITY if r > _BIG else r


cdef double _psi(int kind, double p, double x) noexcept nogil:
    cdef double r, s
    if x == INFINITY:
        return INFINITY
    if kind == 0:
        r = pow(x, p)
    elif kind == 1:
        r = pow(x, p) / p
    elif kind == 2:
        if x > 1400.0:
            return INFINITY
        s = sinh(0.5 * x)
        r = 2.0 * s * s
    elif kind == 3:
        r = x * asinh(x) - x * (x / (hypot(1.0, x) + 1.0))
    elif kind == 4:
        r = x * log1p(x)
    elif kind == 5:
        r = 0.0 if x <= 1.0 else x * log(x)
    elif kind == 6:
        r = x if x <= 1.0 else exp(x - 1.0)
    elif kind == 7:
        if x > 709.0:
            return INFINITY
        r = expm1(x) - x
    elif kind == 8:
        r = (x + 1.0) * log1p(x) - x
    elif kind == 9:
        r = 0.0 if x <= 1.0 else INFINITY
    else:
        r = -1.0
    return _clip(r)


cdef double _dens(int kind, double p, double u) noexcept nogil:
    cdef double r
    if u == INFINITY:
        return INFINITY
    if kind == 0:
        if u == 0.0:
            return 0.0
        r = p * pow(u, p - 1.0)
    elif kind == 1:
        if u == 0.0:
            return 0.0
        r = pow(u, p - 1.0)
    elif kind == 2:
        if u > 700.0:
            return INFINITY
        r = sinh(u)
    elif kind == 3:
        r = asinh(u)
    elif kind == 4:
        r = log1p(u) + u / (1.0 + u)
    elif kind == 5:
        r = 0.0 if u <= 1.0 else 1.0 + log(u)
    elif kind == 6:
        if u == 0.0:
            r = 0.0
        elif u <= 1.0:
            r = 1.0
        else:
            r = exp(u - 1.0)
    elif kind == 7:
        if u > 709.0:
            return INFINITY
        r = expm1(u)
    elif kind == 8:
        r = log1p(u)
    elif kind == 9:
        r = 0.0 if u <= 1.0 else INFINITY
    else:
        r = -1.0
    return _clip(r)


cdef double _inverse(int kind, double p, double v, double tol) noexcept nogil:
    cdef double lo = 0.0, hi = 1.0, mid
    if v <= 0.0:
        return 0.0
    if v == INFINITY:
        return INFINITY
    while _dens(kind, p, hi) < v:
        lo = hi
        hi *= 2.0
        if hi > _BIG:
            return INFINITY
    while hi - lo > tol * (hi if hi > 1.0 else 1.0):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _dens(kind, p, mid) >= v:
            hi = mid
        else:
            lo = mid
    return lo


cdef inline double _f(int kind, double p, bint inverse, double tol, double x) noexcept nogil:
    if inverse:
        return _inverse(kind, p, x, tol)
    return _dens(kind, p, x)


cdef double _simpson(int kind, double p, bint inverse, double itol,
                     double a, double b, double fa, double fm, double fb,
                     double whole, double tol, int depth) noexcept nogil:
    cdef double m = 0.5 * (a + b)
    cdef double lm = 0.5 * (a + m)
    cdef double rm = 0.5 * (m + b)
    cdef double flm = _f(kind, p, inverse, itol, lm)
    cdef double frm = _f(kind, p, inverse, itol, rm)
    cdef double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    cdef double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    cdef double delta
    if not isfinite(left + right):
        return INFINITY
    delta = left + right - whole
    if depth <= 0 or fabs(delta) <= 15.0 * tol or not (lm > a and rm < b):
        return left + right + delta / 15.0
    return (_simpson(kind, p, inverse, itol, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + _simpson(kind, p, inverse, itol, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1))


def psi_value(int kind, double p, double x):
    if kind < 0 or kind > 9:
        raise ValueError(f"unknown kind {kind}")
    return _psi(kind, p, x)


def density_value(int kind, double p, double u):
    if kind < 0 or kind > 9:
        raise ValueError(f"unknown kind {kind}")
    return _dens(kind, p, u)


def psi_values(int kind, double p, x):
    cdef const double[::1] flat = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t i, n = flat.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    for i in range(n):
        o[i] = _psi(kind, p, flat[i])
    return out.reshape(np.shape(x))


def density_inverse(int kind, double p, double v, double tol):
    return _inverse(kind, p, v, tol)


def integrate_density(int kind, double p, double a, double b, double rtol,
                      double atol, bint inverse, double inv_tol,
                      int max_depth=48):
    cdef int n = 16, k, i
    cdef double h, i0, tol, total = 0.0, pa, pm, pb, fa, fm, fb, whole, s_odd = 0.0, s_even = 0.0
    cdef double xs[17]
    cdef double fx[17]
    if b <= a:
        return 0.0
    h = (b - a) / n
    for i in range(n):
        xs[i] = a + i * h
    xs[n] = b
    for i in range(n + 1):
        fx[i] = _f(kind, p, inverse, inv_tol, xs[i])
    for i in range(1, n, 2):
        s_odd += fx[i]
    for i in range(2, n, 2):
        s_even += fx[i]
    i0 = h / 3.0 * (fx[0] + fx[n] + 4.0 * s_odd + 2.0 * s_even)
    tol = rtol * fabs(i0)
    if tol < atol:
        tol = atol
    for k in range(8):
        pa = xs[2 * k]; pm = xs[2 * k + 1]; pb = xs[2 * k + 2]
        fa = fx[2 * k]; fm = fx[2 * k + 1]; fb = fx[2 * k + 2]
        whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb)
        total += _simpson(kind, p, inverse, inv_tol, pa, pb, fa, fm, fb,
                          whole, tol / 8.0, max_depth)
    return total


cdef double _modular(int kind, double p, const double[::1] values, const double[::1] weights,
                     double scale) noexcept nogil:
    cdef Py_ssize_t i, n = values.shape[0]
    cdef double total = 0.0, t
    for i in range(n):
        if weights[i] == 0.0:
            continue
        t = _psi(kind, p, scale * fabs(values[i]))
        if t == 0.0:
            continue
        total += t * weights[i]
        if total > _BIG:
            return INFINITY
    return total


def modular_sum(int kind, double p, values, weights, double scale):
    cdef const double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    return _modular(kind, p, v, w, scale)


def luxemburg_bisect(int kind, double p, values, weights, double lo, double hi,
                     double rtol, int maxiter):
    cdef const double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef int it = 0
    cdef double mid, m
    cdef double m_hi = _modular(kind, p, v, w, 1.0 / hi)
    with nogil:
        while hi - lo > rtol * hi and it < maxiter:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            m = _modular(kind, p, v, w, 1.0 / mid)
            if m <= 1.0:
                hi = mid
                m_hi = m
            else:
                lo = mid
            it += 1
    return hi, m_hi, it


cdef inline void _rhs(int model, double* y, double* k) noexcept nogil:
    cdef double g
    if model == 0:
        g = y[1] * y[1] - y[0] * y[0]
        k[0] = g
        k[1] = -g
    else:
        g = y[2] * y[3] - y[0] * y[1]
        k[0] = g
        k[1] = g
        k[2] = -g
        k[3] = -g


def rk4_run(int model, state, double dt, int nsteps):
    cdef int dim
    if model == 0:
        dim = 2
    elif model == 1:
        dim = 4
    else:
        raise ValueError(f"unknown model {model}")
    if len(state) != dim:
        raise ValueError("state has wrong dimension for model")
    out = np.empty((nsteps + 1, dim))
    cdef double[:, ::1] o = out
    cdef double y[4]
    cdef double t[4]
    cdef double k1[4]
    cdef double k2[4]
    cdef double k3[4]
    cdef double k4[4]
    cdef int i, n
    cdef double h2 = 0.5 * dt, h6 = dt / 6.0
    for i in range(dim):
        y[i] = float(state[i])
        o[0, i] = y[i]
    with nogil:
        for n in range(nsteps):
            _rhs(model, y, k1)
            for i in range(dim):
                t[i] = y[i] + h2 * k1[i]
            _rhs(model, t, k2)
            for i in range(dim):
                t[i] = y[i] + h2 * k2[i]
            _rhs(model, t, k3)
            for i in range(dim):
                t[i] = y[i] + dt * k3[i]
            _rhs(model, t, k4)
            for i in range(dim):
                y[i] = y[i] + h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
                o[n + 1, i] = y[i]
    return out
