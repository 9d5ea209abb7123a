"""Young's functions and their calculus.

A :class:`YoungFunction` carries its density ``psi`` and, when one exists,
a closed form for ``Psi(s) = integral of psi over [0, s]``. Without a
closed form values come from adaptive Simpson quadrature of the density.

The growth probes (:func:`check_delta2`, :func:`check_nabla2`,
:func:`check_dominance`, :func:`check_equivalence`) sample a finite grid.
A ``"pass"`` verdict means the condition holds on that grid with the
reported constants; it says nothing about points beyond the grid.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.special import xlogy

from . import kernels
from .numerics import (INVERSE_TOL, QUAD_ATOL, QUAD_RTOL, adaptive_simpson,
                       generalized_inverse, infinity_threshold)

BIG = kernels.BIG
DOMINANCE_BS = tuple(2.0 ** k for k in range(-10, 21))
NABLA2_LS = (1.5, 2.0, 3.0, 4.0)


class DomainError(ValueError):
    """Raised for arguments outside ``[0, inf)``."""


class KernelSpec(NamedTuple):
    kind: int
    p: float
    inverse: bool = False


@dataclass(frozen=True)
class YoungFunction:
    """A Young's function ``Psi(s) = int_0^s psi(u) du``.

    Parameters
    ----------
    density
        Scalar callable ``psi``: nondecreasing, left-continuous, ``psi(0) = 0``,
        may return ``inf``.
    closed_form
        Optional vectorized callable for ``Psi`` itself.
    name
        Identifier used in reports.
    kernel
        Native kernel backing the density, when the function comes from the
        catalog (or is the numerical complementary of a catalog entry).
    conjugate
        Catalog name of the known complementary function, if any.
    """

    density: Callable[[float], float]
    closed_form: Callable | None = None
    name: str = "anonymous"
    kernel: KernelSpec | None = field(default=None, compare=False)
    conjugate: str | None = None

    def __call__(self, s):
        if np.ndim(s) == 0:
            return evaluate(self, float(s))
        return self.values(s)

    def values(self, s) -> np.ndarray:
        """Vectorized evaluation. Quadrature-only functions integrate
        cumulatively between sorted sample points."""
        s = np.asarray(s, dtype=float)
        if np.any(s < 0) or np.any(np.isnan(s)):
            raise DomainError("Young functions are defined on [0, inf)")
        if self.closed_form is not None:
            with np.errstate(over="ignore", invalid="ignore"):
                out = np.asarray(self.closed_form(s), dtype=float)
            return np.where(out > BIG, np.inf, out)
        flat = s.ravel()
        order = np.unique(flat)
        acc = 0.0
        prev = 0.0
        table = np.empty(order.size)
        for i, x in enumerate(order):
            if math.isinf(acc):
                table[i] = math.inf
                continue
            acc += _integral(self, prev, float(x))
            table[i] = acc
            prev = float(x)
        return table[np.searchsorted(order, flat)].reshape(s.shape)

    def integral(self, a: float, b: float) -> float:
        """Integral of the density over ``[a, b]`` by quadrature."""
        return _integral(self, a, b)


def _raw_integral(fn: YoungFunction, a: float, b: float) -> float:
    if fn.kernel is not None:
        k = fn.kernel
        return kernels.integrate_density(k.kind, k.p, a, b, QUAD_RTOL, QUAD_ATOL,
                                         k.inverse, INVERSE_TOL)
    return adaptive_simpson(fn.density, a, b, QUAD_RTOL, QUAD_ATOL)


def _integral(fn: YoungFunction, a: float, b: float) -> float:
    if b <= a:
        return 0.0
    if math.isinf(fn.density(b)):
        edge = infinity_threshold(fn.density, b)
        if b - edge > INVERSE_TOL * max(1.0, b):
            return math.inf
        b = edge
        if b <= a:
            return 0.0
    val = _raw_integral(fn, a, b)
    return math.inf if val > BIG else val


def evaluate(fn: YoungFunction, s: float) -> float:
    """``Psi(s)``: closed form when present, else quadrature of the density.

    Returns ``inf`` when the density is infinite on a subinterval of positive
    length inside ``[0, s]``.
    """
    s = float(s)
    if not s >= 0.0:
        raise DomainError(f"Young functions are defined on [0, inf), got {s}")
    if fn.closed_form is not None:
        with np.errstate(over="ignore", invalid="ignore"):
            val = float(fn.closed_form(s))
        return math.inf if val > BIG else val
    return _integral(fn, 0.0, s)


def quadrature_value(fn: YoungFunction, s: float) -> float:
    """``Psi(s)`` from the density alone, ignoring any closed form."""
    if s < 0:
        raise DomainError("Young functions are defined on [0, inf)")
    return _integral(fn, 0.0, float(s))


# ----------------------------------------------------------------- catalog

def _kernel_entry(kind: int, p: float, name: str, conjugate: str | None) -> YoungFunction:
    return YoungFunction(
        density=lambda u, _k=kind, _p=p: kernels.density_value(_k, _p, u),
        closed_form=lambda x, _k=kind, _p=p: (
            kernels.psi_values(_k, _p, x) if np.ndim(x) else kernels.psi_value(_k, _p, x)),
        name=name,
        kernel=KernelSpec(kind, p),
        conjugate=conjugate,
    )


_FIXED = {
    "cosh-1": (kernels.KIND_COSH, 0.0, "arcsinh-int"),
    "arcsinh-int": (kernels.KIND_ASINH_INT, 0.0, "cosh-1"),
    "xlogx1": (kernels.KIND_XLOG1, 0.0, None),
    "llogl": (kernels.KIND_LLOGL, 0.0, "phi-exp"),
    "phi-exp": (kernels.KIND_PHI_EXP, 0.0, "llogl"),
    "exp-t-1": (kernels.KIND_EXPM, 0.0, "x1logx1"),
    "x1logx1": (kernels.KIND_X1LOG, 0.0, "exp-t-1"),
    "linf": (kernels.KIND_LINF, 0.0, "lp:1"),
}

CATALOG_NAMES = tuple(_FIXED) + ("power:p", "lp:p")


def _fmt(p: float) -> str:
    p = float(p)
    return str(int(p)) if p.is_integer() and abs(p) < 1e15 else repr(p)


def catalog(name: str) -> YoungFunction:
    """Look up a catalog Young function by name.

    Fixed names are ``cosh-1``, ``arcsinh-int``, ``xlogx1`` (``x log(x+1)``),
    ``llogl`` (``x log+ x``), ``phi-exp``, ``exp-t-1``, ``x1logx1``
    (``(x+1)log(x+1) - x``) and ``linf`` (0 on ``[0,1]``, infinite beyond).
    Parametrized names are ``power:p`` (``t**p / p``) and ``lp:p``
    (``t**p``), ``p >= 1``.
    """
    if name in _FIXED:
        kind, p, conj = _FIXED[name]
        return _kernel_entry(kind, p, name, conj)
    head, sep, tail = name.partition(":")
    if sep and head in ("power", "lp"):
        try:
            p = float(tail)
        except ValueError:
            raise KeyError(f"bad exponent in {name!r}") from None
        if not p >= 1.0 or math.isinf(p):
            raise KeyError(f"exponent must be >= 1 in {name!r}")
        canonical = f"{head}:{_fmt(p)}"
        if head == "power":
            conj = "linf" if p == 1.0 else f"power:{_fmt(p / (p - 1.0))}"
            return _kernel_entry(kernels.KIND_POWER, p, canonical, conj)
        conj = "linf" if p == 1.0 else None
        return _kernel_entry(kernels.KIND_LP, p, canonical, conj)
    raise KeyError(f"unknown Young function {name!r}")


def from_density(density: Callable[[float], float], name: str = "custom",
                 closed_form: Callable | None = None) -> YoungFunction:
    """Wrap a user density; checks ``psi(0) == 0`` and monotonicity on a probe grid."""
    if density(0.0) != 0.0:
        raise ValueError("density must vanish at 0")
    probe = np.geomspace(1e-6, 1e3, 64)
    vals = np.array([density(float(u)) for u in probe])
    if np.any(np.isnan(vals)) or np.any(vals[1:] < vals[:-1]):
        raise ValueError("density must be nondecreasing and never NaN")
    return YoungFunction(density=density, closed_form=closed_form, name=name)


def complementary(fn: YoungFunction, *, known: bool = True) -> YoungFunction:
    """Complementary Young function built from the generalized inverse
    ``phi(v) = inf{w : psi(w) >= v}`` of the density.

    With ``known=True`` a catalog entry with a known conjugate returns that
    conjugate (closed form). Otherwise the result is quadrature-only.
    """
    if known and fn.conjugate is not None:
        return catalog(fn.conjugate)
    if not callable(fn.density) or math.isnan(fn.density(1.0)):
        raise ValueError("complementary needs a usable density")
    k = fn.kernel
    if k is not None and not k.inverse:
        dens = lambda v, _k=k.kind, _p=k.p: kernels.density_inverse(_k, _p, v, INVERSE_TOL)  # noqa: E731
        spec = KernelSpec(k.kind, k.p, inverse=True)
    else:
        psi = fn.density
        dens = lambda v: generalized_inverse(psi, v, INVERSE_TOL)  # noqa: E731
        spec = None
    return YoungFunction(density=dens, name=f"complementary({fn.name})", kernel=spec)


def entropic_function(k: float = 1.0) -> Callable:
    """``x -> k x log x`` with ``0 log 0 = 0``; not a Young function."""
    return lambda x: k * xlogy(np.asarray(x, dtype=float), np.asarray(x, dtype=float))


# ------------------------------------------------------------------ probes

@dataclass
class ProbeReport:
    verdict: str
    witness: dict | None = None
    constants: dict = field(default_factory=dict)
    note: str = ""

    def __post_init__(self):
        if self.verdict not in ("pass", "fail", "inconclusive"):
            raise ValueError(f"bad verdict {self.verdict!r}")
        if self.verdict == "fail" and self.witness is None:
            raise ValueError("a fail verdict needs a witness")

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "witness": self.witness,
                "constants": self.constants, "note": self.note}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, default=_json_default)


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not serializable: {type(obj)}")


def _grid(grid: Sequence[float]) -> np.ndarray:
    g = np.asarray(grid, dtype=float).ravel()
    if g.size == 0:
        raise ValueError("empty grid")
    if np.any(np.diff(g) < 0):
        raise ValueError("grid must be sorted ascending")
    if np.any(g < 0):
        raise DomainError("grid must be nonnegative")
    return g


def _values(F, x: np.ndarray) -> np.ndarray:
    if isinstance(F, YoungFunction):
        return F.values(x)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        try:
            out = np.asarray(F(x), dtype=float)
            if out.shape != x.shape:
                raise ValueError
        except (TypeError, ValueError):
            out = np.array([float(F(float(t))) for t in x])
    return np.where(out > BIG, np.inf, out)


def _num(x):
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _diverging(r: np.ndarray) -> bool:
    """Heuristic: the last third of the ratios is strictly increasing and
    grows by at least a factor 2."""
    n = max(3, r.size // 3)
    if r.size < 3:
        return False
    tail = r[-n:]
    return bool(np.all(np.diff(tail) > 0) and tail[-1] >= 2.0 * tail[0] > 0)


def _geq(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore"):
        floor = np.where(np.isfinite(rhs), rhs - 1e-12 * np.abs(rhs), rhs)
    return lhs >= floor


NOTE = "sampled probe: holds on the supplied grid only"


def check_delta2(fn: YoungFunction, grid: Sequence[float], globally: bool = False) -> ProbeReport:
    """Sampled Delta_2 probe: ``Psi(2s) <= c Psi(s) < inf`` for ``s >= s0``.

    ``s0 = 0`` (all grid points) when ``globally``; otherwise ``s0`` is fitted
    as the first grid point after the last violation.
    """
    g = _grid(grid)
    a = _values(fn, g)
    b = _values(fn, 2.0 * g)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(a > 0, b / a, np.where(b > 0, np.inf, 0.0))
    r = np.where(np.isinf(a), np.inf, r)
    bad = ~np.isfinite(r)
    if globally:
        if bad.any():
            i = int(np.argmax(bad))
            return ProbeReport("fail", {"s": _num(g[i]), "psi_s": _num(a[i]), "psi_2s": _num(b[i])},
                               note="ratio infinite or Psi = inf on the grid")
        start = 0
    else:
        if bad[-1]:
            i = g.size - 1
            return ProbeReport("fail", {"s": _num(g[i]), "psi_s": _num(a[i]), "psi_2s": _num(b[i])},
                               note="ratio infinite at the top of the grid")
        start = int(np.nonzero(bad)[0][-1]) + 1 if bad.any() else 0
    tail = r[start:]
    if _diverging(tail):
        i = g.size - 1
        return ProbeReport("fail", {"s": _num(g[i]), "ratio": _num(r[i])},
                           note="ratio Psi(2s)/Psi(s) increases without settling")
    k = int(np.argmax(tail)) + start
    consts = {"c": _num(r[k]), "s0": 0.0 if globally else _num(g[start])}
    if tail.size < 3:
        return ProbeReport("inconclusive", {"s": _num(g[start])}, consts,
                           note="fewer than 3 grid points past s0")
    return ProbeReport("pass", {"s": _num(g[k]), "ratio": _num(r[k])}, consts, note=NOTE)


def check_nabla2(fn: YoungFunction, grid: Sequence[float], globally: bool = False,
                 ls: Sequence[float] = NABLA2_LS) -> ProbeReport:
    """Sampled nabla_2 probe: ``Phi(x) <= Phi(l x) / (2 l)`` for ``x >= x0``.

    The smallest ``l`` from ``ls`` that works is reported, with its fitted
    ``x0`` (``0`` when ``globally``).
    """
    g = _grid(grid)
    phi = _values(fn, g)
    worst = None
    for l in sorted(ls):
        if not l > 1:
            raise ValueError("l must exceed 1")
        rhs = _values(fn, l * g) / (2.0 * l)
        ok = np.isfinite(phi) & (phi <= rhs)
        if globally:
            if ok.all():
                return ProbeReport("pass", None, {"l": l, "x0": 0.0}, note=NOTE)
            i = int(np.argmin(ok))
        else:
            if ok[-1]:
                start = int(np.nonzero(~ok)[0][-1]) + 1 if (~ok).any() else 0
                consts = {"l": l, "x0": _num(g[start])}
                if g.size - start < 3:
                    return ProbeReport("inconclusive", {"x": _num(g[start])}, consts,
                                       note="fewer than 3 grid points past x0")
                return ProbeReport("pass", None, consts, note=NOTE)
            i = g.size - 1
        worst = {"x": _num(g[i]), "l": l, "phi_x": _num(phi[i]), "phi_lx_over_2l": _num(rhs[i])}
    return ProbeReport("fail", worst, {}, note="no l in the candidate set satisfies the bound")


def check_dominance(F1, F2, b: float | None, grid: Sequence[float]) -> ProbeReport:
    """``F1(b x) >= F2(x)`` at every grid point.

    ``F2`` may be any real function of ``x >= 0``. With ``b=None`` the
    smallest ``b`` from ``{2**k : k = -10..20}`` that works is reported.
    Comparisons allow a relative slack of ``1e-12``.
    """
    g = _grid(grid)
    rhs = _values(F2, g)
    bs = DOMINANCE_BS if b is None else (float(b),)
    witness = None
    for bb in bs:
        if not bb > 0:
            raise ValueError("b must be positive")
        lhs = _values(F1, bb * g)
        ok = _geq(lhs, rhs)
        if ok.all():
            return ProbeReport("pass", None, {"b": bb}, note=NOTE)
        i = int(np.argmin(ok))
        witness = {"x": _num(g[i]), "b": bb, "lhs": _num(lhs[i]), "rhs": _num(rhs[i])}
    return ProbeReport("fail", witness, {}, note="dominance fails for every candidate b")


def check_equivalence(F1, F2, grid: Sequence[float], extra_b: Sequence[float] = ()) -> ProbeReport:
    """Two-sided dominance ``F1(a x) <= F2(x) <= F1(b x)`` on the grid."""
    g = _grid(grid)
    cands = tuple(sorted(set(DOMINANCE_BS) | {float(x) for x in extra_b}))

    def smallest(A, B):
        rhs = _values(B, g)
        last = None
        for bb in cands:
            lhs = _values(A, bb * g)
            ok = _geq(lhs, rhs)
            if ok.all():
                return bb, None
            i = int(np.argmin(ok))
            last = {"x": _num(g[i]), "scale": bb, "lhs": _num(lhs[i]), "rhs": _num(rhs[i])}
        return None, last

    b, wb = smallest(F1, F2)
    bp, wa = smallest(F2, F1)
    if b is None or bp is None:
        w = wb if b is None else wa
        side = "F1(bx) >= F2(x)" if b is None else "F2(bx) >= F1(x)"
        return ProbeReport("fail", dict(w, side=side), {}, note="no candidate scale works")
    return ProbeReport("pass", None, {"a": 1.0 / bp, "b": b}, note=NOTE)


def fit_two_sided_bound(F1, F2, grid: Sequence[float], u0: float | None = None) -> ProbeReport:
    """Fit ``K`` with ``F2/K <= F1 <= K F2`` for grid points ``t >= u0``."""
    g = _grid(grid)
    if u0 is not None:
        g = g[g >= u0]
        if g.size == 0:
            raise ValueError("no grid points at or above u0")
    a = _values(F1, g)
    c = _values(F2, g)
    good = (a > 0) & (c > 0) & np.isfinite(a) & np.isfinite(c)
    if not good.all():
        i = int(np.argmin(good))
        return ProbeReport("fail", {"t": _num(g[i]), "F1": _num(a[i]), "F2": _num(c[i])},
                           note="a function vanishes or is infinite past u0")
    r = a / c
    K = float(max(r.max(), (1.0 / r).max()))
    return ProbeReport("pass", None, {"K": K, "u0": _num(g[0])}, note=NOTE)
