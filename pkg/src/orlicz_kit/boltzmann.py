"""Discrete-velocity kinetic models with H-functional diagnostics.

Carleman (two velocities)::

    du/dt = v**2 - u**2,  dv/dt = u**2 - v**2

Broadwell-type four-velocity exchange ``(1, 2) <-> (3, 4)``::

    df1/dt = df2/dt = f3 f4 - f1 f2,  df3/dt = df4/dt = f1 f2 - f3 f4

Both conserve linear invariants and have a nonincreasing ``sum f log f``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import xlogy

from . import kernels
from .entropy import EPS_LADDER, continuous_entropy, membership_check, truncated_entropy
from .spaces import SampledDensity

MODELS = {"carleman": kernels.MODEL_CARLEMAN, "broadwell": kernels.MODEL_BROADWELL}
DIMENSIONS = {"carleman": 2, "broadwell": 4}
INVARIANT_NAMES = {"carleman": ("u_plus_v",),
                   "broadwell": ("f1_minus_f2", "f3_minus_f4", "f1_plus_f3")}
DEFAULT_DT = 1e-3
MAX_HALVINGS = 30


class StepSizeError(ArithmeticError):
    """An integration step produced a nonpositive density."""


def invariants(model: str, f: np.ndarray) -> np.ndarray:
    """Conserved linear quantities, one column per name in ``INVARIANT_NAMES``."""
    f = np.atleast_2d(f)
    if model == "carleman":
        return f.sum(axis=1, keepdims=True)
    return np.column_stack([f[:, 0] - f[:, 1], f[:, 2] - f[:, 3], f[:, 0] + f[:, 2]])


def equilibrium(model: str, f) -> np.ndarray:
    """Detailed-balance state with the same invariants as ``f``."""
    f = np.asarray(f, dtype=float)
    if model == "carleman":
        m = 0.5 * (f[0] + f[1])
        return np.array([m, m])
    c1, c2, s = f[0] - f[1], f[2] - f[3], f[0] + f[2]
    a = s * (s - c2) / (2.0 * s - c1 - c2)
    return np.array([a, a - c1, s - a, s - a - c2])


def entropy_rate(model: str, f: np.ndarray) -> np.ndarray:
    """Closed-form ``d/dt sum f log f``; never positive."""
    f = np.atleast_2d(f)
    if model == "carleman":
        u, v = f[:, 0], f[:, 1]
        return (v * v - u * u) * (np.log(u) - np.log(v))
    g = f[:, 2] * f[:, 3] - f[:, 0] * f[:, 1]
    return g * (np.log(f[:, 0]) + np.log(f[:, 1]) - np.log(f[:, 2]) - np.log(f[:, 3]))


@dataclass(frozen=True)
class DiscreteKineticState:
    model: str
    densities: tuple
    time: float = 0.0

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; choose from {sorted(MODELS)}")
        d = tuple(float(x) for x in self.densities)
        if len(d) != DIMENSIONS[self.model]:
            raise ValueError(f"{self.model} needs {DIMENSIONS[self.model]} densities")
        if not all(math.isfinite(x) and x > 0 for x in d):
            raise ValueError("densities must be positive and finite")
        object.__setattr__(self, "densities", d)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.densities)

    @property
    def invariants(self) -> np.ndarray:
        return invariants(self.model, self.array)[0]


def step(state: DiscreteKineticState, dt: float = DEFAULT_DT) -> DiscreteKineticState:
    """One RK4 step.

    Raises
    ------
    StepSizeError
        If the step leaves the positive cone; the caller should halve ``dt``.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    out = kernels.rk4_run(MODELS[state.model], state.array, dt, 1)[-1]
    if not np.all(out > 0):
        raise StepSizeError(f"nonpositive density after step dt={dt:g}")
    return DiscreteKineticState(state.model, tuple(out), state.time + dt)


@dataclass
class Trajectory:
    model: str
    times: np.ndarray
    states: np.ndarray
    dt: float
    h_plus: np.ndarray = field(init=False)
    mass: np.ndarray = field(init=False)
    invariants: np.ndarray = field(init=False)
    llog1_modular: np.ndarray = field(init=False)

    def __post_init__(self):
        f = self.states
        self.h_plus = xlogy(f, f).sum(axis=1)
        self.mass = f.sum(axis=1)
        self.invariants = invariants(self.model, f)
        self.llog1_modular = (f * np.log1p(f)).sum(axis=1)

    def __len__(self):
        return self.times.size

    @property
    def entropy_rate(self) -> np.ndarray:
        return entropy_rate(self.model, self.states)

    @property
    def final(self) -> DiscreteKineticState:
        return DiscreteKineticState(self.model, tuple(self.states[-1]), float(self.times[-1]))

    def residual(self) -> float:
        """Max-norm distance of the last state from the matching equilibrium."""
        return float(np.max(np.abs(self.states[-1] - equilibrium(self.model, self.states[0]))))

    def invariant_drift(self) -> float:
        """Largest deviation of the mass or any invariant from its start value."""
        inv = np.column_stack([self.mass, self.invariants])
        return float(np.max(np.abs(inv - inv[0])))

    def llog1_bound(self) -> float:
        """``initial modular + K * mass`` with ``K = log(1 + max initial density)``."""
        K = math.log1p(float(self.states[0].max()))
        return float(self.llog1_modular[0] + K * self.mass[0])

    def header(self) -> list:
        dens = [f"f{i + 1}" for i in range(self.states.shape[1])]
        return (["t"] + dens + ["H_plus", "mass"] + list(INVARIANT_NAMES[self.model])
                + ["llog1_modular"])

    def to_csv(self, every: int = 1) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header())
        for i in range(0, len(self), every):
            row = [self.times[i], *self.states[i], self.h_plus[i], self.mass[i],
                   *self.invariants[i], self.llog1_modular[i]]
            w.writerow([repr(float(x)) for x in row])
        return buf.getvalue()


def evolve(state: DiscreteKineticState, T: float, dt: float = DEFAULT_DT) -> Trajectory:
    """Integrate to horizon ``T`` with fixed RK4 steps.

    If positivity is lost anywhere, ``dt`` is halved and the run restarted
    (at most ``MAX_HALVINGS`` times).
    """
    if not T >= 0 or not dt > 0:
        raise ValueError("need T >= 0 and dt > 0")
    for _ in range(MAX_HALVINGS + 1):
        n = int(round(T / dt))
        out = kernels.rk4_run(MODELS[state.model], state.array, dt, n)
        if np.all(out > 0) and np.all(np.isfinite(out)):
            times = state.time + dt * np.arange(n + 1)
            return Trajectory(state.model, times, out, dt)
        dt *= 0.5
    raise StepSizeError("positivity lost even after repeated step halving")


# ------------------------------------------------------------------- sweeps

@dataclass
class SweepReport:
    eps_ladder: tuple
    rows: list

    def columns(self) -> list:
        cols = ["name", "l1", "llog1", "llogl", "member", "H", "H_plus", "jensen_lower"]
        cols += [f"H_eps[{e:g}]" for e in self.eps_ladder]
        cols += [f"trunc[{e:g}]" for e in self.eps_ladder]
        cols += [f"trunc_mass[{e:g}]" for e in self.eps_ladder]
        return cols

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = self.columns()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for row in self.rows:
            w.writerow([_cell(row[c]) for c in cols])
        return buf.getvalue()


def _cell(x):
    if isinstance(x, bool) or isinstance(x, str):
        return str(x)
    if x is None:
        return ""
    return repr(float(x))


def functional_sweep(family: Sequence, eps_ladder: Sequence[float] = EPS_LADDER) -> SweepReport:
    """Entropy and membership diagnostics for each ``(name, density)``.

    Non-members are flagged in the ``member`` column, never dropped.
    """
    ladder = tuple(sorted((float(e) for e in eps_ladder), reverse=True))
    rows = []
    for i, item in enumerate(family):
        name, f = item if isinstance(item, tuple) else (f"f{i}", item)
        if not isinstance(f, SampledDensity):
            raise TypeError("family members must be SampledDensity")
        mem = membership_check(f)
        rep = continuous_entropy(f, ladder)
        row = {"name": name, "l1": mem.l1, "llog1": mem.llog1, "llogl": mem.llogl,
               "member": mem.member, "H": rep.H, "H_plus": rep.H_plus,
               "jensen_lower": rep.jensen_lower}
        for e, v in rep.H_eps:
            row[f"H_eps[{e:g}]"] = v
        for e in ladder:
            t = truncated_entropy(f, e)
            row[f"trunc[{e:g}]"] = t.value
            row[f"trunc_mass[{e:g}]"] = t.mass
        rows.append(row)
    return SweepReport(ladder, rows)
