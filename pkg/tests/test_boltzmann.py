import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orlicz_kit import fixtures as fx
from orlicz_kit.boltzmann import (INVARIANT_NAMES, DiscreteKineticState, StepSizeError,
                                  entropy_rate, equilibrium, evolve, functional_sweep, invariants,
                                  step)
from orlicz_kit.spaces import SampledDensity

positive = st.floats(0.05, 5.0)


def test_state_validation():
    with pytest.raises(ValueError):
        DiscreteKineticState("carleman", (1.0, 0.0))
    with pytest.raises(ValueError):
        DiscreteKineticState("carleman", (1.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        DiscreteKineticState("lorentz", (1.0, 1.0))
    with pytest.raises(ValueError):
        step(DiscreteKineticState("carleman", (1.0, 1.0)), 0.0)


def test_fixed_point():
    s = DiscreteKineticState("carleman", (1.0, 1.0))
    out = step(s, 1e-3)
    assert max(abs(a - 1.0) for a in out.densities) <= 1e-14
    assert out.time == 1e-3


def test_conservation_over_many_steps():
    s = DiscreteKineticState("carleman", (1.5, 0.5))
    for _ in range(10_000):
        s = step(s)
    assert abs(sum(s.densities) - 2.0) <= 1e-12


def test_invariant_drift_per_thousand_steps():
    for model, f0 in (("carleman", (1.5, 0.5)), ("broadwell", (1.5, 0.5, 1.0, 1.0))):
        tr = evolve(DiscreteKineticState(model, f0), 1.0)
        assert len(tr) == 1001
        assert tr.invariant_drift() < 1e-12


def test_convergence_against_fine_reference():
    s = DiscreteKineticState("carleman", (1.5, 0.5))
    tr = evolve(s, 20.0, 1e-3)
    ref = evolve(s, 20.0, 1e-5)
    # the fine run accumulates about 1e-12 of rounding over 2e6 steps
    assert np.max(np.abs(tr.states[-1] - ref.states[-1])) < 1e-10
    assert tr.residual() < 1e-8
    assert ref.residual() < 1e-8


def test_h_theorem_carleman():
    tr = evolve(DiscreteKineticState("carleman", (1.5, 0.5)), 20.0)
    assert np.all(np.diff(tr.times) > 0)
    assert np.all(tr.entropy_rate <= 0)
    far = tr.h_plus[:-1] > 1e-10
    assert far.sum() > 100
    assert np.all(np.diff(tr.h_plus)[far] < 0)
    fd = np.diff(tr.h_plus) / np.diff(tr.times)
    assert np.all(fd <= 1e-9)
    assert abs(tr.h_plus[-1]) < 1e-10


def test_equilibrium_trajectory_is_constant():
    tr = evolve(DiscreteKineticState("carleman", (1.0, 1.0)), 2.0)
    assert np.ptp(tr.h_plus) == 0.0
    assert np.all(tr.entropy_rate == 0.0)


def test_llog1_modular_bound():
    tr = evolve(DiscreteKineticState("carleman", (3.0, 0.2)), 10.0)
    assert np.all(tr.llog1_modular <= tr.llog1_bound())
    assert tr.llog1_bound() == pytest.approx(tr.llog1_modular[0] + math.log(4.0) * 3.2)


@settings(max_examples=25)
@given(positive, positive)
def test_rate_vanishes_only_at_balance(u, v):
    r = entropy_rate("carleman", np.array([u, v]))[0]
    assert r <= 0
    if abs(u - v) > 1e-6:
        assert r < 0


@settings(max_examples=25)
@given(positive, positive, positive, positive)
def test_broadwell_h_theorem(a, b, c, d):
    s = DiscreteKineticState("broadwell", (a, b, c, d))
    eq = equilibrium("broadwell", s.array)
    assert np.all(eq > 0)
    np.testing.assert_allclose(invariants("broadwell", eq)[0], s.invariants, atol=1e-12)
    assert eq[0] * eq[1] == pytest.approx(eq[2] * eq[3], rel=1e-12)
    tr = evolve(s, 5.0, 1e-2)
    assert np.all(tr.entropy_rate <= 1e-15)
    assert np.all(np.diff(tr.h_plus) <= 1e-12)
    assert tr.invariant_drift() < 1e-11


def test_broadwell_relaxes():
    tr = evolve(DiscreteKineticState("broadwell", (1.5, 0.5, 1.0, 1.0)), 30.0)
    assert tr.residual() < 1e-8


def test_step_halving_on_positivity_loss():
    s = DiscreteKineticState("carleman", (50.0, 1e-3))
    with pytest.raises(StepSizeError):
        step(s, 1.0)
    tr = evolve(s, 1.0, 1.0)
    assert tr.dt < 1.0 and np.all(tr.states > 0)


def test_trajectory_csv():
    tr = evolve(DiscreteKineticState("broadwell", (1.5, 0.5, 1.0, 1.0)), 0.01)
    rows = list(csv.reader(io.StringIO(tr.to_csv())))
    assert rows[0] == (["t", "f1", "f2", "f3", "f4", "H_plus", "mass"]
                       + list(INVARIANT_NAMES["broadwell"]) + ["llog1_modular"])
    assert len(rows) == len(tr) + 1
    assert len(list(csv.reader(io.StringIO(tr.to_csv(every=5))))) == 4


# ------------------------------------------------------------------ sweeps

def test_functional_sweep_maxwellians():
    temps = (0.5, 1.0, 2.0)
    fam = [(f"T={T}", f) for T, f in zip(temps, fx.maxwellian_family(temps))]
    rep = functional_sweep(fam)
    H = [r["H"] for r in rep.rows]
    assert H[0] < H[1] < H[2]
    for T, h in zip(temps, H):
        assert h == pytest.approx(0.5 * math.log(2 * math.pi * math.e * T), rel=1e-6)
    assert all(r["member"] for r in rep.rows)
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0] == rep.columns() and len(rows) == 4


def test_functional_sweep_uniform_and_flagged():
    bad = SampledDensity.on_weights([1e200, 1.0], [1e200, 1.0])
    rep = functional_sweep([("uniform", fx.uniform_density(10)), ("bad", bad)])
    assert rep.rows[0]["H"] == 0.0
    assert rep.rows[1]["member"] is False
    assert len(rep.rows) == 2
    with pytest.raises(TypeError):
        functional_sweep([np.ones(3)])
