import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from orlicz_kit import fixtures as fx
from orlicz_kit.spaces import (MeasureSpace, OutsideSpaceError, SampledDensity, SpaceMismatchError,
                               StepRearrangement, amemiya_norm, embedding_report, holder_pairing,
                               in_space, luxemburg_norm, modular, rearrange, refinement_trend)
from orlicz_kit.young import catalog

values = arrays(float, st.integers(1, 30), elements=st.floats(-1e3, 1e3))


def density(vals, seed=0):
    w = np.random.default_rng(seed).uniform(0.1, 2.0, len(vals))
    return SampledDensity.on_weights(vals, w)


# -------------------------------------------------------------------- types

def test_measure_space_validation():
    with pytest.raises(ValueError):
        MeasureSpace(("a", "b"), np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        MeasureSpace(("a", "a"), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        MeasureSpace(("a",), np.array([1.0, 2.0]))
    sp = MeasureSpace.uniform(4)
    assert sp.total_mass == pytest.approx(1.0)
    with pytest.raises(ValueError):
        sp.weights[0] = 3.0


def test_density_and_steps_validation():
    with pytest.raises(ValueError):
        SampledDensity(MeasureSpace.uniform(2), np.array([1.0, np.inf]))
    with pytest.raises(ValueError):
        StepRearrangement(np.array([1.0, 2.0]), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        StepRearrangement(np.array([2.0, 1.0]), np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        StepRearrangement(np.array([2.0, 1.0]), np.array([1.0, np.inf]))
    s = StepRearrangement(np.array([2.0, 0.0]), np.array([1.0, np.inf]))
    assert s.infinite_tail and s.finite_part().total_length == 1.0


def test_step_evaluation_is_right_continuous():
    s = StepRearrangement.from_pairs([(3, 1), (2, 1), (1, 1)])
    np.testing.assert_array_equal(s([0.0, 0.999, 1.0, 2.5, 3.0, 10.0]), [3, 3, 2, 1, 0, 0])


# --------------------------------------------------------------- rearrange

def test_rearrange_examples():
    f = SampledDensity.on_weights([1.0, 2.0, 3.0], [1.0, 1.0, 1.0])
    assert rearrange(f).pairs() == [(3.0, 1.0), (2.0, 1.0), (1.0, 1.0)]
    c = SampledDensity.on_weights([-2.5] * 4, [0.5, 1.0, 0.25, 0.25])
    assert rearrange(c).pairs() == [(2.5, 2.0)]
    z = SampledDensity.on_weights([0.0, -1.0, 1.0, 0.0], [1.0, 2.0, 3.0, 4.0])
    assert rearrange(z).pairs() == [(1.0, 5.0), (0.0, 5.0)]


@given(values)
def test_rearrangement_preserves_total_mass_and_is_decreasing(v):
    f = density(v)
    r = rearrange(f)
    assert r.total_length == pytest.approx(f.space.total_mass, rel=1e-12)
    assert np.all(np.diff(r.values) < 0)


@pytest.mark.parametrize("name", ["cosh-1", "xlogx1", "llogl", "lp:3"])
def test_modular_rearrangement_invariance(name, rng):
    psi = catalog(name)
    for _ in range(100):
        f = fx.random_density(rng, n=100)
        a, b = modular(f, psi), modular(rearrange(f), psi)
        assert b == pytest.approx(a, rel=1e-12, abs=0)


# ----------------------------------------------------------------- modular

def test_modular_examples(rng):
    f0 = SampledDensity(MeasureSpace.uniform(5), np.zeros(5))
    assert modular(f0, catalog("cosh-1")) == 0.0
    f = fx.random_density(rng, n=20)
    assert modular(f, catalog("lp:1")) == pytest.approx(np.sum(np.abs(f.values) * f.weights), rel=1e-14)
    one = fx.constant_density(7)
    assert modular(one, catalog("cosh-1")) == pytest.approx(math.cosh(1) - 1, rel=1e-14)


def test_modular_infinity_and_tail():
    f = SampledDensity.on_weights([2.0, 0.5], [1.0, 1.0])
    assert modular(f, catalog("linf")) == math.inf
    s = StepRearrangement(np.array([2.0, 0.0]), np.array([1.0, np.inf]))
    assert modular(s, catalog("cosh-1")) == pytest.approx(math.cosh(2) - 1)


def test_modular_matches_quadrature_only_function(rng):
    from orlicz_kit.young import complementary
    f = fx.random_density(rng, n=10)
    num = complementary(catalog("cosh-1"), known=False)
    assert modular(f, num) == pytest.approx(modular(f, catalog("arcsinh-int")), rel=1e-9)


# ------------------------------------------------------------------- norms

def test_luxemburg_simple_cases(rng):
    f = fx.random_density(rng, n=30)
    a, w = np.abs(f.values), f.weights
    assert luxemburg_norm(f, catalog("lp:1")).norm == pytest.approx(np.sum(a * w), rel=1e-9)
    assert luxemburg_norm(f, catalog("lp:2")).norm == pytest.approx(np.sqrt(np.sum(a * a * w)), rel=1e-9)
    assert luxemburg_norm(f, catalog("linf")).norm == pytest.approx(a.max(), rel=1e-9)
    c = 2.7
    rep = luxemburg_norm(fx.constant_density(5, c), catalog("cosh-1"))
    assert rep.norm == pytest.approx(c / math.acosh(2.0), rel=1e-9)
    assert rep.modular <= 1.0 + 1e-9
    assert luxemburg_norm(fx.constant_density(5, 0.0), catalog("cosh-1")).norm == 0.0


def test_luxemburg_on_steps_matches_density(rng):
    f = fx.random_density(rng, n=40)
    for name in ("cosh-1", "xlogx1", "llogl"):
        a = luxemburg_norm(f, catalog(name)).norm
        b = luxemburg_norm(rearrange(f), catalog(name)).norm
        assert b == pytest.approx(a, rel=1e-9)


def test_outside_space():
    # a huge cell needs scale 1e150 times max|f|, beyond the cap
    with pytest.raises(OutsideSpaceError):
        luxemburg_norm(SampledDensity.on_weights([1.0], [1e301]), catalog("lp:2"))
    with pytest.raises(OutsideSpaceError):
        luxemburg_norm(SampledDensity.on_weights([1.0], [1e10]), catalog("lp:2"), cap=10.0)
    rep = luxemburg_norm(SampledDensity.on_weights([1e200], [1.0]), catalog("lp:2"))
    assert rep.norm == pytest.approx(1e200, rel=1e-9)


@given(values, st.floats(-1e3, 1e3).filter(lambda c: abs(c) > 1e-6))
def test_homogeneity(v, c):
    f = density(v)
    psi = catalog("xlogx1")
    a = luxemburg_norm(f.scaled(c), psi).norm
    b = abs(c) * luxemburg_norm(f, psi).norm
    assert a == pytest.approx(b, rel=1e-9, abs=1e-300)


@given(values, st.integers(0, 2**31))
def test_triangle_inequality(v, seed):
    f = density(v, seed)
    g = f.with_values(np.random.default_rng(seed).normal(0, 10, v.size))
    for name in ("cosh-1", "xlogx1"):
        psi = catalog(name)
        lhs = luxemburg_norm(f.with_values(f.values + g.values), psi).norm
        rhs = luxemburg_norm(f, psi).norm + luxemburg_norm(g, psi).norm
        assert lhs <= rhs * (1 + 1e-9)


@given(values, st.integers(0, 2**31))
def test_lattice_monotonicity(v, seed):
    g = density(v, seed)
    shrink = np.random.default_rng(seed).uniform(0, 1, v.size)
    f = g.with_values(g.values * shrink)
    psi = catalog("cosh-1")
    assert luxemburg_norm(f, psi).norm <= luxemburg_norm(g, psi).norm * (1 + 1e-9)


@given(arrays(float, st.integers(1, 20), elements=st.floats(0, 1e6)))
def test_delta2_membership_tests_agree(v):
    rep = in_space(density(v), catalog("xlogx1"))
    assert rep["modular_finite"] == rep["scaled_modular_finite"]


def test_amemiya_identity_limit(rng):
    f = fx.random_density(rng, n=25)
    rep = amemiya_norm(f, catalog("lp:1"))
    assert rep.at_cap
    assert rep.norm == pytest.approx(np.sum(np.abs(f.values) * f.weights), rel=1e-6)


def test_amemiya_quadratic_is_twice_l2(rng):
    f = fx.random_density(rng, n=25)
    l2 = np.sqrt(np.sum(f.values ** 2 * f.weights))
    assert amemiya_norm(f, catalog("lp:2")).norm == pytest.approx(2 * l2, rel=1e-8)


def test_amemiya_between_one_and_two_luxemburg(rng):
    psi = catalog("xlogx1")
    for _ in range(100):
        f = fx.random_density(rng)
        if not np.any(f.values):
            continue
        L = luxemburg_norm(f, psi).norm
        A = amemiya_norm(f, psi).norm
        assert L * (1 - 1e-9) <= A <= 2 * L * (1 + 1e-9)


def test_amemiya_zero():
    assert amemiya_norm(fx.constant_density(3, 0.0), catalog("cosh-1")).norm == 0.0


# ------------------------------------------------------------------ holder

def test_holder_examples():
    f = fx.constant_density(4)
    z = f.with_values(np.zeros(4))
    rep = holder_pairing(f, z, catalog("cosh-1"))
    assert rep.pairing == 0.0 and rep.bound == 0.0 and rep.holds
    rep = holder_pairing(f, f, catalog("lp:2"))
    assert rep.pairing == pytest.approx(1.0)
    # t**2 pairs with t**2 / 4, whose norm of 1 is 1/2
    assert rep.norm_g == pytest.approx(0.5, rel=1e-8)
    assert rep.bound == pytest.approx(1.0, rel=1e-8) and rep.holds


def test_holder_mismatched_spaces():
    with pytest.raises(SpaceMismatchError):
        holder_pairing(fx.constant_density(3), fx.constant_density(4), catalog("cosh-1"))


@given(st.integers(0, 2**31))
def test_holder_random_pairs(seed):
    rng = np.random.default_rng(seed)
    f = fx.random_density(rng)
    g = f.with_values(rng.normal(0, 3, f.values.size))
    assert holder_pairing(f, g, catalog("cosh-1")).holds


# --------------------------------------------------------------- embedding

def test_embedding_constant_one():
    rep = embedding_report(fx.constant_density(6), (2.0,))
    assert rep.chain_ok
    assert rep.norms[-1] == pytest.approx(1.0)
    assert all(0 < x < math.inf for x in rep.norms)


def test_embedding_requires_probability_space():
    with pytest.raises(ValueError):
        embedding_report(SampledDensity.on_weights([1.0], [2.0]))


def lexp_modular_neg_log(lam):
    return (1 - math.exp(-lam) * (1 + lam)) / lam + lam * math.exp(-lam) / (lam - 1)


def test_neg_log_refinement():
    from scipy.integrate import quad
    from scipy.optimize import brentq
    # oracle: modular of -log(u)/lam by scipy quadrature
    lam = 1.7
    q, _ = quad(lambda u: catalog("phi-exp")(-math.log(u) / lam), 0, 1, limit=200)
    assert q == pytest.approx(lexp_modular_neg_log(lam), rel=1e-8)
    true = brentq(lambda x: lexp_modular_neg_log(x) - 1, 1.0001, 50)
    reps = [embedding_report(fx.neg_log_cells(n)) for n in (10, 100, 1000, 10000)]
    linf = [r.norms[0] for r in reps]
    lexp = [r.norms[1] for r in reps]
    assert refinement_trend(linf)["diverging"]
    assert np.all(np.diff(lexp) > 0) and max(lexp) <= true
    assert not refinement_trend(lexp)["diverging"]
    assert all(r.chain_ok for r in reps)


def test_inv_sqrt_refinement():
    reps = [embedding_report(fx.inv_sqrt_cells(n)) for n in (10, 100, 1000, 10000, 100000)]
    l2 = [r.norms[2] for r in reps]
    l1 = [r.norms[-1] for r in reps]
    assert refinement_trend(l2)["diverging"]
    np.testing.assert_allclose(l1, 2.0, rtol=1e-12)
    # squared norm grows like log n
    sq = np.square(l2)
    np.testing.assert_allclose(np.diff(sq), math.log(10), rtol=0.05)
