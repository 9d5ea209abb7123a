import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from orlicz_kit.young import (CATALOG_NAMES, DomainError, ProbeReport, catalog, check_delta2,
                              check_dominance, check_equivalence, check_nabla2, complementary,
                              entropic_function, evaluate, fit_two_sided_bound, from_density,
                              quadrature_value)

NAMES = ["cosh-1", "arcsinh-int", "xlogx1", "llogl", "phi-exp", "exp-t-1", "x1logx1",
         "power:1", "power:1.5", "power:3", "lp:1", "lp:2", "lp:4"]
PAIRS = [("cosh-1", "arcsinh-int"), ("exp-t-1", "x1logx1"), ("llogl", "phi-exp"),
         ("power:3", "power:1.5"), ("power:2", "power:2"), ("lp:1", "linf")]


def legendre(psi, t, s_max, n=400_001):
    s = np.linspace(0.0, s_max, n)
    vals = psi.values(s)
    return np.array([np.max(s * ti - vals) for ti in np.atleast_1d(t)])


# ---------------------------------------------------------------- evaluation

@pytest.mark.parametrize("name", NAMES + ["linf"])
def test_zero_at_zero(name):
    assert catalog(name)(0.0) == 0.0


def test_llogl_vanishes_on_unit_interval():
    psi = catalog("llogl")
    s = np.linspace(0, 1, 101)
    assert np.all(psi.values(s) == 0.0)
    assert all(quadrature_value(psi, x) == 0.0 for x in s[::10])


def test_exp_t_minus_one_at_one():
    psi = catalog("exp-t-1")
    assert psi(1.0) == pytest.approx(math.e - 2.0, rel=1e-15)
    assert quadrature_value(psi, 1.0) == pytest.approx(math.e - 2.0, rel=1e-10)


@pytest.mark.parametrize("name", NAMES)
def test_closed_form_matches_quadrature(name):
    psi = catalog(name)
    for s in (1e-3, 0.2, 0.9, 1.0, 1.7, 4.0, 9.0):
        q = quadrature_value(psi, s)
        assert q == pytest.approx(psi(s), rel=1e-9, abs=1e-13)


@pytest.mark.parametrize("name", NAMES)
def test_monotone_and_midpoint_convex(name):
    psi = catalog(name)
    s = np.linspace(0.0, 12.0, 601)
    v = psi.values(s)
    assert np.all(np.diff(v) >= 0)
    mid = psi.values(0.5 * (s[:-1] + s[1:]))
    assert np.all(mid <= 0.5 * (v[:-1] + v[1:]) * (1 + 1e-12) + 1e-300)


def test_negative_argument_raises():
    with pytest.raises(DomainError):
        catalog("cosh-1")(-1.0)
    with pytest.raises(DomainError):
        evaluate(catalog("lp:2"), -1e-9)
    with pytest.raises(DomainError):
        catalog("lp:2").values([1.0, -2.0])


def test_infinite_density_gives_infinite_value():
    linf = catalog("linf")
    assert quadrature_value(linf, 0.7) == 0.0
    assert quadrature_value(linf, 1.5) == math.inf
    custom = from_density(lambda u: 0.0 if u <= 2 else math.inf, name="jump")
    assert custom(2.0) == 0.0 and custom(2.1) == math.inf


def test_custom_density_quadrature():
    f = from_density(lambda u: u)
    assert f(3.0) == pytest.approx(4.5, rel=1e-12)
    np.testing.assert_allclose(f.values([1.0, 2.0, 0.5]), [0.5, 2.0, 0.125], rtol=1e-12)
    with pytest.raises(ValueError):
        from_density(lambda u: 1.0)
    with pytest.raises(ValueError):
        from_density(lambda u: -u)


def test_catalog_names():
    assert "power:p" in CATALOG_NAMES
    assert catalog("power:2.0").name == "power:2"
    assert catalog("power:3").conjugate == "power:1.5"
    assert catalog("power:1").conjugate == "linf"
    for bad in ("nope", "power:0.5", "lp:x"):
        with pytest.raises(KeyError):
            catalog(bad)


# --------------------------------------------------------------- complements

def test_numeric_complementary_of_cosh_is_arcsinh_integral():
    phi = complementary(catalog("cosh-1"), known=False)
    assert phi.closed_form is None
    x = np.linspace(0.0, 10.0, 201)[1:]
    ref = catalog("arcsinh-int").values(x)
    assert np.max(np.abs(phi.values(x) - ref) / ref) < 1e-6


def test_complementary_of_identity_is_indicator():
    phi = complementary(catalog("lp:1"), known=False)
    np.testing.assert_array_equal(phi.values([0.0, 0.4, 1.0]), 0.0)
    assert phi(1.0 + 1e-6) == math.inf
    assert phi(3.0) == math.inf


def test_complementary_power_against_legendre_oracle():
    phi = complementary(catalog("power:3"), known=False)
    t = np.linspace(0.05, 5.0, 25)
    oracle = legendre(catalog("power:3"), t, 3.0)
    np.testing.assert_allclose(phi.values(t), oracle, rtol=1e-6)
    np.testing.assert_allclose(oracle, t ** 1.5 / 1.5, rtol=1e-6)


@pytest.mark.parametrize("name", ["cosh-1", "xlogx1", "x1logx1", "exp-t-1"])
def test_legendre_oracle_for_numeric_complementary(name):
    psi = catalog(name)
    phi = complementary(psi, known=False)
    t = np.array([0.3, 1.0, 2.5])
    oracle = legendre(psi, t, 40.0)
    np.testing.assert_allclose(phi.values(t), oracle, rtol=1e-6)


@pytest.mark.parametrize("a,b", PAIRS)
def test_known_conjugates_against_numeric(a, b):
    known = complementary(catalog(a))
    assert known.name == catalog(b).name
    if b == "linf":
        return
    numeric = complementary(catalog(a), known=False)
    t = np.array([0.1, 0.7, 1.3, 3.0])
    np.testing.assert_allclose(numeric.values(t), known.values(t), rtol=1e-8)


def test_phi_exp_complement_is_llogl():
    numeric = complementary(catalog("phi-exp"), known=False)
    t = np.array([0.5, 1.0, 2.0, 5.0])
    np.testing.assert_allclose(numeric.values(t), catalog("llogl").values(t), rtol=1e-8, atol=1e-12)


@pytest.mark.parametrize("name", ["cosh-1", "exp-t-1", "power:3", "xlogx1"])
def test_double_complement_returns_original(name):
    psi = catalog(name)
    back = complementary(complementary(psi, known=False), known=False)
    s = np.array([0.2, 1.0, 2.5])
    np.testing.assert_allclose(back.values(s), psi.values(s), rtol=1e-7)


@pytest.mark.parametrize("a,b", PAIRS)
@given(x=st.floats(0.0, 12.0), y=st.floats(0.0, 12.0))
def test_young_inequality(a, b, x, y):
    psi, phi = catalog(a), catalog(b)
    assert x * y <= psi(x) + phi(y) + 1e-9 * max(1.0, x * y)


@pytest.mark.parametrize("a,b", PAIRS)
@given(x=st.floats(1e-3, 10.0))
def test_young_equality_at_density(a, b, x):
    psi, phi = catalog(a), catalog(b)
    if abs(x - 1.0) < 1e-9:
        return
    y = psi.density(x)
    assert abs(psi(x) + phi(y) - x * y) <= 1e-8 * max(1.0, x * y)


# -------------------------------------------------------------------- probes

def test_delta2_xlogx1_passes_with_small_constant():
    rep = check_delta2(catalog("xlogx1"), np.geomspace(0.01, 100, 300), globally=True)
    assert rep.verdict == "pass" and rep.constants["c"] <= 4.0


def test_delta2_cosh_fails_with_witness():
    rep = check_delta2(catalog("cosh-1"), np.geomspace(0.01, 100, 300))
    assert rep.verdict == "fail" and rep.witness is not None


def test_delta2_identity_is_exactly_two():
    rep = check_delta2(catalog("lp:1"), np.geomspace(0.01, 100, 50), globally=True)
    assert rep.verdict == "pass" and rep.constants["c"] == 2.0


def test_delta2_rejects_empty_grid():
    with pytest.raises(ValueError):
        check_delta2(catalog("lp:1"), [])


@pytest.mark.parametrize("name", ["cosh-1", "exp-t-1"])
def test_nabla2_passes_on_large_grid(name):
    rep = check_nabla2(catalog(name), np.linspace(1, 50, 200))
    assert rep.verdict == "pass" and rep.constants["l"] <= 4


def test_nabla2_identity_fails():
    rep = check_nabla2(catalog("lp:1"), np.linspace(1, 50, 200))
    assert rep.verdict == "fail" and rep.witness is not None


def test_dominance_examples():
    grid = np.geomspace(1e-3, 1e3, 400)
    # arcsinh integral beats k x log x at scale b = k once k exceeds e
    rep = check_dominance(catalog("arcsinh-int"), entropic_function(3.0), 3.0, grid)
    assert rep.verdict == "pass"
    assert check_dominance(catalog("cosh-1"), catalog("cosh-1"), 1.0, grid).passed
    rep = check_dominance(catalog("lp:1"), catalog("lp:2"), 5.0, grid)
    assert rep.verdict == "fail" and rep.witness["x"] > 5.0


def test_equivalence_examples():
    grid = np.geomspace(1e-3, 50, 300)
    rep = check_equivalence(catalog("cosh-1"), catalog("exp-t-1"), grid)
    assert rep.passed and rep.constants["a"] > 0 and rep.constants["b"] > 0
    assert check_equivalence(catalog("x1logx1"), catalog("xlogx1"), grid).passed
    assert not check_equivalence(catalog("lp:1"), catalog("lp:2"), np.geomspace(1e-8, 1e8, 200)).passed


def test_equivalence_constants_are_valid():
    grid = np.geomspace(1e-3, 30, 200)
    F1, F2 = catalog("cosh-1"), catalog("exp-t-1")
    c = check_equivalence(F1, F2, grid).constants
    assert np.all(F1.values(c["a"] * grid) <= F2.values(grid) * (1 + 1e-12))
    assert np.all(F2.values(grid) <= F1.values(c["b"] * grid) * (1 + 1e-12))


def test_two_sided_bound_phi_exp_vs_exp():
    grid = np.geomspace(1e-2, 200, 400)
    rep = fit_two_sided_bound(catalog("phi-exp"), catalog("exp-t-1"), grid, u0=1.0)
    K = rep.constants["K"]
    assert rep.passed and K == pytest.approx(math.e, rel=1e-12)
    t = grid[grid >= 1.0]
    a, c = catalog("phi-exp").values(t), catalog("exp-t-1").values(t)
    assert np.all(c / K <= a * (1 + 1e-12)) and np.all(a <= K * c * (1 + 1e-12))


def test_probe_report_contract():
    with pytest.raises(ValueError):
        ProbeReport("fail", None, {})
    with pytest.raises(ValueError):
        ProbeReport("maybe", None, {})
    rep = check_delta2(catalog("cosh-1"), np.geomspace(0.01, 100, 100))
    d = json.loads(rep.to_json())
    assert {"verdict", "witness", "constants"} <= set(d)
