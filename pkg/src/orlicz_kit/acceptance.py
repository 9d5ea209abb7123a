"""The acceptance battery: twelve end-to-end numerical checks.

Each check returns a :class:`CheckResult`; :func:`run_all` runs them in a
fixed order (optionally on a thread pool) and returns the results in that
order, so reports are reproducible.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import logm
from scipy.optimize import brentq

from . import fixtures as fx
from .boltzmann import DiscreteKineticState, evolve
from .entropy import continuous_entropy, h_epsilon, h_plus, jensen_lower_bound
from .quantum import (l1_subset_llog1_check, llogl_membership, moment_transform,
                      regularity_probe, regularized_entropy, singular_values,
                      von_neumann_entropy)
from .spaces import (StepRearrangement, embedding_report, holder_pairing, luxemburg_norm,
                     modular, rearrange, refinement_trend)
from .young import catalog, complementary

SEED = 20240611


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}"

    def to_dict(self) -> dict:
        return {"number": self.number, "name": self.name, "passed": self.passed,
                "seconds": round(self.seconds, 3), "details": self.details}


def _rng(k: int) -> np.random.Generator:
    return np.random.default_rng([SEED, k])


def _rel(a, b) -> np.ndarray:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return np.abs(a - b) / np.maximum(np.abs(b), 1e-300)


# 1 ---------------------------------------------------------------------

def check_complementary_pair() -> dict:
    t0 = time.perf_counter()
    phi = complementary(catalog("cosh-1"), known=False)
    x = np.geomspace(1e-3, 10.0, 200)
    err = float(np.max(_rel(phi.values(x), catalog("arcsinh-int").values(x))))
    elapsed = time.perf_counter() - t0
    return {"passed": err < 1e-6 and elapsed < 5.0, "max_rel_error": err, "runtime_s": elapsed}


# 2 ---------------------------------------------------------------------

YOUNG_PAIRS = (("cosh-1", "arcsinh-int"), ("exp-t-1", "x1logx1"), ("llogl", "phi-exp"),
               ("phi-exp", "llogl"), ("power:3", "power:1.5"), ("power:1.5", "power:3"),
               ("lp:1", "linf"), ("xlogx1", None))


def check_young_inequality(n: int = 10_000) -> dict:
    rng = _rng(2)
    out = {}
    ok = True
    for name, conj in YOUNG_PAIRS:
        psi = catalog(name)
        phi = catalog(conj) if conj else complementary(psi, known=False)
        x = 10.0 ** rng.uniform(-3, 1.2, n)
        y = 10.0 ** rng.uniform(-3, 1.2, n)
        with np.errstate(invalid="ignore"):
            gap = psi.values(x) + phi.values(y) - x * y
        viol = int(np.sum(gap < -1e-9 * np.maximum(1.0, x * y)))
        # equality where y is the density at x (continuity points only)
        xs = 10.0 ** rng.uniform(-3, 1.2, 2000)
        xs = xs[np.abs(xs - 1.0) > 1e-6]
        ys = np.array([psi.density(float(s)) for s in xs])
        eq = np.abs(psi.values(xs) + phi.values(ys) - xs * ys) / np.maximum(1.0, xs * ys)
        eq_err = float(np.max(eq))
        out[f"{name}|{phi.name}"] = {"violations": viol, "equality_max_err": eq_err}
        ok &= viol == 0 and eq_err <= 1e-8
    return {"passed": ok, "pairs": out}


# 3 ---------------------------------------------------------------------

def check_lp_norms() -> dict:
    rng = _rng(3)
    worst = {}
    for p in (1, 2, 4):
        psi = catalog(f"lp:{p}")
        err = 0.0
        for _ in range(100):
            f = fx.random_density(rng)
            exact = float(np.sum(np.abs(f.values) ** p * f.weights) ** (1.0 / p))
            got = luxemburg_norm(f, psi).norm
            err = max(err, abs(got - exact) / exact if exact > 0 else abs(got))
        worst[p] = err
    return {"passed": all(v < 1e-8 for v in worst.values()), "max_rel_error": worst}


# 4 ---------------------------------------------------------------------

def check_rearrangement_invariance() -> dict:
    rng = _rng(4)
    worst = {}
    for name in ("cosh-1", "xlogx1", "llogl"):
        psi = catalog(name)
        err = 0.0
        for _ in range(100):
            f = fx.random_density(rng)
            a, b = modular(f, psi), modular(rearrange(f), psi)
            err = max(err, abs(a - b) / max(abs(a), 1e-300) if a else abs(b))
        worst[name] = err
    return {"passed": all(v <= 1e-12 for v in worst.values()), "max_rel_diff": worst}


# 5 ---------------------------------------------------------------------

def check_holder_pairing() -> dict:
    rng = _rng(5)
    psi = catalog("cosh-1")
    violations, tightest = 0, 0.0
    for _ in range(200):
        f = fx.random_density(rng)
        g = f.with_values(rng.lognormal(0.0, 1.0, f.values.size) * rng.choice([-1, 1], f.values.size))
        rep = holder_pairing(f, g, psi)
        violations += not rep.holds
        if rep.bound > 0:
            tightest = max(tightest, rep.pairing / rep.bound)
    return {"passed": violations == 0, "violations": violations, "max_pairing_over_bound": tightest}


# 6 ---------------------------------------------------------------------

def lexp_norm_neg_log() -> float:
    """Exact exponential-Zygmund Luxemburg norm of ``-log u`` on ``(0, 1]``."""
    def m(lam):
        return (1.0 - math.exp(-lam) * (1.0 + lam)) / lam + lam * math.exp(-lam) / (lam - 1.0)
    return brentq(lambda lam: m(lam) - 1.0, 1.0 + 1e-9, 50.0, xtol=1e-14)


LEVELS = (10, 100, 1000, 10_000, 100_000)


def check_embedding_chain() -> dict:
    rng = _rng(6)
    bounded = [fx.constant_density(8, 1.0)] + [fx.random_probability_density(rng) for _ in range(10)]
    chain_ok = all(embedding_report(f, (2.0, 4.0)).chain_ok for f in bounded)
    ones = embedding_report(fx.constant_density(8, 1.0))
    ones_ok = abs(ones.norms[-1] - 1.0) < 1e-12 and all(0 < x < math.inf for x in ones.norms)
    trends = {}
    for label, make in (("neg_log", fx.neg_log_cells), ("inv_sqrt", fx.inv_sqrt_cells)):
        reps = [embedding_report(make(n), (2.0, 4.0)) for n in LEVELS]
        chain_ok &= all(r.chain_ok for r in reps)
        trends[label] = {nm: refinement_trend([r.norms[j] for r in reps])
                         for j, nm in enumerate(reps[0].names)}
    lexp_true = lexp_norm_neg_log()
    nl = trends["neg_log"]
    doc = (nl["Linf"]["diverging"] and not nl["Lexp"]["diverging"]
           and max(nl["Lexp"]["values"]) <= lexp_true
           and trends["inv_sqrt"]["L2"]["diverging"] and not trends["inv_sqrt"]["L1"]["diverging"])
    return {"passed": bool(chain_ok and ones_ok and doc), "chain_ok": bool(chain_ok),
            "lexp_exact_neg_log": lexp_true,
            "trends": {k: {n: {"values": t["values"], "diverging": t["diverging"]}
                           for n, t in v.items()} for k, v in trends.items()}}


# 7 ---------------------------------------------------------------------

GAUSS_LADDER = (250, 500, 1000, 2000, 4000)


def check_entropy_identities() -> dict:
    rng = _rng(7)
    h_uniform = continuous_entropy(fx.uniform_density(16)).H
    sigma = 1.3
    exact = fx.gaussian_entropy(sigma)
    errs = [abs(continuous_entropy(fx.gaussian_density(sigma, n)).H - exact) for n in GAUSS_LADDER]
    jensen_fail = 0
    for _ in range(100):
        f = fx.random_density(rng, positive=True)
        lb = jensen_lower_bound(f)
        jensen_fail += not (lb is not None and h_plus(f) >= lb - 1e-12 * abs(lb))
    xl = catalog("xlogx1")
    scale_err = 0.0
    for beta in (2.0, 5.0):
        for _ in range(20):
            f = fx.random_density(rng, positive=True)
            lhs = modular(f.scaled(beta), xl)
            rhs = beta * math.log(beta) * f.integral() + beta * h_epsilon(f, 1.0 / beta)
            scale_err = max(scale_err, abs(lhs - rhs) / max(1.0, abs(lhs)))
    ok = (h_uniform == 0.0 and errs[-1] < 1e-5 and all(b <= a for a, b in zip(errs, errs[1:]))
          and jensen_fail == 0 and scale_err <= 1e-10)
    return {"passed": ok, "H_uniform": h_uniform, "gaussian_errors": errs,
            "jensen_failures": jensen_fail, "scaling_max_err": scale_err}


# 8 ---------------------------------------------------------------------

def check_quantum_layer() -> dict:
    rng = _rng(8)
    exact_log = all(von_neumann_entropy(np.eye(n) / n) == math.log(n) for n in range(1, 65))
    inv_err = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 9))
        rho = fx.random_density_matrix(rng, n, int(rng.integers(1, n + 1)))
        u = fx.random_unitary(rng, n)
        inv_err = max(inv_err, abs(von_neumann_entropy(u @ rho @ u.conj().T) - von_neumann_entropy(rho)))
    reg_err = 0.0
    for _ in range(20):
        rho = fx.random_density_matrix(rng, 6)
        reg_err = max(reg_err, abs(regularized_entropy(rho, 1e-9) - von_neumann_entropy(rho)))
    tr_err = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 9))
        f = fx.random_density_matrix(rng, n) * rng.uniform(0.5, 20.0)
        direct = float(np.trace(f @ logm(np.eye(n) + f)).real)
        a = singular_values(f)
        tr_err = max(tr_err, abs(direct - float(np.sum(a * np.log1p(a)))) / max(1.0, abs(direct)))
    ok = exact_log and inv_err <= 1e-10 and reg_err <= 1e-6 and tr_err <= 1e-10
    return {"passed": ok, "log_n_exact": exact_log, "unitary_max_err": inv_err,
            "regularized_max_err": reg_err, "trace_formula_max_err": tr_err}


# 9 ---------------------------------------------------------------------

def check_l1_inclusion() -> dict:
    rng = _rng(9)
    reps = [l1_subset_llog1_check(fx.random_summable_spectrum(rng)) for _ in range(100)]
    return {"passed": all(r.passed for r in reps), "cases": len(reps),
            "failures": sum(not r.passed for r in reps)}


# 10 --------------------------------------------------------------------

DIVERGENT_K = (10, 50, 200, 700)
SUBINTERVALS = ((0.05, 0.5), (0.01, 0.2), (1e-4, 0.9))


def check_spectral_llogl() -> dict:
    rng = _rng(10)
    hand = llogl_membership(StepRearrangement.from_pairs([(2.0, 1.0), (0.5, 1.0)]))
    hand_ok = (abs(hand.llogl_modular - 2 * math.log(2)) < 1e-15 and hand.unit_mass == 1.0
               and abs(hand.entropy_integral - 2.5 * math.log(2)) < 1e-15 and hand.forward_ok)
    forward, converse = True, True
    for _ in range(30):
        s = fx.random_steps(rng)
        for iv in SUBINTERVALS:
            m = llogl_membership(s, iv)
            forward &= m.forward_hypotheses and m.forward_ok
            converse &= m.converse_hypotheses and m.converse_ok
    tail = StepRearrangement.from_pairs([(3.0, 1.0), (0.5, 2.0), (0.0, math.inf)])
    mt = llogl_membership(tail)
    tail_ok = mt.unit_mass == math.inf and not mt.forward_hypotheses and mt.entropy_exists
    matrix = llogl_membership(np.eye(5) / 5)
    matrix_ok = matrix.unit_mass == 5.0 and abs(matrix.entropy_integral - math.log(5)) < 1e-12
    # divergent series: summable values, entropy partial sums unbounded
    probe = []
    for K in DIVERGENT_K:
        s = fx.divergent_entropy_steps(K)
        m = llogl_membership(s, SUBINTERVALS[0])
        harmonic = float(np.sum(1.0 / np.arange(1, K + 1)))
        probe.append({"K": K, "l1": float(np.sum(s.values * s.lengths)),
                      "entropy_partial_sum": m.entropy_integral, "harmonic": harmonic,
                      "unit_mass": m.unit_mass, "interval_mass": m.interval_mass})
    sums = [p["entropy_partial_sum"] for p in probe]
    div_ok = (all(abs(p["entropy_partial_sum"] - p["harmonic"]) < 1e-9 * p["harmonic"] for p in probe)
              and all(p["entropy_partial_sum"] >= math.log(p["K"]) for p in probe)
              and all(b > a for a, b in zip(sums, sums[1:]))
              and all(p["l1"] < math.pi ** 2 / 6 for p in probe)
              and all(p["unit_mass"] >= math.exp(p["K"]) / p["K"] ** 2 for p in probe)
              and len({p["interval_mass"] for p in probe}) == 1)
    ok = hand_ok and forward and converse and tail_ok and matrix_ok and div_ok
    return {"passed": bool(ok), "hand_example": hand.to_dict(), "forward": bool(forward),
            "converse": bool(converse), "infinite_tail": mt.to_dict(), "divergent_probe": probe}


# 11 --------------------------------------------------------------------

def _h_theorem(model: str, start) -> dict:
    t0 = time.perf_counter()
    tr = evolve(DiscreteKineticState(model, start), 20.0, 1e-3)
    elapsed = time.perf_counter() - t0
    fd = float(np.max(np.diff(tr.h_plus) / tr.dt))
    rate = float(np.max(tr.entropy_rate))
    res = {"runtime_s": elapsed, "max_fd_dH": fd, "max_rate": rate,
           "drift": tr.invariant_drift(), "residual": tr.residual(),
           "llog1_bounded": bool(np.all(tr.llog1_modular <= tr.llog1_bound()))}
    res["passed"] = (elapsed < 2.0 and fd <= 1e-9 and rate <= 0.0 and res["drift"] < 1e-12
                     and res["residual"] < 1e-8 and res["llog1_bounded"])
    return res


def check_h_theorem() -> dict:
    car = _h_theorem("carleman", (1.5, 0.5))
    bro = _h_theorem("broadwell", (1.5, 0.5, 1.0, 1.0))
    return {"passed": car["passed"] and bro["passed"], "carleman": car, "broadwell": bro}


# 12 --------------------------------------------------------------------

LOG_LEVELS = (20, 40, 60, 80)
INV_CUTS = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)


def check_regularity_probe() -> dict:
    x = fx.CHI_UNIT
    cases = {"constant": (fx.constant_steps(), True),
             "log_inverse": ([fx.log_inverse_steps(k) for k in LOG_LEVELS], True),
             "inverse": ([fx.inverse_steps(s) for s in INV_CUTS], False)}
    out, ok = {}, True
    for name, (g, expect) in cases.items():
        rep = regularity_probe(g, x)
        out[name] = {"regular": rep.regular, "cosh_member": rep.cosh_member,
                     "finite_at": rep.finite_at}
        ok &= rep.regular == expect and rep.agree
    errs = [abs(moment_transform(fx.log_inverse_steps(k), x, 0.5) - 2.0) for k in (5, 10, 20, 40)]
    approx_ok = all(b < a for a, b in zip(errs, errs[1:]))
    out["log_inverse_errors_t0.5"] = errs
    return {"passed": bool(ok and approx_ok), **out}


CHECKS = (
    (1, "complementary pair reconstruction", check_complementary_pair),
    (2, "Young inequality suite", check_young_inequality),
    (3, "Luxemburg norm vs direct p-norms", check_lp_norms),
    (4, "rearrangement invariance of modulars", check_rearrangement_invariance),
    (5, "Holder pairing bound", check_holder_pairing),
    (6, "embedding chain and refinement", check_embedding_chain),
    (7, "entropy identities", check_entropy_identities),
    (8, "quantum entropy layer", check_quantum_layer),
    (9, "l1 inside L log(L+1)", check_l1_inclusion),
    (10, "spectral L log L criteria, both directions", check_spectral_llogl),
    (11, "H-theorem on discrete-velocity models", check_h_theorem),
    (12, "moment-transform regularity probe", check_regularity_probe),
)


def run_check(number: int) -> CheckResult:
    num, name, fn = CHECKS[number - 1]
    t0 = time.perf_counter()
    details = fn()
    return CheckResult(num, name, bool(details.pop("passed")), details,
                       time.perf_counter() - t0)


def run_all(threads: int = 1, only=None) -> list:
    numbers = [c[0] for c in CHECKS if only is None or c[0] in only]
    if threads <= 1:
        return [run_check(n) for n in numbers]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run_check, numbers))
