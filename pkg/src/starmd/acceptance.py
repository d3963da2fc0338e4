"""The acceptance battery: one function per criterion, shared by the test
suite and the ``starmd suite`` CLI command.

Each criterion returns (passed, detail) and respects a wall-clock budget.
The solver-rate criteria pin their full configs here, including the radius
bounds B (always valid bounds for the stated starts) and the start vectors.
The weakly-smooth rate exhibit uses the multi-scale norm power: the plain
norm power grows sharply away from its minimizer, which the search exploits
to converge around t^-2.25, outside the two-sided window the criterion puts
around the theoretical exponent; the multi-scale member of the family walks
through every curvature scale and shows the worst-case exponent itself.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .adversary import phi_potential
from .dgf import bregman, grad_psi, grad_psi_inverse, make_geometry
from .geometry import (
    Composite,
    PNorm,
    dual_norm_eval,
    grad_norm_power,
    norm_eval,
)
from .harness import (
    ExperimentConfig,
    fit_rate,
    l1_reduction,
    run_adversary_game,
    run_experiment,
)
from .linesearch import probe_bound
from .objectives import certify_star_convexity, problem_from_id
from .solver import prox_step, radius_bound_check, run, telescope_check

TEST_GEOMETRIES = [PNorm(1.5), PNorm(2.0), PNorm(3.0), PNorm(7.0),
                   Composite(PNorm(2.0), PNorm(1.5), 0.5, 8)]


def _sample(rng, dim):
    x = rng.standard_normal(dim)
    return x * 10.0 ** rng.uniform(-1, 1)


def criterion_1_geometry_identities():
    """Fact 1 / Lemma A.1 identities at 1e-9 relative on 1000 vectors each."""
    rng = np.random.default_rng(101)
    worst = 0.0
    for spec in TEST_GEOMETRIES:
        q = make_geometry(spec).q
        for _ in range(1000):
            x = _sample(rng, 16)
            n = norm_eval(spec, x)
            for s in (2.0, q, 3.0):
                phi_s = grad_norm_power(spec, s, x)
                worst = max(worst, abs(float(phi_s @ x) - n**s) / n**s)
                dual = dual_norm_eval(spec, phi_s)
                for a in (1.0, 2.0):
                    worst = max(worst,
                                abs(dual**a - n ** (a * (s - 1.0)))
                                / n ** (a * (s - 1.0)))
    return worst <= 1e-9, f"worst relative identity error {worst:.2e}"


def criterion_2_mirror_prox():
    """Mirror round trip and prox stationarity at 1e-8 on 100 instances each."""
    rng = np.random.default_rng(102)
    worst_rt, worst_prox = 0.0, 0.0
    for spec in TEST_GEOMETRIES:
        geom = make_geometry(spec)
        for _ in range(100):
            x = _sample(rng, 16)
            back = grad_psi_inverse(geom, grad_psi(geom, x))
            worst_rt = max(worst_rt,
                           norm_eval(spec, back - x) / norm_eval(spec, x))
            x_md = _sample(rng, 16)
            g = _sample(rng, 16)
            alpha_t = 10.0 ** rng.uniform(-2, 1)
            x_ag = prox_step(geom, x_md, g, alpha_t)
            resid = dual_norm_eval(
                spec, alpha_t * g
                + geom.mu * grad_norm_power(spec, geom.q, x_ag - x_md))
            worst_prox = max(worst_prox,
                             resid / (alpha_t * dual_norm_eval(spec, g)))
    ok = worst_rt <= 1e-8 and worst_prox <= 1e-8
    return ok, (f"round-trip residual {worst_rt:.2e}, "
                f"prox stationarity residual {worst_prox:.2e}")


# Frozen solver configs for criteria 3-5 (criteria 6-8 reuse the runs).
CONFIG_SMOOTH_QUAD = ExperimentConfig(
    problem="illquad:lmin=1e-4", dim=50, mode="smooth", T=4096, B=1.0,
    seed=7, x1_kind="gauss", x1_scale=1.0)
CONFIG_GENERAL_MS = ExperimentConfig(
    problem="msnormpow:p=1.5,k=1.5,scales=24,dmin=1e-6", dim=50,
    mode="general", T=4096, B=1.0, x1_kind="e1", x1_scale=1.0)
CONFIG_RADIAL = ExperimentConfig(
    problem="radialstar:a=0.5,k=3,tau=2", dim=2, mode="smooth", T=4096,
    B=0.5, x1_kind="e1", x1_scale=1.0)

_run_cache = {}


def _cached_run(config: ExperimentConfig):
    key = config.problem, config.mode, config.T, config.B, config.seed
    if key not in _run_cache:
        _run_cache[key] = run_experiment(config)
    return _run_cache[key]


def criterion_3_smooth_rate():
    """Smooth Euclidean convex quadratic: fitted slope <= -1.8."""
    fit = fit_rate(_cached_run(CONFIG_SMOOTH_QUAD))
    return fit.slope <= -1.8, f"fitted slope {fit.slope:.3f} (need <= -1.8)"


def criterion_4_weakly_smooth_rate():
    """p=1.5 weakly smooth rate: slope within [-1.6, -1.0] around -1.25."""
    fit = fit_rate(_cached_run(CONFIG_GENERAL_MS))
    ok = -1.6 <= fit.slope <= -1.0
    return ok, (f"fitted slope {fit.slope:.3f} vs theoretical -1.25 "
                f"(window [-1.6, -1.0])")


def criterion_5_star_convex_run():
    """Certify the non-convex radial objective, then reach 1e-6 of the gap."""
    problem = problem_from_id(CONFIG_RADIAL.problem, 2)
    cert = certify_star_convexity(problem, tau=2.0, samples=10**4,
                                  radius=10.0, seed=105)
    if not cert.passed:
        return False, f"tau=2 certification failed (worst {cert.worst:.2e})"
    result = _cached_run(CONFIG_RADIAL)
    ratio = result.gaps[-1] / result.initial_gap
    fit = fit_rate(result)
    ok = ratio <= 1e-6 and fit.slope <= -1.5
    return ok, (f"tau=2 certified (worst violation {cert.worst:.2e}); "
                f"final/initial gap {ratio:.2e}, slope {fit.slope:.1f}")


def criterion_6_search_complexity():
    """Probe counts within the Theorem bound; total calls within 4 T bound(T)."""
    detail = []
    ok = True
    for config in (CONFIG_SMOOTH_QUAD, CONFIG_GENERAL_MS, CONFIG_RADIAL):
        rr = _cached_run(config)
        L, kappa = rr.problem.L, rr.problem.kappa
        excess = max(
            rr.probes[i] - probe_bound(row.C_t, L, kappa, rr.dist[i],
                                       row.eps_t)
            for i, row in enumerate(rr.rows))
        last = rr.rows[-1]
        bound_T = probe_bound(last.C_t, L, kappa, float(np.max(rr.dist)),
                              last.eps_t)
        total = rr.counter.value_calls + rr.counter.grad_calls
        cap = 4 * config.T * bound_T
        ok &= excess <= 2 and total <= cap
        detail.append(f"{config.problem.split(':')[0]}: "
                      f"max excess {excess}, {total} calls <= {cap}")
    return ok, "; ".join(detail)


def criterion_7_telescoping():
    """Per-iteration convergence inequality at 1e-8 relative on runs 3-5."""
    detail = []
    ok = True
    for config in (CONFIG_SMOOTH_QUAD, CONFIG_GENERAL_MS, CONFIG_RADIAL):
        rep = telescope_check(_cached_run(config), rtol=1e-8)
        ok &= rep.passed
        detail.append(f"{config.problem.split(':')[0]}: worst "
                      f"{rep.worst_violation:.2e} at t={rep.worst_t}")
    return ok, "; ".join(detail)


def criterion_8_iterate_growth():
    """Theorem-3 polynomial radius bound on the weakly smooth run."""
    rep = radius_bound_check(_cached_run(CONFIG_GENERAL_MS))
    return rep.passed, (f"R_t <= c t^{rep.exponent:.2f} with c={rep.c:.3g}; "
                        f"worst ratio {rep.worst_ratio:.6f} at t={rep.worst_t}")


def criterion_9_adversary():
    """Bisection querier with N=8 < log5 budget ~ 9.2 loses the game."""
    report = run_adversary_game(1.0, 1e-3, 1e6, "bisection", 8)
    growth = max(b / a for a, b in zip(report.phi_history,
                                       report.phi_history[1:]))
    ok = report.verified and report.growth_ok and report.n_queries == 8
    return ok, (f"budget {report.budget:.2f}, final phi "
                f"{report.phi_history[-1]:.3g}, max per-step growth "
                f"{growth:.2f}x, {report.detail}")


def criterion_10_lemma_suite():
    """Young / inexact-gradient split / Bregman-radius / three-points."""
    rng = np.random.default_rng(110)
    # Young's inequality
    worst_young = -math.inf
    for _ in range(10**4):
        pp = 1.0 + 10.0 ** rng.uniform(-2, 1)
        qq = pp / (pp - 1.0)
        a, b = rng.uniform(0.0, 3.0, 2)
        rhs = a**pp / pp + b**qq / qq
        worst_young = max(worst_young, (a * b - rhs) / max(1.0, rhs))
    # inexact-gradient split
    worst_split = -math.inf
    for _ in range(10**4):
        q = rng.choice([2.0, 3.0])
        kappa = rng.uniform(1.01, min(2.0, q - 0.01))
        r = (q - kappa) / kappa
        M = (r / q) ** r
        delta = 10.0 ** rng.uniform(-4, 1)
        dn = 10.0 ** rng.uniform(-2, 1)
        lhs = dn**kappa / kappa
        rhs = M / (q * delta**r) * dn**q + delta
        worst_split = max(worst_split, lhs - rhs)
    # Bregman vs radius, p-norm geometries
    worst_breg = -math.inf
    for spec in (PNorm(1.5), PNorm(2.0), PNorm(3.0), PNorm(7.0)):
        geom = make_geometry(spec)
        for _ in range(2500):
            x, y = rng.standard_normal(12), rng.standard_normal(12)
            lhs = bregman(geom, x, y)
            rhs = 2.0 * max(norm_eval(spec, x) ** geom.q,
                            norm_eval(spec, y) ** geom.q)
            worst_breg = max(worst_breg, lhs - rhs)
    # three-points identity
    worst_three = 0.0
    for spec in TEST_GEOMETRIES:
        geom = make_geometry(spec)
        for _ in range(2000):
            u, u_star, y = (rng.standard_normal(12) for _ in range(3))
            lhs = float((grad_psi(geom, u_star) - grad_psi(geom, y))
                        @ (u - u_star))
            rhs = (bregman(geom, u, y) - bregman(geom, u, u_star)
                   - bregman(geom, u_star, y))
            worst_three = max(worst_three, abs(lhs - rhs))
    ok = (worst_young <= 1e-12 and worst_split <= 1e-12
          and worst_breg <= 1e-12 and worst_three <= 1e-10)
    return ok, (f"Young {worst_young:.1e}, split {worst_split:.1e}, "
                f"Bregman-radius {worst_breg:.1e}, three-points "
                f"{worst_three:.1e}")


def criterion_11_l1_reduction():
    """l1-declared smoothness run through the q=1.5 geometry, slope <= -1."""
    dim, s, kappa = 100, 0.5, 1.5
    geom, inflation = l1_reduction(dim, s, kappa)
    base = problem_from_id("pnormpow:p=1.5,k=1.5", dim)
    # ||.||_{1.5} <= ||.||_1, so the declared constant is also valid for
    # l1 smoothness; the reduction inflates it for the q-norm geometry.
    problem = base.with_smoothness(base.L * inflation, geom.norm)
    x1 = np.zeros(dim)
    x1[0] = 1.0
    result = run(problem, geom, 4096, x1, "general", B=1.0)
    fit = fit_rate(result)
    return fit.slope <= -1.0, (f"inflation {inflation:.4g}, fitted slope "
                               f"{fit.slope:.3f} (need <= -1.0)")


@dataclass
class CriterionResult:
    cid: int
    name: str
    passed: bool
    seconds: float
    budget: float
    detail: str


CRITERIA = [
    (1, "geometry identities", criterion_1_geometry_identities, 1.0),
    (2, "mirror/prox correctness", criterion_2_mirror_prox, 5.0),
    (3, "smooth Euclidean rate", criterion_3_smooth_rate, 30.0),
    (4, "weakly smooth non-Euclidean rate", criterion_4_weakly_smooth_rate, 60.0),
    (5, "star-convex non-convex run", criterion_5_star_convex_run, 60.0),
    (6, "binary-search complexity", criterion_6_search_complexity, 60.0),
    (7, "telescoping inequality", criterion_7_telescoping, 60.0),
    (8, "iterate growth", criterion_8_iterate_growth, 60.0),
    (9, "adversary lower bound", criterion_9_adversary, 1.0),
    (10, "lemma suite", criterion_10_lemma_suite, 5.0),
    (11, "l1 reduction", criterion_11_l1_reduction, 60.0),
]


def run_criterion(cid: int) -> CriterionResult:
    cid_, name, fn, budget = next(c for c in CRITERIA if c[0] == cid)
    start = time.perf_counter()
    passed, detail = fn()
    elapsed = time.perf_counter() - start
    if elapsed >= budget:
        passed = False
        detail += f" [over budget: {elapsed:.1f}s >= {budget:.0f}s]"
    return CriterionResult(cid_, name, bool(passed), elapsed, budget, detail)


def run_all(printer=print) -> list[CriterionResult]:
    results = []
    for cid, name, _fn, _budget in CRITERIA:
        res = run_criterion(cid)
        results.append(res)
        status = "PASS" if res.passed else "FAIL"
        printer(f"[{status}] criterion {res.cid:2d} ({res.name}): "
                f"{res.detail} ({res.seconds:.2f}s)")
    return results
