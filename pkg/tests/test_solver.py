import dataclasses

import numpy as np
import pytest

from starmd.dgf import make_geometry
from starmd.geometry import PNorm, dual_norm_eval, grad_norm_power, norm_eval
from starmd.linesearch import probe_bound
from starmd.objectives import (
    CountingOracle,
    Problem,
    make_norm_power_objective,
    make_quadratic,
    problem_from_id,
)
from starmd.solver import (
    mirror_step,
    prox_step,
    radius_bound_check,
    run,
    telescope_check,
)

EUCLID = make_geometry(PNorm(2.0))
P15 = make_geometry(PNorm(1.5))


def test_mirror_step_euclidean_is_gradient_descent():
    x = np.array([1.0, -2.0])
    g = np.array([0.5, 1.0])
    np.testing.assert_allclose(mirror_step(EUCLID, x, g, 0.3), x - 0.3 * g,
                               rtol=1e-12)
    np.testing.assert_allclose(mirror_step(EUCLID, x, g, 0.0), x)


def test_mirror_step_local_minimality():
    # returned point minimizes eta <g, x> + D_psi(x, x_t) among perturbations
    rng = np.random.default_rng(0)
    x_t = rng.standard_normal(5)
    g = rng.standard_normal(5)
    eta = 0.7
    from starmd.dgf import bregman
    x_new = mirror_step(P15, x_t, g, eta)
    obj = lambda x: eta * float(g @ x) + bregman(P15, x, x_t)
    base = obj(x_new)
    for _ in range(10**3):
        assert base <= obj(x_new + rng.standard_normal(5)
                           * 10.0 ** rng.uniform(-4, 0)) + 1e-12


def test_prox_step_euclidean():
    x_md = np.array([1.0, 1.0])
    g = np.array([2.0, 0.0])
    # Euclidean q=2, mu=1 reduces to x_md - alpha * g
    np.testing.assert_allclose(prox_step(EUCLID, x_md, g, 0.25),
                               x_md - 0.25 * g, rtol=1e-12)
    np.testing.assert_allclose(prox_step(P15, x_md, np.zeros(2), 0.25), x_md)


def test_prox_step_stationarity_p3():
    geom = make_geometry(PNorm(3.0))
    rng = np.random.default_rng(1)
    for _ in range(100):
        x_md = rng.standard_normal(6)
        g = rng.standard_normal(6)
        alpha_t = 10.0 ** rng.uniform(-2, 1)
        x_ag = prox_step(geom, x_md, g, alpha_t)
        resid = dual_norm_eval(
            geom.norm,
            alpha_t * g + geom.mu * grad_norm_power(geom.norm, geom.q,
                                                    x_ag - x_md))
        assert resid <= 1e-8 * alpha_t * dual_norm_eval(geom.norm, g)


def test_run_zero_iterations():
    quad = make_quadratic(4)
    x1 = np.array([1.0, 0.0, 0.0, 0.0])
    res = run(quad, EUCLID, 0, x1, "smooth", B=0.5)
    np.testing.assert_allclose(res.x_final, x1)
    assert len(res.records) == 0


def test_smooth_quad_regression_bound():
    # frozen regression form of the q = kappa = 2 corollary rate
    quad = make_quadratic(8)
    x1 = np.zeros(8)
    x1[0] = 1.0
    T = 256
    B = 0.5
    res = run(quad, EUCLID, T, x1, "smooth", B=B)
    assert res.gaps[-1] <= 10.0 * quad.L * quad.tau**2 * B / T**2


def test_run_argument_validation():
    quad = make_quadratic(3)
    x1 = np.ones(3)
    with pytest.raises(ValueError):
        run(quad, EUCLID, 4, x1, "smooth")            # neither alpha nor B
    with pytest.raises(ValueError):
        run(quad, EUCLID, 4, x1, "smooth", alpha=0.5, B=0.5)
    with pytest.raises(ValueError):
        run(quad, make_geometry(PNorm(3.0)), 4, x1, "smooth", B=0.5)
    p15 = make_norm_power_objective(PNorm(1.5), 1.5, 1.0, np.zeros(3))
    with pytest.raises(ValueError):
        # kappa = 2 problem cannot run the general schedule in q = 2
        run(quad, EUCLID, 4, x1, "general", B=0.5)
    # kappa < q is fine
    run(p15, P15, 4, x1, "general", B=1.0)


def test_search_condition_recheck_and_trace():
    prob = problem_from_id("pnormpow:p=1.5,k=1.5", 8)
    x1 = np.zeros(8)
    x1[0] = 1.0
    res = run(prob, P15, 128, x1, "general", B=1.0)
    # solver-level restatement of the stopping condition after every search
    for i, row in enumerate(res.rows):
        assert res.satisfied[i] <= row.eps_t
    # clamped C_t rows are flagged in the trace
    assert res.records[0].clamped and res.records[0].C_t == 0.0
    assert not res.records[100].clamped
    # counters are cumulative and exact
    assert res.records[-1].value_calls == res.counter.value_calls
    assert res.records[-1].grad_calls == res.counter.grad_calls
    count = res.counter.value_calls + res.counter.grad_calls
    bound_T = probe_bound(res.rows[-1].C_t, prob.L, prob.kappa,
                          float(np.max(res.dist)), res.rows[-1].eps_t)
    assert count <= 4 * 128 * bound_T


def test_oracle_counting_matches_independent_count():
    quad = make_quadratic(5)
    calls = {"value": 0, "grad": 0}
    wrapped = Problem(
        lambda x: (calls.__setitem__("value", calls["value"] + 1),
                   quad.value(x))[1],
        lambda x: (calls.__setitem__("grad", calls["grad"] + 1),
                   quad.grad(x))[1],
        quad.tau, quad.L, quad.kappa, quad.norm,
        minimizer=quad.minimizer, f_star=quad.f_star)
    before = dict(calls)  # constructor validation consumed one gradient
    x1 = np.ones(5)
    res = run(wrapped, EUCLID, 64, x1, "smooth", B=2.5)
    assert res.counter.value_calls == calls["value"] - before["value"]
    assert res.counter.grad_calls == calls["grad"] - before["grad"]


def test_probe_counts_within_bound():
    prob = problem_from_id("pnormpow:p=1.5,k=1.5", 8)
    x1 = np.zeros(8)
    x1[0] = 1.0
    res = run(prob, P15, 256, x1, "general", B=1.0)
    for i, row in enumerate(res.rows):
        bound = probe_bound(row.C_t, prob.L, prob.kappa, res.dist[i],
                            row.eps_t)
        assert res.probes[i] <= bound + 2


def test_telescope_check_on_small_runs():
    quad = make_quadratic(6)
    x1 = np.ones(6) / np.sqrt(6.0)
    rep = telescope_check(run(quad, EUCLID, 128, x1, "smooth", B=0.5))
    assert rep.passed, rep
    prob = problem_from_id("pnormpow:p=1.5,k=1.5", 6)
    rep = telescope_check(run(prob, P15, 128, x1, "general", B=1.0))
    assert rep.passed, rep


def test_radius_bound_check_passes_and_fails():
    prob = problem_from_id("pnormpow:p=1.5,k=1.5", 6)
    x1 = np.zeros(6)
    x1[0] = 1.0
    res = run(prob, P15, 512, x1, "general", B=1.0)
    rep = radius_bound_check(res)
    assert rep.passed
    assert rep.exponent == pytest.approx(
        (2.0 - 1.0) * (rep.n2 + 1.0) / (2.0 - 1.5))
    # a synthetic super-polynomial radius trace must fail
    ts = np.arange(1, len(res.radius) + 1, dtype=float)
    fake = dataclasses.replace(res, radius=ts ** (rep.exponent + 1.0))
    assert not radius_bound_check(fake).passed
    with pytest.raises(ValueError):
        radius_bound_check(run(make_quadratic(6), EUCLID, 8, x1, "smooth",
                               B=0.5))


def test_radius_tracks_max_of_three_iterates():
    prob = problem_from_id("pnormpow:p=1.5,k=1.5", 4)
    x1 = np.zeros(4)
    x1[0] = 1.0
    res = run(prob, P15, 16, x1, "general", B=1.0)
    # R_1 is the common start distance
    assert res.radius[0] == pytest.approx(norm_eval(P15.norm, x1))
    assert np.all(res.radius >= 0.0)
