import math

import numpy as np
import pytest

from starmd.geometry import PNorm, norm_eval
from starmd.objectives import (
    CountingOracle,
    Problem,
    certify_star_convexity,
    certify_weak_smoothness,
    holder_ratio_1d,
    make_norm_power_objective,
    make_quadratic,
    make_radial_star_objective,
    problem_from_id,
)


def test_norm_power_examples():
    p = make_norm_power_objective(PNorm(2.0), 2.0, 1.0, np.zeros(2))
    assert p.value([3.0, 4.0]) == pytest.approx(12.5)
    assert p.L == 1.0 and p.tau == 1.0

    p = make_norm_power_objective(PNorm(1.5), 1.5, 1.0, np.zeros(3))
    assert p.value(np.zeros(3)) == 0.0
    assert np.all(p.grad(np.zeros(3)) == 0.0)
    assert p.f_star == 0.0


def test_norm_power_gradient_finite_differences():
    p = make_norm_power_objective(PNorm(2.0), 1.5, 1.0, np.zeros(2))
    x = np.array([1.0, 0.0])
    h = 1e-5
    fd = np.array([(p.value(x + h * e) - p.value(x - h * e)) / (2 * h)
                   for e in np.eye(2)])
    np.testing.assert_allclose(p.grad(x), fd, rtol=1e-5, atol=1e-8)


def test_separable_smoothness_constant():
    # for p = kappa the declared constant is the exact 1-D Bregman ratio
    h = holder_ratio_1d(1.5)
    assert h == pytest.approx(1.3065629648763766, rel=1e-9)
    p = make_norm_power_objective(PNorm(1.5), 1.5, 2.0, np.zeros(4))
    assert p.L == pytest.approx(2.0 * h)
    assert holder_ratio_1d(2.0) == 1.0


def test_radial_star_examples():
    # a = 0 reduces to the squared norm
    p0 = make_radial_star_objective(0.0, 3)
    assert p0.value([0.6, -0.8]) == pytest.approx(1.0)
    p = make_radial_star_objective(0.5, 3)
    x = np.array([math.cos(math.pi / 6), math.sin(math.pi / 6)])
    assert p.value(x) == pytest.approx(1.5)  # sin^2(pi/2) = 1 at theta = pi/6
    cert = certify_star_convexity(p, 2.0, samples=10**4, radius=10.0, seed=0)
    assert cert.passed


def test_radial_star_gradient_finite_differences():
    p = make_radial_star_objective(0.5, 3)
    rng = np.random.default_rng(1)
    h = 1e-6
    for _ in range(50):
        x = rng.standard_normal(2)
        fd = np.array([(p.value(x + h * e) - p.value(x - h * e)) / (2 * h)
                       for e in np.eye(2)])
        np.testing.assert_allclose(p.grad(x), fd, rtol=1e-4, atol=1e-6)


def test_certify_star_convexity_quadratic():
    quad = make_quadratic(4)
    assert certify_star_convexity(quad, 1.0, 2000, 5.0, seed=0).passed
    # tau = 0.5 sits exactly on the quadratic boundary; 0.4 must fail
    assert certify_star_convexity(quad, 0.5, 2000, 5.0, seed=0).passed
    report = certify_star_convexity(quad, 0.4, 2000, 5.0, seed=0)
    assert not report.passed and report.worst > 0


def test_certify_star_convexity_needs_minimizer():
    quad = make_quadratic(3)
    anon = Problem(quad.value_oracle, quad.grad_oracle, 1.0, 1.0, 2.0,
                   PNorm(2.0), minimizer=None, f_star=None)
    with pytest.raises(ValueError):
        certify_star_convexity(anon, 1.0, 10, 1.0, seed=0)


def test_certify_weak_smoothness_quadratic():
    quad = make_quadratic(4)
    ok = certify_weak_smoothness(quad, 1.0, 2.0, 2000, seed=0)
    assert ok.passed and ok.worst <= 1.0 + 1e-12
    bad = certify_weak_smoothness(quad, 0.9, 2.0, 2000, seed=0)
    assert not bad.passed


def test_certify_weak_smoothness_norm_power():
    p = make_norm_power_objective(PNorm(1.5), 1.5, 1.0, np.zeros(6))
    assert certify_weak_smoothness(p, p.L, 1.5, 5000, seed=3).passed


@pytest.mark.parametrize("pid,dim", [
    ("quad", 6),
    ("illquad:lmin=1e-4", 6),
    ("pnormpow:p=1.5,k=1.5", 6),
    ("msnormpow:p=1.5,k=1.5,scales=12,dmin=1e-4", 6),
    ("radialstar:a=0.5,k=3", 2),
])
def test_catalog_certifies_declared_constants(pid, dim):
    # every catalog problem passes both certifiers with what it declares
    problem = problem_from_id(pid, dim)
    star = certify_star_convexity(problem, problem.tau, 3000, 5.0, seed=9)
    smooth = certify_weak_smoothness(problem, problem.L, problem.kappa, 3000,
                                     seed=10)
    assert star.passed, star
    assert smooth.passed, smooth


def test_problem_validation():
    with pytest.raises(ValueError):
        make_norm_power_objective(PNorm(2.0), 2.5, 1.0, np.zeros(2))
    with pytest.raises(ValueError):
        make_radial_star_objective(1.5, 3)
    with pytest.raises(ValueError):
        # declared minimizer with a non-vanishing gradient is rejected
        Problem(lambda x: float(x @ x), lambda x: 2 * np.asarray(x) + 1.0,
                1.0, 2.0, 2.0, PNorm(2.0), minimizer=np.zeros(2))
    with pytest.raises(ValueError):
        problem_from_id("radialstar:a=0.5,k=3", 5)
    with pytest.raises(ValueError):
        problem_from_id("nosuch", 5)


def test_oracle_counter_exact():
    quad = make_quadratic(3)
    calls = {"value": 0, "grad": 0}
    instrumented = Problem(
        lambda x: (calls.__setitem__("value", calls["value"] + 1),
                   quad.value(x))[1],
        lambda x: (calls.__setitem__("grad", calls["grad"] + 1),
                   quad.grad(x))[1],
        1.0, 1.0, 2.0, PNorm(2.0), minimizer=np.zeros(3), f_star=0.0)
    oracle = CountingOracle(instrumented)
    rng = np.random.default_rng(0)
    for _ in range(57):
        x = rng.standard_normal(3)
        if rng.random() < 0.5:
            oracle.value(x)
        else:
            oracle.grad(x)
    # minimizer validation in the Problem constructor used one gradient call
    assert oracle.counter.value_calls == calls["value"]
    assert oracle.counter.grad_calls == calls["grad"] - 1
    assert oracle.counter.value_calls + oracle.counter.grad_calls == 57


def test_young_inequality_sampled():
    rng = np.random.default_rng(5)
    for _ in range(10**4):
        p = 1.0 + 10.0 ** rng.uniform(-2, 1)
        q = p / (p - 1.0)
        a, b = rng.uniform(0.0, 3.0, 2)
        assert a * b <= a**p / p + b**q / q + 1e-12


def test_inexact_gradient_split_sampled():
    geom_p = PNorm(1.5)
    rng = np.random.default_rng(6)
    q = 2.0
    for _ in range(10**4):
        kappa = rng.uniform(1.01, 1.99)
        r = (q - kappa) / kappa
        M = (r / q) ** r
        delta = 10.0 ** rng.uniform(-3, 1)
        x, y = rng.standard_normal((2, 5))
        dn = norm_eval(geom_p, x - y)
        assert dn**kappa / kappa <= M / (q * delta**r) * dn**q + delta + 1e-12
