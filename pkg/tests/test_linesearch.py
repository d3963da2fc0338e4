import numpy as np
import pytest

from starmd.geometry import PNorm
from starmd.linesearch import (
    BudgetExceeded,
    LineRestriction,
    binary_search,
    probe_bound,
)
from starmd.objectives import CountingOracle, Problem, make_quadratic


def _quad_1d():
    return Problem(lambda x: 0.5 * float(x @ x), lambda x: np.asarray(x),
                   1.0, 1.0, 2.0, PNorm(2.0), minimizer=np.zeros(1),
                   f_star=0.0)


def _line(x_t, x_ag, problem=None):
    problem = problem or _quad_1d()
    oracle = CountingOracle(problem)
    return LineRestriction(np.atleast_1d(np.asarray(x_t, dtype=float)),
                           np.atleast_1d(np.asarray(x_ag, dtype=float)),
                           oracle), oracle


def test_early_exit_lambda_one():
    # g(lam) = (1-lam)^2/2 is decreasing at 1: g'(1) = 0 <= eps
    line, _ = _line([1.0], [0.0])
    res = binary_search(line, C=1.0, eps=1e-9)
    assert res.lam == 1.0
    assert res.probes == 1
    assert res.satisfied_value <= 1e-9
    np.testing.assert_allclose(res.x_md, [0.0])


def test_early_exit_lambda_zero():
    # x_t on a lower level set than x_ag: C g(0) <= eps
    line, _ = _line([-1.0], [2.0])
    res = binary_search(line, C=1.0, eps=1e-6)
    assert res.lam == 0.0
    assert res.probes == 2
    np.testing.assert_allclose(res.x_md, [-1.0])
    assert res.g_value == pytest.approx(0.5 - 2.0)


def _reference_path(x_t, x_ag, C, eps):
    """Independent bisection-path oracle following the algorithm verbatim."""
    F = lambda s: 0.5 * s * s
    Fp = lambda s: s
    g = lambda lam: F(lam * x_ag + (1 - lam) * x_t) - F(x_ag)
    gp = lambda lam: Fp(lam * x_ag + (1 - lam) * x_t) * (x_ag - x_t)
    if gp(1.0) <= eps:
        return 1.0
    if C * g(0.0) <= eps:
        return 0.0
    a, b = 0.0, 1.0
    while True:
        lam = 0.5 * (a + b)
        if lam * gp(lam) + C * g(lam) <= eps:
            return lam
        if g(lam) > 0:
            a = lam
        else:
            b = lam


@pytest.mark.parametrize("x_t,x_ag,C,eps", [
    (-1.0, 2.0, 1.0, 1e-6),
    (2.0, -1.0, 1.0, 1e-6),
    (3.0, -0.5, 4.0, 1e-8),
    (1.0, -1.0, 2.0, 1e-7),
])
def test_matches_reference_path_and_grid_validity(x_t, x_ag, C, eps):
    line, _ = _line([x_t], [x_ag])
    res = binary_search(line, C=C, eps=eps)
    assert res.lam == _reference_path(x_t, x_ag, C, eps)
    # independent re-evaluation of the stopping condition at the result
    F = lambda s: 0.5 * s * s
    x_md = res.lam * x_ag + (1 - res.lam) * x_t
    g = F(x_md) - F(x_ag)
    gp = x_md * (x_ag - x_t)
    assert res.lam * gp + C * g <= eps
    # the returned lambda lies in the grid-scanned valid set
    lams = np.linspace(0.0, 1.0, 10**6)
    mids = lams * x_ag + (1 - lams) * x_t
    vals = lams * mids * (x_ag - x_t) + C * (0.5 * mids**2 - F(x_ag))
    valid = lams[vals <= eps]
    assert np.min(np.abs(valid - res.lam)) <= 1e-6


def test_returned_lambda_is_dyadic():
    line, _ = _line([2.0], [-1.0])
    res = binary_search(line, C=8.0, eps=1e-9)
    if res.iterations:
        scaled = res.lam * 2.0**res.iterations
        assert scaled == int(scaled) and int(scaled) % 2 == 1


def test_probe_bound_examples():
    assert probe_bound(1.0, 1.0, 2.0, 1.0, 0.5) == 3
    # whole-interval tolerance: eps >= 4 L dist^kappa / kappa and C <= 1
    assert probe_bound(1.0, 1.0, 2.0, 1.0, 10.0) == 2
    assert probe_bound(1000.0, 1.0, 2.0, 1.0, 1e6) == 12
    assert probe_bound(0.0, 1.0, 2.0, 0.0, 1.0) == 2


def test_probes_within_bound():
    rng = np.random.default_rng(0)
    quad = make_quadratic(6)
    for _ in range(200):
        x_t = rng.standard_normal(6) * 3.0
        x_ag = rng.standard_normal(6) * 3.0
        C = 10.0 ** rng.uniform(-1, 3)
        eps = 10.0 ** rng.uniform(-9, -2)
        oracle = CountingOracle(quad)
        line = LineRestriction(x_t, x_ag, oracle)
        res = binary_search(line, C=C, eps=eps)
        dist = float(np.linalg.norm(x_t - x_ag))
        assert res.probes <= probe_bound(C, quad.L, 2.0, dist, eps) + 2
        assert res.satisfied_value <= eps
        # one value and one gradient call per loop iteration plus the two
        # early-exit probes (the lam=0 probe costs two value calls)
        assert oracle.counter.grad_calls <= res.iterations + 1
        assert oracle.counter.value_calls <= res.iterations + 2


def test_interval_halving():
    line, _ = _line([2.0], [-1.0])
    res = binary_search(line, C=50.0, eps=1e-10)
    # b - a = 2^-iterations when the loop ran
    assert res.iterations >= 1
    denom = 2.0**res.iterations
    assert res.lam * denom == pytest.approx(round(res.lam * denom))


def test_budget_exceeded():
    # valid lambdas live only in a dyadic sliver of width 2^-20 next to 1;
    # a probe budget sized for a much larger delta must trip
    lam0 = 1.0 - 2.0**-20
    prob = Problem(lambda x: (1.0 - x[0]) * (lam0 - x[0]),
                   lambda x: np.array([2.0 * x[0] - 1.0 - lam0]),
                   1.0, 1.0, 2.0, PNorm(2.0))
    oracle = CountingOracle(prob)
    line = LineRestriction(np.array([0.0]), np.array([1.0]), oracle)
    with pytest.raises(BudgetExceeded):
        binary_search(line, C=1.0, eps=1e-12, max_probes=8)
    # with an honest budget the same search succeeds
    oracle2 = CountingOracle(prob)
    line2 = LineRestriction(np.array([0.0]), np.array([1.0]), oracle2)
    res = binary_search(line2, C=1.0, eps=1e-12, max_probes=64)
    assert res.satisfied_value <= 1e-12


def test_rejects_bad_arguments():
    line, _ = _line([1.0], [0.0])
    with pytest.raises(ValueError):
        binary_search(line, C=-1.0, eps=1e-6)
    with pytest.raises(ValueError):
        binary_search(line, C=1.0, eps=1e-6, max_probes=1)
