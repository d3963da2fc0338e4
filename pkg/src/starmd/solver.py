"""The accelerated outer loop: binary search, mirror step, proximal step.

Each iteration finds a momentum point x_md on the segment [x_t, x_ag] with
the binary search, takes a mirror step through grad(psi) to update x_t and
an unconstrained proximal step in the q-th norm power to update x_ag:

    x_{t+1}   = (grad psi)^-1 ( grad psi(x_t) - eta_t grad F(x_md) )
    x_{t+1}ag = x_md + phi_q^-1 ( -(alpha_t / mu) grad F(x_md) )

Runs record a full trace (probes, oracle counters, gap and iterate radius
when the minimizer is known, schedule values) for the rate fits and the
inequality checks in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dgf import Geometry, bregman, grad_psi, grad_psi_inverse
from .geometry import as_vector, inverse_grad_norm_power, norm_eval
from .linesearch import LineRestriction, binary_search, probe_bound
from .objectives import CountingOracle, Problem
from .schedules import Schedule, ScheduleRow, alpha_from_radius


class CertificationMismatch(RuntimeError):
    """A re-checked binary-search condition failed after the search returned."""


def mirror_step(geom: Geometry, x_t, grad, eta: float) -> np.ndarray:
    """argmin_x { eta <grad, x> + D_psi(x, x_t) } via mirror-map stationarity."""
    return grad_psi_inverse(geom, grad_psi(geom, x_t) - eta * as_vector(grad))


def prox_step(geom: Geometry, x_md, grad, alpha_t: float) -> np.ndarray:
    """argmin_x { alpha_t <grad, x> + (mu/q) ||x - x_md||^q }."""
    grad = as_vector(grad)
    u = inverse_grad_norm_power(geom.norm, geom.q, -(alpha_t / geom.mu) * grad)
    return as_vector(x_md) + u


@dataclass
class IterationRecord:
    t: int
    lam: float
    probes: int
    value_calls: int   # cumulative
    grad_calls: int    # cumulative
    gap: float | None
    radius: float | None
    C_t: float
    eps_t: float
    eta_t: float
    alpha_t: float
    clamped: bool


@dataclass
class RunResult:
    records: list[IterationRecord]
    x_final: np.ndarray
    schedule: Schedule
    mode: str
    problem: Problem
    geometry: Geometry
    # per-iteration arrays for the analysis checks (index 0 <-> t = 1)
    f_ag: np.ndarray          # length T+1: F(x_1^ag) .. F(x_{T+1}^ag)
    f_md: np.ndarray
    lam: np.ndarray
    probes: np.ndarray
    dist: np.ndarray          # ||x_t - x_t^ag||
    satisfied: np.ndarray     # lam g' + C g at the accepted point
    rows: list[ScheduleRow]
    d_star: np.ndarray | None  # D_psi(x_star, x_t), length T+1, if known
    radius: np.ndarray | None  # R_t = max ||{x_t, x_ag, x_md} - x_star||
    counter: object = None

    @property
    def gaps(self) -> np.ndarray | None:
        """Gap after t iterations: F(x_{t+1}^ag) - F_star, length T."""
        if self.problem.f_star is None:
            return None
        return self.f_ag[1:] - self.problem.f_star

    @property
    def initial_gap(self) -> float | None:
        if self.problem.f_star is None:
            return None
        return float(self.f_ag[0] - self.problem.f_star)


def run(problem: Problem, geom: Geometry, T: int, x1, mode: str,
        alpha: float | None = None, B: float | None = None,
        probe_slack: int = 16) -> RunResult:
    """Runs T accelerated iterations from x_1 = x_1^ag.

    Exactly one of ``alpha`` (base step) and ``B`` (radius bound with
    D_psi(x_star, x_1)/mu <= B) must be given; B is converted through the
    radius tuning (general mode) or alpha = mu B / L (smooth mode).
    """
    if (alpha is None) == (B is None):
        raise ValueError("pass exactly one of alpha or B")
    x1 = as_vector(x1)
    if mode == "smooth" and geom.q != 2.0:
        raise ValueError("smooth mode needs a q = 2 geometry")
    if alpha is None:
        if mode == "smooth":
            alpha = geom.mu * B / problem.L
        else:
            alpha = alpha_from_radius(B, geom.mu, problem.L, geom.q,
                                      problem.kappa)
    schedule = Schedule(mode, geom.q, problem.kappa, problem.tau, geom.mu,
                        problem.L, alpha)

    oracle = CountingOracle(problem)
    x_star = problem.minimizer
    f_star = problem.f_star

    x_t = x1.copy()
    x_ag = x1.copy()
    f_ag_val = oracle.value(x_ag)

    records: list[IterationRecord] = []
    rows: list[ScheduleRow] = []
    f_ag_list = [f_ag_val]
    f_md_list, lam_list, probes_list, dist_list, sat_list = [], [], [], [], []
    d_star_list = [bregman(geom, x_star, x_t)] if x_star is not None else None
    radius_list = [] if x_star is not None else None

    for t in range(1, T + 1):
        row = schedule.row(t)
        rows.append(row)
        dist = norm_eval(geom.norm, x_t - x_ag)
        budget = probe_bound(row.C_t, problem.L, problem.kappa, dist,
                             row.eps_t) + probe_slack
        line = LineRestriction(x_t, x_ag, oracle, f_target=f_ag_val)
        res = binary_search(line, row.C_t, row.eps_t, max_probes=budget)
        if not res.satisfied_value <= row.eps_t:
            raise CertificationMismatch(
                f"t={t}: accepted lambda has stopping value "
                f"{res.satisfied_value:.6e} > eps_t={row.eps_t:.6e}")
        x_md = res.x_md
        grad_md = res.grad_md if res.grad_md is not None else oracle.grad(x_md)

        if x_star is not None:
            radius_list.append(max(
                norm_eval(geom.norm, x_t - x_star),
                norm_eval(geom.norm, x_ag - x_star),
                norm_eval(geom.norm, x_md - x_star)))

        x_t = mirror_step(geom, x_t, grad_md, row.eta_t)
        x_ag = prox_step(geom, x_md, grad_md, row.alpha_t)
        f_ag_val = oracle.value(x_ag)

        f_ag_list.append(f_ag_val)
        f_md_list.append(res.f_md)
        lam_list.append(res.lam)
        probes_list.append(res.probes)
        dist_list.append(dist)
        sat_list.append(res.satisfied_value)
        if d_star_list is not None:
            d_star_list.append(bregman(geom, x_star, x_t))

        records.append(IterationRecord(
            t=t, lam=res.lam, probes=res.probes,
            value_calls=oracle.counter.value_calls,
            grad_calls=oracle.counter.grad_calls,
            gap=(f_ag_val - f_star) if f_star is not None else None,
            radius=radius_list[-1] if radius_list is not None else None,
            C_t=row.C_t, eps_t=row.eps_t, eta_t=row.eta_t,
            alpha_t=row.alpha_t, clamped=row.clamped))

    return RunResult(
        records=records, x_final=x_ag, schedule=schedule, mode=mode,
        problem=problem, geometry=geom,
        f_ag=np.array(f_ag_list), f_md=np.array(f_md_list),
        lam=np.array(lam_list), probes=np.array(probes_list, dtype=int),
        dist=np.array(dist_list), satisfied=np.array(sat_list), rows=rows,
        d_star=np.array(d_star_list) if d_star_list is not None else None,
        radius=np.array(radius_list) if radius_list is not None else None,
        counter=oracle.counter)


@dataclass
class TelescopeReport:
    passed: bool
    worst_violation: float    # max over t of (lhs - rhs) / scale
    worst_t: int


def telescope_check(run_result: RunResult, rtol: float = 1e-8) -> TelescopeReport:
    """Per-iteration inequality behind the convergence proof:

        A_t (F(x_{t+1}^ag) - F*) <= D_psi(x*, x_t) - D_psi(x*, x_{t+1})
                                    + eta_t eps_t + A_{t-1} (F(x_t^ag) - F*) + B_t

    checked on the recorded run (requires a known minimizer).
    """
    rr = run_result
    if rr.d_star is None or rr.problem.f_star is None:
        raise ValueError("telescope check needs a synthetic problem")
    f_star = rr.problem.f_star
    worst, worst_t = -math.inf, 0
    A_prev = 0.0
    for i, row in enumerate(rr.rows):
        lhs = row.A_t * (rr.f_ag[i + 1] - f_star)
        rhs = (rr.d_star[i] - rr.d_star[i + 1] + row.eta_t * row.eps_t
               + A_prev * (rr.f_ag[i] - f_star) + row.B_t)
        scale = max(1.0, abs(lhs), abs(rhs))
        viol = (lhs - rhs) / scale
        if viol > worst:
            worst, worst_t = viol, row.t
        A_prev = row.A_t
    return TelescopeReport(worst <= rtol, worst, worst_t)


@dataclass
class RadiusReport:
    passed: bool
    K_n1: float
    n2: float
    exponent: float
    c: float
    worst_ratio: float
    worst_t: int


def radius_bound_check(run_result: RunResult, K_n1: float | None = None,
                       n2: float | None = None) -> RadiusReport:
    """Polynomial iterate-growth bound R_t <= c K^(n1(q-1)/(q-kappa)) t^((q-1)(n2+1)/(q-kappa)).

    When not supplied, the minimal (K^n1, n2) are read off the actual
    schedule via max((q L eta_t / kappa)^(1/(q-1)), (L alpha_t / kappa)^(1/(q-1)))
    <= K^n1 t^n2; c is calibrated at t = 1.
    """
    rr = run_result
    if rr.radius is None:
        raise ValueError("radius check needs a synthetic problem")
    if rr.mode != "general":
        raise ValueError("the growth theorem covers the general (kappa < q) mode")
    q, kappa, L = rr.geometry.q, rr.problem.kappa, rr.problem.L
    ts = np.arange(1, len(rr.rows) + 1, dtype=float)
    eta = np.array([row.eta_t for row in rr.rows])
    alpha = np.array([row.alpha_t for row in rr.rows])
    m = np.maximum((q * L * eta / kappa) ** (1.0 / (q - 1.0)),
                   (L * alpha / kappa) ** (1.0 / (q - 1.0)))
    if n2 is None:
        # eta_t grows like t^(q-1-beta); alpha_t decays
        beta = rr.schedule.beta
        n2 = max((q - 1.0 - beta) / (q - 1.0), 0.0)
    if K_n1 is None:
        K_n1 = float(np.max(m / ts**n2))
    exponent = (q - 1.0) * (n2 + 1.0) / (q - kappa)
    base = K_n1 ** ((q - 1.0) / (q - kappa))
    c = rr.radius[0] / base if base > 0 else 1.0
    bound = c * base * ts**exponent
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(bound > 0, rr.radius / bound, np.inf)
    worst_idx = int(np.argmax(ratios))
    worst = float(ratios[worst_idx])
    return RadiusReport(worst <= 1.0 + 1e-9, K_n1, n2, exponent, c,
                        worst, worst_idx + 1)
