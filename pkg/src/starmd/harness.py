"""Experiment orchestration: configs, trace files, rate fits, baselines.

Trace CSV schema (one row per iteration, counters cumulative):

    t,lambda,probes,value_calls,grad_calls,gap,R,C_t,eps_t,eta_t,alpha_t

gap and R are empty when the problem has no known minimizer. Runs are
deterministic functions of their config, so identical configs produce
byte-identical traces.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass

import numpy as np

from .adversary import (
    AdversaryState,
    adversary_answer,
    adversary_init,
    assemble_counterexamples,
    query_budget,
    verify_counterexample,
)
from .dgf import Geometry, make_geometry
from .geometry import PNorm, norm_eval, norm_spec_from_dict
from .objectives import CountingOracle, Problem, problem_from_id
from .solver import IterationRecord, RunResult, run

TRACE_HEADER = ["t", "lambda", "probes", "value_calls", "grad_calls",
                "gap", "R", "C_t", "eps_t", "eta_t", "alpha_t"]


@dataclass
class ExperimentConfig:
    problem: str = "quad"
    dim: int = 50
    mode: str = "smooth"
    T: int = 256
    alpha: float | None = None
    B: float | None = None
    seed: int = 0
    x1_kind: str = "e1"              # e1 | ones | gauss (seeded direction)
    x1_scale: float = 1.0            # norm of x_1 in the run geometry
    geometry: dict | None = None     # NormSpec as a JSON dict; default: problem norm
    out: str | None = None

    @classmethod
    def from_file(cls, path: str, **overrides) -> "ExperimentConfig":
        with open(path) as fh:
            data = json.load(fh)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)

    def resolve(self) -> tuple[Problem, Geometry, np.ndarray]:
        problem = problem_from_id(self.problem, self.dim)
        norm = (norm_spec_from_dict(self.geometry) if self.geometry
                else problem.norm)
        geom = make_geometry(norm)
        if self.x1_kind == "e1":
            x1 = np.zeros(self.dim)
            x1[0] = 1.0
        elif self.x1_kind == "ones":
            x1 = np.ones(self.dim)
        elif self.x1_kind == "gauss":
            x1 = np.random.default_rng(self.seed).standard_normal(self.dim)
        else:
            raise ValueError(f"unknown x1_kind {self.x1_kind!r}")
        x1 *= self.x1_scale / norm_eval(geom.norm, x1)
        return problem, geom, x1


def _fmt(value) -> str:
    if value is None:
        return ""
    return repr(float(value))


def trace_to_csv(result: RunResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    for rec in result.records:
        writer.writerow([
            rec.t, _fmt(rec.lam), rec.probes, rec.value_calls,
            rec.grad_calls, _fmt(rec.gap), _fmt(rec.radius), _fmt(rec.C_t),
            _fmt(rec.eps_t), _fmt(rec.eta_t), _fmt(rec.alpha_t),
        ])
    return buf.getvalue()


def run_experiment(config: ExperimentConfig) -> RunResult:
    """Executes a config and (optionally) writes its CSV trace."""
    problem, geom, x1 = config.resolve()
    result = run(problem, geom, config.T, x1, config.mode,
                 alpha=config.alpha, B=config.B)
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(trace_to_csv(result))
    return result


@dataclass
class RateFit:
    slope: float
    intercept: float
    window: tuple[int, int]
    residual: float


def fit_rate(source) -> RateFit:
    """OLS of log(gap_t) on log(t) over the second half of the iterations.

    ``source`` is a RunResult, a gap array, or a trace CSV path. The early
    iterations carry the schedule transients and the log(T) factor, so the
    fit window is [T/2, T]. Zero gaps are clamped at 1e-300 with a warning.
    """
    if isinstance(source, RunResult):
        gaps = source.gaps
        if gaps is None:
            raise ValueError("rate fit needs a known f_star")
    elif isinstance(source, (str, bytes)):
        with open(source) as fh:
            rows = list(csv.DictReader(fh))
        if not rows or any(row["gap"] == "" for row in rows):
            raise ValueError("trace has no gap column; rate fit unavailable")
        gaps = np.array([float(row["gap"]) for row in rows])
    else:
        gaps = np.asarray(source, dtype=np.float64)
    T = len(gaps)
    if T < 64:
        raise ValueError(f"rate fit needs at least 64 iterations, got {T}")
    if np.any(gaps <= 0.0):
        warnings.warn("gap reached zero; clamping at 1e-300 for the log fit")
        gaps = np.maximum(gaps, 1e-300)
    t_lo = T // 2
    ts = np.arange(1, T + 1)
    window = ts >= t_lo
    x = np.log(ts[window])
    y = np.log(gaps[window])
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - slope * x - intercept) ** 2)))
    return RateFit(float(slope), float(intercept), (t_lo, T), residual)


def l1_reduction(dim: int, s: float, kappa: float) -> tuple[Geometry, float]:
    """Geometry and constant inflation for l1-declared smoothness.

    An (L, kappa)-weakly smooth objective w.r.t. ||.||_1 is
    (L d^(kappa s/(s+1)), kappa)-weakly smooth w.r.t. ||.||_q with
    q = 1 + s, a geometry with a proper distance-generating function.
    """
    if s <= 0:
        raise ValueError("reduction exponent s must be positive")
    geom = make_geometry(PNorm(1.0 + s))
    inflation = float(dim) ** (kappa * s / (s + 1.0))
    return geom, inflation


def baseline_mirror_descent(problem: Problem, geom: Geometry, T: int, x1,
                            step) -> RunResult:
    """Unaccelerated comparator: one mirror step on grad F(x_t) per iteration.

    ``step`` is a constant step size or a callable t -> eta_t. Returns a
    RunResult so the same fit/trace tooling applies; search-specific fields
    are zeroed and x_ag coincides with x_t.
    """
    from .solver import mirror_step

    eta_of = step if callable(step) else (lambda t: float(step))
    oracle = CountingOracle(problem)
    x = np.asarray(x1, dtype=np.float64).copy()
    f_star = problem.f_star
    x_star = problem.minimizer

    records, f_list, radius_list = [], [oracle.value(x)], []
    for t in range(1, T + 1):
        if x_star is not None:
            radius_list.append(norm_eval(geom.norm, x - x_star))
        g = oracle.grad(x)
        x = mirror_step(geom, x, g, eta_of(t))
        f_val = oracle.value(x)
        f_list.append(f_val)
        records.append(IterationRecord(
            t=t, lam=0.0, probes=0,
            value_calls=oracle.counter.value_calls,
            grad_calls=oracle.counter.grad_calls,
            gap=(f_val - f_star) if f_star is not None else None,
            radius=radius_list[-1] if x_star is not None else None,
            C_t=0.0, eps_t=0.0, eta_t=eta_of(t), alpha_t=0.0, clamped=False))

    n = len(records)
    return RunResult(
        records=records, x_final=x, schedule=None, mode="baseline",
        problem=problem, geometry=geom,
        f_ag=np.array(f_list), f_md=np.zeros(n), lam=np.zeros(n),
        probes=np.zeros(n, dtype=int), dist=np.zeros(n),
        satisfied=np.zeros(n), rows=[],
        d_star=None,
        radius=np.array(radius_list) if x_star is not None else None,
        counter=oracle.counter)


# --- adversary games ---------------------------------------------------------

@dataclass
class GameReport:
    C: float
    eps: float
    Lstar: float
    strategy: str
    n_queries: int
    budget: float
    phi_history: list
    transcript: list          # (lambda, g, g') triples
    growth_ok: bool
    verified: bool
    detail: str

    def to_json(self) -> str:
        return json.dumps({
            "C": self.C, "eps": self.eps, "Lstar": self.Lstar,
            "strategy": self.strategy, "n_queries": self.n_queries,
            "budget": self.budget, "phi_history": self.phi_history,
            "transcript": self.transcript, "growth_ok": self.growth_ok,
            "verified": self.verified, "detail": self.detail,
        }, indent=2)


def _bisection_queries(state: AdversaryState, n: int):
    """Algorithm-2 style querier on [0, 1] driven by the answers."""
    lo, hi = 0.0, 1.0
    for _ in range(n):
        lam = 0.5 * (lo + hi)
        g, _gp = adversary_answer(state, lam)
        if g > 0.0:
            lo = lam
        else:
            hi = lam


def _grid_queries(state: AdversaryState, n: int):
    for i in range(1, n + 1):
        adversary_answer(state, i / (n + 1.0))


def run_adversary_game(C: float, eps: float, Lstar: float, strategy: str,
                       N: int) -> GameReport:
    """Plays N queries against the adversary and verifies the counterexample."""
    state = adversary_init(C, eps, Lstar)
    if strategy == "bisection":
        _bisection_queries(state, N)
    elif strategy == "grid":
        _grid_queries(state, N)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    growth_ok = all(
        after <= 5.0 * before * (1.0 + 1e-9)
        for before, after in zip(state.phi_history, state.phi_history[1:]))
    g1, g2 = assemble_counterexamples(state)
    report = verify_counterexample(state, g1, g2)
    return GameReport(
        C=C, eps=eps, Lstar=Lstar, strategy=strategy, n_queries=N,
        budget=query_budget(C, eps, Lstar),
        phi_history=list(state.phi_history),
        transcript=[list(entry) for entry in state.log],
        growth_ok=growth_ok,
        verified=report.passed and growth_ok,
        detail=report.detail)
