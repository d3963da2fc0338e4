"""Objective oracles, call accounting, a synthetic catalog, and certifiers.

Every ``Problem`` carries declared constants (tau, L, kappa) together with
the norm they refer to. Constants of catalog problems are set so that the
sampling certifiers below pass with them; where a family admits an exact
constant (quadratics, separable norm powers) the exact value is used, and
otherwise a deterministic sweep with a safety margin supplies it.

Catalog idsally accepted by the harness:

    quad                          isotropic convex quadratic  ||x||_2^2 / 2
    illquad:lmin=1e-4             log-spaced spectrum convex quadratic
    pnormpow:p=1.5,k=1.5          (L/k) * ||x - c||_p^k
    msnormpow:p=1.5,k=1.5,...     multi-scale smoothed norm power (hard case)
    radialstar:a=0.5,k=3          non-convex star-convex radial objective
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .geometry import (
    NormSpec,
    PNorm,
    as_vector,
    grad_norm_power,
    norm_eval,
)


@dataclass
class Problem:
    value_oracle: callable
    grad_oracle: callable
    tau: float
    L: float
    kappa: float
    norm: NormSpec
    minimizer: np.ndarray | None = None
    f_star: float | None = None
    name: str = "problem"

    def __post_init__(self):
        if not 1.0 < self.kappa <= 2.0:
            raise ValueError(f"kappa must lie in (1, 2], got {self.kappa}")
        if self.tau <= 0.0 or self.L <= 0.0:
            raise ValueError("tau and L must be positive")
        if self.minimizer is not None:
            self.minimizer = as_vector(self.minimizer)
            g = self.grad_oracle(self.minimizer)
            if np.linalg.norm(g) > 1e-8 * (1.0 + self.L):
                raise ValueError("declared minimizer has a non-vanishing gradient")

    def value(self, x) -> float:
        return float(self.value_oracle(x))

    def grad(self, x) -> np.ndarray:
        return np.asarray(self.grad_oracle(x), dtype=np.float64)

    def with_smoothness(self, L: float, norm: NormSpec) -> "Problem":
        """Same oracles, different declared smoothness (e.g. l1 reduction)."""
        return replace(self, L=L, norm=norm)


@dataclass
class OracleCounter:
    value_calls: int = 0
    grad_calls: int = 0


class CountingOracle:
    """Per-run view of a Problem that counts every oracle invocation."""

    def __init__(self, problem: Problem):
        self.problem = problem
        self.counter = OracleCounter()

    def value(self, x) -> float:
        self.counter.value_calls += 1
        return self.problem.value(x)

    def grad(self, x) -> np.ndarray:
        self.counter.grad_calls += 1
        return self.problem.grad(x)


# --- certified smoothness constants ----------------------------------------

@lru_cache(maxsize=None)
def holder_ratio_1d(kappa: float) -> float:
    """max over (x, y) of kappa * D_f(x, y) / |x - y|^kappa for f = |t|^kappa / kappa.

    By homogeneity the maximum is a function of u = x/y alone; a dense scan
    plus ternary refinement pins it to ~1e-12. For kappa = 2 this is 1.
    """
    if kappa == 2.0:
        return 1.0

    def ratio(u):
        return kappa * ((abs(u) ** kappa - 1.0) / kappa - (u - 1.0)) / abs(u - 1.0) ** kappa

    us = np.linspace(-60.0, 0.99, 200001)
    vals = (np.abs(us) ** kappa - 1.0) - kappa * (us - 1.0)
    vals /= np.abs(us - 1.0) ** kappa
    lo, hi = us[max(np.argmax(vals) - 1, 0)], us[min(np.argmax(vals) + 1, len(us) - 1)]
    for _ in range(200):
        m1, m2 = lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0
        if ratio(m1) < ratio(m2):
            lo = m1
        else:
            hi = m2
    return max(ratio(0.5 * (lo + hi)), 1.0)


def _sampled_smoothness_factor(spec: NormSpec, kappa: float, dim: int,
                               samples: int = 20000, seed: int = 20240) -> float:
    """Empirical Bregman-ratio constant for F = ||x||^kappa / kappa, with margin."""
    rng = np.random.default_rng(seed)
    worst = 1.0
    for _ in range(samples):
        scale = 10.0 ** rng.uniform(-3, 3)
        x = rng.standard_normal(dim) * scale
        y = rng.standard_normal(dim) * scale if rng.random() < 0.8 else -x
        d = x - y
        dn = norm_eval(spec, d)
        if dn == 0.0:
            continue
        D = (norm_eval(spec, x) ** kappa - norm_eval(spec, y) ** kappa) / kappa \
            - float(grad_norm_power(spec, kappa, y) @ d)
        worst = max(worst, abs(D) * kappa / dn**kappa)
    return worst * 1.02


def norm_power_smoothness_factor(spec: NormSpec, kappa: float, dim: int) -> float:
    """Certified constant H with |D_F| <= (H L / kappa) ||x-y||^kappa for the
    norm-power objective; exact in the separable and Euclidean-smooth cases."""
    if isinstance(spec, PNorm):
        if spec.p == 2.0 and kappa == 2.0:
            return 1.0
        if spec.p == kappa:
            # coordinate-separable: the vector ratio equals the 1-D ratio
            return holder_ratio_1d(kappa)
    return _sampled_smoothness_factor(spec, kappa, dim)


# --- catalog families -------------------------------------------------------

def make_norm_power_objective(spec: NormSpec, kappa: float, L: float,
                              center) -> Problem:
    """F(x) = (L/kappa) ||x - c||^kappa, the canonical convex instance."""
    if not 1.0 < kappa <= 2.0:
        raise ValueError(f"kappa must lie in (1, 2], got {kappa}")
    center = as_vector(center)
    H = norm_power_smoothness_factor(spec, kappa, center.shape[0])

    def value(x):
        return L * norm_eval(spec, as_vector(x) - center) ** kappa / kappa

    def grad(x):
        return L * grad_norm_power(spec, kappa, as_vector(x) - center)

    return Problem(value, grad, tau=1.0, L=L * H, kappa=kappa, norm=spec,
                   minimizer=center.copy(), f_star=0.0,
                   name=f"normpow(kappa={kappa})")


def make_multiscale_norm_power_objective(
    spec: NormSpec, kappa: float, L: float, dim: int,
    n_scales: int = 24, delta_min: float = 1e-6,
) -> Problem:
    """Smoothed norm power with log-spaced flat valleys.

    F(x) = (L/kappa) * sum_j w_j (sqrt(||x||^2 + d_j^2) - d_j)^kappa with
    equal weights. Each scale d_j looks quadratically flat below it, which
    forces the solver through every scale; unlike the plain norm power
    (whose sharp growth lets the method beat the worst-case rate), this
    family exhibits the theoretical T^-((kq+k-q)/q) exponent at desk scale.
    Convex, so tau = 1; minimizer 0.
    """
    deltas = np.logspace(math.log10(delta_min), 0.0, n_scales)
    weights = np.full(n_scales, 1.0 / n_scales)

    def profile(s):
        root = np.sqrt(s * s + deltas**2)
        return float(np.sum(weights * (root - deltas) ** kappa)) / kappa

    def profile_deriv(s):
        root = np.sqrt(s * s + deltas**2)
        return float(np.sum(weights * (root - deltas) ** (kappa - 1.0) * (s / root)))

    def value(x):
        return L * profile(norm_eval(spec, x))

    def grad(x):
        x = as_vector(x)
        n = norm_eval(spec, x)
        if n == 0.0:
            return np.zeros_like(x)
        return (L * profile_deriv(n) / n) * grad_norm_power(spec, 2.0, x)

    worst = 1.0
    rng = np.random.default_rng(77)
    for _ in range(6000):
        scale = 10.0 ** rng.uniform(-8, 1)
        a, b = rng.uniform(-3, 3, 2) * scale
        if a == b:
            continue
        D = profile(a) - profile(b) - profile_deriv(b) * (a - b)
        worst = max(worst, abs(D) * kappa / abs(a - b) ** kappa)
    # vector pairs probe the non-radial directions the 1-D sweep misses
    dim_rng = np.random.default_rng(78)
    for _ in range(4000):
        scale = 10.0 ** dim_rng.uniform(-6, 1)
        x = dim_rng.standard_normal(dim) * scale
        y = dim_rng.standard_normal(dim) * scale
        d = x - y
        dn = norm_eval(spec, d)
        if dn == 0.0:
            continue
        D = value(x) / L - value(y) / L - float(grad(y) @ d) / L
        worst = max(worst, abs(D) * kappa / dn**kappa)

    return Problem(value, grad, tau=1.0, L=L * worst * 1.05, kappa=kappa,
                   norm=spec, minimizer=np.zeros(dim), f_star=0.0,
                   name=f"msnormpow(kappa={kappa},scales={n_scales})")


def make_radial_star_objective(amplitude: float, frequency: int,
                               tau: float = 2.0) -> Problem:
    """F(x) = ||x||_2^2 * (1 + a sin^2(k theta)) on the plane.

    Non-convex for a > 0 (the angular ripple breaks convexity between rays)
    but star-convex around the origin: <grad F(x), x> = 2 F(x) exactly, so
    any tau >= 1/2 certifies. Smoothness is certified from the maximal
    Hessian norm on the unit circle (the Hessian is 0-homogeneous).
    """
    if not 0.0 <= amplitude < 1.0:
        raise ValueError("amplitude must lie in [0, 1)")
    if frequency < 1:
        raise ValueError("frequency must be a positive integer")
    a, k = float(amplitude), int(frequency)

    def value(x):
        x = as_vector(x)
        r2 = float(x @ x)
        if r2 == 0.0:
            return 0.0
        theta = math.atan2(x[1], x[0])
        return r2 * (1.0 + a * math.sin(k * theta) ** 2)

    def grad(x):
        x = as_vector(x)
        r2 = float(x @ x)
        if r2 == 0.0:
            return np.zeros(2)
        r = math.sqrt(r2)
        theta = math.atan2(x[1], x[0])
        m = 1.0 + a * math.sin(k * theta) ** 2
        m_prime = a * k * math.sin(2.0 * k * theta)
        e_r = x / r
        e_theta = np.array([-x[1], x[0]]) / r
        return 2.0 * r * m * e_r + r * m_prime * e_theta

    # Hessian is homogeneous of degree 0: scan the unit circle
    L = 0.0
    h = 1e-6
    for theta in np.linspace(0.0, 2.0 * math.pi, 4096, endpoint=False):
        pt = np.array([math.cos(theta), math.sin(theta)])
        cols = []
        for j in range(2):
            e = np.zeros(2)
            e[j] = h
            cols.append((grad(pt + e) - grad(pt - e)) / (2.0 * h))
        L = max(L, float(np.linalg.norm(np.array(cols).T, 2)))
    L *= 1.01

    problem = Problem(value, grad, tau=tau, L=L, kappa=2.0, norm=PNorm(2.0),
                      minimizer=np.zeros(2), f_star=0.0,
                      name=f"radialstar(a={a},k={k})")
    star = certify_star_convexity(problem, tau, samples=2000, radius=10.0, seed=11)
    smooth = certify_weak_smoothness(problem, problem.L, 2.0, samples=2000, seed=12)
    if not (star.passed and smooth.passed):
        raise ValueError(
            f"radial star certification failed: tau worst {star.worst:.3e}, "
            f"smoothness ratio {smooth.worst:.6f} vs L {problem.L:.6f}"
        )
    return problem


def make_quadratic(dim: int, eigenvalues=None) -> Problem:
    """Convex quadratic 0.5 x' diag(lam) x; isotropic when eigenvalues is None."""
    if eigenvalues is None:
        lam = np.ones(dim)
        name = "quad"
    else:
        lam = as_vector(eigenvalues)
        if np.any(lam <= 0):
            raise ValueError("quadratic spectrum must be positive")
        name = "illquad"

    def value(x):
        x = as_vector(x)
        return 0.5 * float(x @ (lam * x))

    def grad(x):
        return lam * as_vector(x)

    return Problem(value, grad, tau=1.0, L=float(np.max(lam)), kappa=2.0,
                   norm=PNorm(2.0), minimizer=np.zeros(dim), f_star=0.0,
                   name=name)


# --- certifiers --------------------------------------------------------------

@dataclass
class CertificationReport:
    passed: bool
    worst: float
    samples: int
    seed: int
    detail: str = ""


def certify_star_convexity(problem: Problem, tau: float, samples: int,
                           radius: float, seed: int) -> CertificationReport:
    """Checks tau <grad F(x), x - x*> >= F(x) - F(x*) on a ball sample.

    Reports the worst violation max(F(x) - F* - tau <grad F(x), x - x*>);
    passes iff every sampled violation is within 1e-9 * (1 + |F(x)|).
    """
    if problem.minimizer is None:
        raise ValueError("star-convexity certification needs a known minimizer")
    rng = np.random.default_rng(seed)
    x_star = problem.minimizer
    f_star = problem.f_star if problem.f_star is not None else problem.value(x_star)
    d = x_star.shape[0]
    worst = -math.inf
    passed = True
    for _ in range(samples):
        u = rng.standard_normal(d)
        u *= radius * rng.random() ** (1.0 / d) / np.linalg.norm(u)
        x = x_star + u
        fx = problem.value(x)
        violation = fx - f_star - tau * float(problem.grad(x) @ (x - x_star))
        worst = max(worst, violation)
        if violation > 1e-9 * (1.0 + abs(fx)):
            passed = False
    return CertificationReport(passed, worst, samples, seed,
                               detail=f"tau={tau}, radius={radius}")


def certify_weak_smoothness(problem: Problem, L: float, kappa: float,
                            samples: int, seed: int) -> CertificationReport:
    """Checks |D_F(x, y)| * kappa / ||x - y||^kappa <= L (1 + 1e-9) on pairs.

    Pairs are drawn at log-uniform scales so both the flat and the sharp
    regime of the objective are probed; reports the worst ratio.
    """
    rng = np.random.default_rng(seed)
    d = problem.minimizer.shape[0] if problem.minimizer is not None else 2
    center = problem.minimizer if problem.minimizer is not None else np.zeros(d)
    worst = 0.0
    passed = True
    for _ in range(samples):
        scale = 10.0 ** rng.uniform(-3, 2)
        x = center + rng.standard_normal(d) * scale
        y = center + (rng.standard_normal(d) * scale if rng.random() < 0.8 else -(x - center))
        dn = norm_eval(problem.norm, x - y)
        if dn == 0.0:
            continue
        D = problem.value(x) - problem.value(y) - float(problem.grad(y) @ (x - y))
        ratio = abs(D) * kappa / dn**kappa
        worst = max(worst, ratio)
        if ratio > L * (1.0 + 1e-9):
            passed = False
    return CertificationReport(passed, worst, samples, seed,
                               detail=f"L={L}, kappa={kappa}")


# --- catalog lookup ----------------------------------------------------------

def _parse_params(spec_str: str) -> tuple[str, dict]:
    head, _, tail = spec_str.partition(":")
    params = {}
    if tail:
        for item in tail.split(","):
            key, _, val = item.partition("=")
            params[key.strip()] = val.strip()
    return head.strip(), params


def problem_from_id(problem_id: str, dim: int) -> Problem:
    """Builds a catalog Problem from a harness id string."""
    kind, params = _parse_params(problem_id)
    if kind == "quad":
        return make_quadratic(dim)
    if kind == "illquad":
        lmin = float(params.get("lmin", 1e-4))
        lam = np.logspace(math.log10(lmin), 0.0, dim)
        return make_quadratic(dim, lam)
    if kind == "pnormpow":
        p = float(params.get("p", 1.5))
        kappa = float(params.get("k", params.get("kappa", 1.5)))
        L = float(params.get("L", 1.0))
        return make_norm_power_objective(PNorm(p), kappa, L, np.zeros(dim))
    if kind == "msnormpow":
        p = float(params.get("p", 1.5))
        kappa = float(params.get("k", params.get("kappa", 1.5)))
        L = float(params.get("L", 1.0))
        n_scales = int(params.get("scales", 24))
        delta_min = float(params.get("dmin", 1e-6))
        return make_multiscale_norm_power_objective(
            PNorm(p), kappa, L, dim, n_scales=n_scales, delta_min=delta_min)
    if kind == "radialstar":
        if dim != 2:
            raise ValueError("radialstar is a planar objective (dim must be 2)")
        a = float(params.get("a", 0.5))
        k = int(params.get("k", 3))
        tau = float(params.get("tau", 2.0))
        return make_radial_star_objective(a, k, tau)
    raise ValueError(f"unknown problem id {problem_id!r}")
