"""Step-size and stopping-parameter schedules for the accelerated loop.

General mode (1 < kappa < q), with r = (q-kappa)/kappa, M = (r/q)^r and
beta = q - kappa + (q-kappa)/q:

    alpha_t = (tau (q-beta))^(q-kappa) * alpha / t^beta
    eta_t   = alpha_t * (t / (tau (q-beta)))^(q-1)
    A_t     = eta_t^{q*} / alpha_t^{q*-1}            (1/q + 1/q* = 1)
    C_t     = (eta_t/alpha_t)^(q*-1) - 1/tau  =  (t/(q-beta) - 1)/tau
    eps_t   = alpha^(q/(q-kappa)) M^(1/r) L^(1+1/r) / (t eta_t mu^(1/r))
    B_t     = eta_t * eps_t                          (the inexactness residual)

C_t is clamped at zero for the first iterations where t < q - beta; the
raw value is kept on the row for the trace. Note (eta_t/alpha_t)^(q*-1)
simplifies to t/(tau(q-beta)), not to (q-beta)t/tau; the latter form fails
the A_t - A_{t-1} <= eta_t/tau growth condition that the telescoping
argument rests on.

Smooth mode (q = kappa = 2), valid for alpha < 2 mu / L:

    alpha_t = alpha,  eta_t = alpha t / (2 tau),  eps_t = 1/(t eta_t)
    A_t     = mu eta_t^2 / (alpha (2 mu - L alpha))
    C_t     = A_t/eta_t - 1/tau (clamped at zero),  B_t = 0

A_t here is the coefficient the binary-search condition actually carries
in the smooth analysis; it reduces to eta_t^2/alpha at alpha = mu/L.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ScheduleRow:
    t: int
    alpha_t: float
    eta_t: float
    C_t: float
    eps_t: float
    A_t: float
    B_t: float
    C_raw: float      # before the >= 0 clamp
    clamped: bool


class Schedule:
    """Precomputable per-iteration parameters; rows are pure functions of t."""

    def __init__(self, mode: str, q: float, kappa: float, tau: float,
                 mu: float, L: float, alpha: float):
        if tau <= 0 or mu <= 0 or L <= 0 or alpha <= 0:
            raise ValueError("tau, mu, L, alpha must be positive")
        if mode == "general":
            if not 1.0 < kappa < q:
                raise ValueError(
                    f"general mode needs 1 < kappa < q, got kappa={kappa}, q={q}"
                    + ("; use smooth mode" if kappa == q == 2.0 else ""))
        elif mode == "smooth":
            if not (kappa == 2.0 and q == 2.0):
                raise ValueError(
                    f"smooth mode is the q = kappa = 2 tuning, got "
                    f"kappa={kappa}, q={q}")
            if alpha >= 2.0 * mu / L:
                raise ValueError(
                    f"smooth mode needs alpha < 2 mu / L = {2.0 * mu / L:.6g}, "
                    f"got {alpha:.6g}")
        else:
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.q, self.kappa = float(q), float(kappa)
        self.tau, self.mu, self.L, self.alpha = tau, mu, L, alpha
        if mode == "general":
            self.r = (q - kappa) / kappa
            self.M = (self.r / q) ** self.r
            self.beta = q - kappa + (q - kappa) / q
        else:
            self.r = self.M = self.beta = None

    def row(self, t: int) -> ScheduleRow:
        if t < 1:
            raise ValueError(f"iteration index must be >= 1, got {t}")
        if self.mode == "general":
            return self._general_row(t)
        return self._smooth_row(t)

    def _general_row(self, t: int) -> ScheduleRow:
        q, kappa, tau, mu, L, alpha = (self.q, self.kappa, self.tau,
                                       self.mu, self.L, self.alpha)
        r, M, beta = self.r, self.M, self.beta
        qmb = q - beta
        alpha_t = (tau * qmb) ** (q - kappa) * alpha / t**beta
        eta_t = alpha_t * (t / (tau * qmb)) ** (q - 1.0)
        C_raw = (t / qmb - 1.0) / tau
        eps_t = (alpha ** (q / (q - kappa)) * M ** (1.0 / r)
                 * L ** (1.0 + 1.0 / r) / (t * eta_t * mu ** (1.0 / r)))
        A_t = eta_t * t / (tau * qmb)   # = eta^{q*}/alpha^{q*-1}
        B_t = eta_t * eps_t
        return ScheduleRow(t, alpha_t, eta_t, max(C_raw, 0.0), eps_t, A_t,
                           B_t, C_raw, C_raw < 0.0)

    def _smooth_row(self, t: int) -> ScheduleRow:
        tau, mu, L, alpha = self.tau, self.mu, self.L, self.alpha
        eta_t = alpha * t / (2.0 * tau)
        eps_t = 1.0 / (t * eta_t)
        A_t = mu * eta_t**2 / (alpha * (2.0 * mu - L * alpha))
        C_raw = A_t / eta_t - 1.0 / tau
        return ScheduleRow(t, alpha, eta_t, max(C_raw, 0.0), eps_t, A_t,
                           0.0, C_raw, C_raw < 0.0)


def schedule_general(q: float, kappa: float, tau: float, mu: float, L: float,
                     alpha: float, t: int) -> tuple[float, float, float, float]:
    """(alpha_t, eta_t, C_t, eps_t) of the general tuning at iteration t."""
    row = Schedule("general", q, kappa, tau, mu, L, alpha).row(t)
    return row.alpha_t, row.eta_t, row.C_t, row.eps_t


def schedule_smooth(tau: float, mu: float, L: float, alpha: float,
                    t: int) -> tuple[float, float, float, float]:
    """(alpha_t, eta_t, C_t, eps_t) of the q = kappa = 2 tuning at iteration t."""
    row = Schedule("smooth", 2.0, 2.0, tau, mu, L, alpha).row(t)
    return row.alpha_t, row.eta_t, row.C_t, row.eps_t


def alpha_from_radius(B: float, mu: float, L: float, q: float,
                      kappa: float) -> float:
    """Radius-based base step: alpha = (mu/L) ((q-kappa) B / kappa)^((q-kappa)/q).

    B is any bound with D_psi(x_star, x_1) / mu <= B; kappa < q.
    """
    if B <= 0:
        raise ValueError("radius bound B must be positive")
    if not kappa < q:
        raise ValueError("radius tuning applies to kappa < q")
    return (mu / L) * ((q - kappa) * B / kappa) ** ((q - kappa) / q)
