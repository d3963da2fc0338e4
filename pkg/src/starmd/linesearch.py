"""Generalized binary search for the momentum point.

Restricting F to the segment between the iterate and the aggregated point,
g(lam) = F(lam * x_ag + (1 - lam) * x_t) - F(x_ag), the search returns a
lam whose stopping value  lam * g'(lam) + C * g(lam)  is at most eps.

Probe accounting: the g'(1) early exit costs one probe, the C * g(0) early
exit a second, and every bisection iteration exactly one more (one value
and one gradient call each). A completed search never exceeds
``probe_bound(C, L, kappa, dist, eps) + 2`` probes; running past the probe
budget signals that the declared smoothness constants are wrong and raises
``BudgetExceeded``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class BudgetExceeded(RuntimeError):
    """The search passed its probe budget: smoothness assumptions violated."""


@dataclass
class LineRestriction:
    """The segment restriction g with cached endpoint data."""

    x_base: np.ndarray      # x_t, reached at lam = 0
    x_target: np.ndarray    # x_t^ag, reached at lam = 1
    oracle: object          # .value(x) / .grad(x), e.g. a CountingOracle
    f_target: float | None = None   # known F(x_t^ag), saves one value call

    def point(self, lam: float) -> np.ndarray:
        return lam * self.x_target + (1.0 - lam) * self.x_base


@dataclass
class SearchResult:
    lam: float
    x_md: np.ndarray
    probes: int
    satisfied_value: float   # lam * g'(lam) + C * g(lam) at the returned point
    g_value: float           # g(lam) = F(x_md) - F(x_ag)
    f_md: float              # F(x_md)
    grad_md: np.ndarray | None  # gradient at x_md when a probe computed it
    iterations: int          # bisection loop iterations


def probe_bound(C: float, L: float, kappa: float, dist: float, eps: float) -> int:
    """ceil(log2(1/delta)) + 2 with delta = min(1/C, (kappa eps / (4 L dist^kappa))^(1/kappa)).

    The bisection interval halves each iteration and any point within delta
    of a sign change of g' satisfies the stopping condition, so the loop
    runs at most log2(1/delta) + 1 times on top of the two endpoint probes.
    """
    candidates = []
    if C > 0.0:
        candidates.append(1.0 / C)
    if dist > 0.0 and L > 0.0:
        candidates.append((kappa * eps / (4.0 * L * dist**kappa)) ** (1.0 / kappa))
    delta = min(candidates) if candidates else 1.0
    return max(0, math.ceil(math.log2(1.0 / delta))) + 2


def binary_search(line: LineRestriction, C: float, eps: float,
                  max_probes: int | None = None) -> SearchResult:
    """Algorithm: test lam = 1, then lam = 0, then bisect [0, 1].

    The midpoint exit test is the full stopping condition
    lam * g'(lam) + C * g(lam) <= eps (the quantity the outer loop needs);
    on a failed test the interval moves to [mid, b] when g(mid) > 0 and to
    [a, mid] otherwise, which preserves g(a) > 0 and g'(b) > 0 >= g(b).
    """
    if C < 0.0 or eps < 0.0:
        raise ValueError("C and eps must be nonnegative")
    if max_probes is not None and max_probes < 2:
        raise ValueError("max_probes must be at least 2")

    direction = line.x_target - line.x_base

    # probe 1: g'(1) = <grad F(x_ag), x_ag - x_t>
    grad_target = line.oracle.grad(line.x_target)
    probes = 1
    gp1 = float(grad_target @ direction)
    if gp1 <= eps:
        if line.f_target is None:
            # bookkeeping value call, not a search probe
            line.f_target = line.oracle.value(line.x_target)
        return SearchResult(1.0, line.x_target.copy(), probes,
                            satisfied_value=gp1, g_value=0.0,
                            f_md=line.f_target, grad_md=grad_target,
                            iterations=0)

    # probe 2: C * g(0) with g(0) = F(x_t) - F(x_ag)
    if line.f_target is None:
        line.f_target = line.oracle.value(line.x_target)
    f_base = line.oracle.value(line.x_base)
    probes += 1
    g0 = f_base - line.f_target
    if C * g0 <= eps:
        return SearchResult(0.0, line.x_base.copy(), probes,
                            satisfied_value=C * g0, g_value=g0,
                            f_md=f_base, grad_md=None, iterations=0)

    a, b = 0.0, 1.0
    g_a, g_b, gp_b = g0, 0.0, gp1
    iterations = 0
    while True:
        # bisection keeps a sign change of g' inside [a, b]
        assert g_a > 0.0 and gp_b > 0.0 >= g_b, "bisection invariant broken"
        if max_probes is not None and probes >= max_probes:
            raise BudgetExceeded(
                f"no valid lambda within {max_probes} probes "
                f"(C={C:.3g}, eps={eps:.3g}); declared smoothness is suspect")
        lam = 0.5 * (a + b)
        x_md = line.point(lam)
        f_md = line.oracle.value(x_md)
        grad_md = line.oracle.grad(x_md)
        probes += 1
        iterations += 1
        g = f_md - line.f_target
        gp = float(grad_md @ direction)
        stop = lam * gp + C * g
        if stop <= eps:
            return SearchResult(lam, x_md, probes, satisfied_value=stop,
                                g_value=g, f_md=f_md, grad_md=grad_md,
                                iterations=iterations)
        if g > 0.0:
            a, g_a = lam, g
        else:
            b, g_b, gp_b = lam, g, gp
