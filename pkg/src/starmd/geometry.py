"""Norms, dual norms, and the gradient maps of norm powers.

Two norm families are supported: p-norms with ``1 < p <= P_MAX`` and
recursive two-block composites ``sqrt(lam*||x_a||_a^2 + (1-lam)*||x_b||_b^2)``.
The central object is the gradient map of the s-th norm power,

    phi_s(x) = grad(||x||^s / s),

which satisfies <phi_s(x), x> = ||x||^s and ||phi_s(x)||_* = ||x||^(s-1)
and is inverted in closed form through the dual norm with the conjugate
exponent s* = s/(s-1). At the origin the zero vector is the selected
subgradient.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import kernels

P_MAX = 64.0


class GeometryError(ValueError):
    """Unsupported geometry or a failed mirror-map round trip."""


@dataclass(frozen=True)
class PNorm:
    p: float

    def __post_init__(self):
        if not 1.0 < self.p <= P_MAX:
            raise GeometryError(
                f"p-norm exponent must lie in (1, {P_MAX}], got {self.p}"
            )

    @property
    def p_dual(self) -> float:
        return self.p / (self.p - 1.0)


@dataclass(frozen=True)
class Composite:
    left: "NormSpec"
    right: "NormSpec"
    lam: float
    split: int

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise GeometryError(f"composite weight must lie in (0,1), got {self.lam}")
        if self.split < 1:
            raise GeometryError(f"split index must be positive, got {self.split}")


NormSpec = PNorm | Composite


def as_vector(x) -> np.ndarray:
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector has non-finite coordinates")
    return x


def _blocks(spec: Composite, x: np.ndarray):
    if not 0 < spec.split < x.shape[0]:
        raise ValueError(
            f"composite split {spec.split} must lie strictly inside dim {x.shape[0]}"
        )
    return x[: spec.split], x[spec.split :]


def norm_eval(spec: NormSpec, x) -> float:
    """||x|| under the given norm."""
    x = as_vector(x)
    return _norm(spec, x)


def _norm(spec, x):
    if isinstance(spec, PNorm):
        return kernels.pnorm(x, spec.p)
    xa, xb = _blocks(spec, x)
    na, nb = _norm(spec.left, xa), _norm(spec.right, xb)
    return float(np.sqrt(spec.lam * na * na + (1.0 - spec.lam) * nb * nb))


def dual_norm_eval(spec: NormSpec, z) -> float:
    """||z||_* for the dual norm; p-norms dualize to p* = p/(p-1)."""
    z = as_vector(z)
    return _dual_norm(spec, z)


def _dual_norm(spec, z):
    if isinstance(spec, PNorm):
        return kernels.pnorm(z, spec.p_dual)
    za, zb = _blocks(spec, z)
    na, nb = _dual_norm(spec.left, za), _dual_norm(spec.right, zb)
    return float(np.sqrt(na * na / spec.lam + nb * nb / (1.0 - spec.lam)))


def grad_norm_power(spec: NormSpec, s: float, x) -> np.ndarray:
    """phi_s(x) = grad(||x||^s / s); zero vector at the origin."""
    if s < 1.0:
        raise ValueError(f"norm power must satisfy s >= 1, got {s}")
    x = as_vector(x)
    out = np.empty_like(x)
    _power_map(spec, s, x, out)
    return out


def _power_map(spec, s, x, out):
    """Fills out with phi_s(x), returns ||x||."""
    if isinstance(spec, PNorm):
        return kernels.pnorm_power_map(x, spec.p, s, out)
    # phi_s(x) = ||x||^(s-2) * phi_2(x); phi_2 splits blockwise with the
    # composite weights.
    xa, xb = _blocks(spec, x)
    oa, ob = _blocks(spec, out)
    na = _power_map(spec.left, 2.0, xa, oa)
    nb = _power_map(spec.right, 2.0, xb, ob)
    oa *= spec.lam
    ob *= 1.0 - spec.lam
    n = float(np.sqrt(spec.lam * na * na + (1.0 - spec.lam) * nb * nb))
    if s != 2.0:
        if n == 0.0:
            out[:] = 0.0
        else:
            out *= n ** (s - 2.0)
    return n


def dual_grad_norm_power(spec: NormSpec, s: float, z) -> np.ndarray:
    """Gradient map of the s-th power of the dual norm."""
    if s < 1.0:
        raise ValueError(f"norm power must satisfy s >= 1, got {s}")
    z = as_vector(z)
    out = np.empty_like(z)
    _dual_power_map(spec, s, z, out)
    return out


def _dual_power_map(spec, s, z, out):
    if isinstance(spec, PNorm):
        return kernels.pnorm_power_map(z, spec.p_dual, s, out)
    za, zb = _blocks(spec, z)
    oa, ob = _blocks(spec, out)
    na = _dual_power_map(spec.left, 2.0, za, oa)
    nb = _dual_power_map(spec.right, 2.0, zb, ob)
    oa /= spec.lam
    ob /= 1.0 - spec.lam
    n = float(np.sqrt(na * na / spec.lam + nb * nb / (1.0 - spec.lam)))
    if s != 2.0:
        if n == 0.0:
            out[:] = 0.0
        else:
            out *= n ** (s - 2.0)
    return n


def inverse_grad_norm_power(
    spec: NormSpec, s: float, z, rtol: float = 1e-8
) -> np.ndarray:
    """Solves phi_s(u) = z via the conjugate map u = phi*_{s*}(z).

    The closed form is checked by a round trip; a residual above ``rtol``
    (relative, in the dual norm) signals an unsupported geometry.
    """
    if s <= 1.0:
        raise ValueError(f"inverse map needs s > 1, got {s}")
    z = as_vector(z)
    s_star = s / (s - 1.0)
    u = dual_grad_norm_power(spec, s_star, z)
    zn = _dual_norm(spec, z)
    if zn > 0.0:
        back = np.empty_like(u)
        _power_map(spec, s, u, back)
        resid = _dual_norm(spec, back - z)
        if not resid <= rtol * zn:
            raise GeometryError(
                f"mirror-map round trip failed: residual {resid:.3e} "
                f"exceeds {rtol:.1e} * ||z||_* = {rtol * zn:.3e}"
            )
    return u


# --- JSON wire format -------------------------------------------------------

def norm_spec_to_dict(spec: NormSpec) -> dict:
    if isinstance(spec, PNorm):
        return {"p": spec.p}
    return {
        "composite": {
            "left": norm_spec_to_dict(spec.left),
            "right": norm_spec_to_dict(spec.right),
            "lambda": spec.lam,
            "split": spec.split,
        }
    }


def norm_spec_from_dict(d: dict) -> NormSpec:
    if "p" in d:
        return PNorm(float(d["p"]))
    if "composite" in d:
        c = d["composite"]
        return Composite(
            left=norm_spec_from_dict(c["left"]),
            right=norm_spec_from_dict(c["right"]),
            lam=float(c["lambda"]),
            split=int(c["split"]),
        )
    raise GeometryError(f"unrecognized norm spec {d!r}")


def norm_spec_to_json(spec: NormSpec) -> str:
    return json.dumps(norm_spec_to_dict(spec))


def norm_spec_from_json(text: str) -> NormSpec:
    return norm_spec_from_dict(json.loads(text))
