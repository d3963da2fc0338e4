"""Distance-generating functions and their Bregman divergences.

A ``Geometry`` bundles a norm with psi = ||.||^q / q and the certified
uniform-convexity pair (mu, q):

  * p in (1, 2]: q = 2 and mu = p - 1 (strong convexity),
  * p > 2:      q = p and mu = 2^(-p(p-2)/(p-1)),
  * composite:  q = 2; both blocks must themselves be q = 2 geometries and
    the modulus is the weaker block modulus, min(mu_left, mu_right).

The mirror map grad(psi) and its inverse delegate to the norm-power maps,
so there is a single source of truth for the gradient formulas.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import (
    Composite,
    GeometryError,
    NormSpec,
    PNorm,
    as_vector,
    grad_norm_power,
    inverse_grad_norm_power,
    norm_eval,
    norm_spec_from_dict,
    norm_spec_to_dict,
)


@dataclass(frozen=True)
class Geometry:
    norm: NormSpec
    q: float
    mu: float


def _q2_modulus(spec: NormSpec) -> float:
    """Strong-convexity modulus of ||.||^2/2; rejects blocks that need q > 2."""
    if isinstance(spec, PNorm):
        if spec.p > 2.0:
            raise GeometryError(
                "composite blocks must be q=2 geometries; "
                f"p={spec.p} > 2 needs a q=p distance-generating function"
            )
        return spec.p - 1.0
    return min(_q2_modulus(spec.left), _q2_modulus(spec.right))


def make_geometry(norm: NormSpec) -> Geometry:
    if isinstance(norm, PNorm):
        if norm.p <= 2.0:
            return Geometry(norm, q=2.0, mu=norm.p - 1.0)
        p = norm.p
        return Geometry(norm, q=p, mu=2.0 ** (-p * (p - 2.0) / (p - 1.0)))
    return Geometry(norm, q=2.0, mu=_q2_modulus(norm))


def psi(geom: Geometry, x) -> float:
    """psi(x) = ||x||^q / q."""
    return norm_eval(geom.norm, x) ** geom.q / geom.q


def grad_psi(geom: Geometry, x) -> np.ndarray:
    return grad_norm_power(geom.norm, geom.q, x)


def grad_psi_inverse(geom: Geometry, z, rtol: float = 1e-8) -> np.ndarray:
    return inverse_grad_norm_power(geom.norm, geom.q, z, rtol=rtol)


def bregman(geom: Geometry, x, y) -> float:
    """D_psi(x, y) = psi(x) - psi(y) - <grad psi(y), x - y>."""
    x = as_vector(x)
    y = as_vector(y)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return psi(geom, x) - psi(geom, y) - float(grad_psi(geom, y) @ (x - y))


def geometry_to_dict(geom: Geometry) -> dict:
    d = norm_spec_to_dict(geom.norm)
    d.update({"mu": geom.mu, "q": geom.q})
    return d


def geometry_from_dict(d: dict) -> Geometry:
    geom = make_geometry(norm_spec_from_dict(d))
    # (mu, q) are derived quantities; echoed values are validated, not trusted
    for key, have in (("mu", geom.mu), ("q", geom.q)):
        if key in d and not np.isclose(float(d[key]), have, rtol=1e-12):
            raise GeometryError(
                f"serialized {key}={d[key]} disagrees with derived {have}"
            )
    return geom
