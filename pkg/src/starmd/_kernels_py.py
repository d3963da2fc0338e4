"""Pure numpy implementations of the hot kernels.

Reference semantics for the compiled Cython twin in ``_kernels.pyx``:
whichever backend is active, these two must agree to float round-off.
All powers are computed on max-normalized ratios so that ``|x_i|**p``
neither overflows nor underflows for large ``p``.
"""

import numpy as np

BACKEND = "pure"


def pnorm(x, p):
    """p-norm of a 1-D float64 array, overflow-safe for large p."""
    if p == 2.0:
        return float(np.sqrt(x @ x))
    m = float(np.max(np.abs(x))) if x.size else 0.0
    if m == 0.0:
        return 0.0
    r = np.abs(x) / m
    return m * float(np.sum(r**p)) ** (1.0 / p)


def pnorm_power_map(x, p, s, out):
    """Gradient map of the s-th power of the p-norm.

    Writes ``grad(||x||_p^s / s)`` into ``out`` and returns ``||x||_p``.
    Componentwise this is ``sign(x_i) * |x_i|^(p-1) * ||x||^(s-p)``; the
    zero vector maps to zero (the selected subgradient at the origin).
    """
    if p == 2.0:
        n = float(np.sqrt(x @ x))
        if n == 0.0:
            out[:] = 0.0
        elif s == 2.0:
            out[:] = x
        else:
            out[:] = x * n ** (s - 2.0)
        return n
    m = float(np.max(np.abs(x))) if x.size else 0.0
    if m == 0.0:
        out[:] = 0.0
        return 0.0
    r = np.abs(x) / m
    n_ratio = float(np.sum(r**p)) ** (1.0 / p)  # ||x|| / m
    # |x_i|^(p-1) * ||x||^(s-p) == r_i^(p-1) * n_ratio^(s-p) * m^(s-1)
    out[:] = np.sign(x) * r ** (p - 1.0) * n_ratio ** (s - p) * m ** (s - 1.0)
    return m * n_ratio
