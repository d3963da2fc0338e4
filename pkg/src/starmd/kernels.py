"""Kernel backend selection.

Prefers the compiled Cython extension and falls back to the numpy
implementation when the extension is missing or when the environment
variable ``STARMD_PURE_PYTHON`` is set. ``set_backend`` exists mainly so
the benchmark can time both paths in one process.
"""

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

_active = _kernels_py
if _compiled is not None and not os.environ.get("STARMD_PURE_PYTHON"):
    _active = _compiled


def set_backend(name):
    """Select 'compiled' or 'pure'; returns the active backend name."""
    global _active
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        _active = _compiled
    elif name == "pure":
        _active = _kernels_py
    else:
        raise ValueError(f"unknown backend {name!r}")
    return backend_name()


def backend_name():
    return _active.BACKEND


def pnorm(x, p):
    return _active.pnorm(x, p)


def pnorm_power_map(x, p, s, out):
    return _active.pnorm_power_map(x, p, s, out)
