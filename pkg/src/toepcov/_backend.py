"""Kernel backend selection.

The compiled extension is preferred when importable; set
``TOEPCOV_BACKEND=python`` or ``TOEPCOV_BACKEND=compiled`` to force one.
Both backends expose ``power_norm`` and ``diag_sums`` with identical
contracts (see ``toepcov._kernels_py``).
"""

import os

import numpy as np

from . import _kernels_py


def _load(name):
    if name == "python":
        return _kernels_py
    if name == "compiled":
        from . import _kernels
        return _kernels
    if name == "auto":
        try:
            from . import _kernels
            return _kernels
        except ImportError:
            return _kernels_py
    raise ValueError(f"unknown TOEPCOV_BACKEND value: {name!r}")


_active = _load(os.environ.get("TOEPCOV_BACKEND", "auto"))

BACKEND_NAME = _active.BACKEND_NAME
CONVERGED = _kernels_py.CONVERGED
MAXITER = _kernels_py.MAXITER
ZERO_ITERATE = _kernels_py.ZERO_ITERATE
STAGNATED = _kernels_py.STAGNATED

power_norm = _active.power_norm
diag_sums = _active.diag_sums

_MIX_MULT = np.uint64(0x9E3779B97F4A7C15)
_SALT_MULT = np.uint64(0x632BE59BD9B4E019)


def splitmix64(z):
    """SplitMix64 finalizer on uint64 input (scalar or array), vectorized."""
    z = np.asarray(z, dtype=np.uint64)
    z = (z + _MIX_MULT)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def start_vector(p, salt=0):
    """Deterministic power-iteration start: all-ones plus index-keyed offsets.

    The offsets keep the start from landing exactly orthogonal to the
    dominant eigenspace of structured matrices; entries lie in [0.75, 1.25).
    """
    idx = np.arange(p, dtype=np.uint64) + np.uint64(salt) * _SALT_MULT
    u = splitmix64(idx) >> np.uint64(11)  # top 53 bits -> uniform double
    return 1.0 + (u * 2.0**-53 - 0.5) * 0.5
