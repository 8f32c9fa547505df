"""Kernel backend selection.

The hot loops (Monte Carlo estimator accumulation, sampled-reinforce runs)
exist twice: a numba ``@njit`` version and a pure-numpy version. The active
backend is chosen by the ``PASSKLAB_BACKEND`` environment variable:

* ``numba``  — require numba, fail loudly if it cannot be imported
* ``numpy``  — pure numpy, never import numba
* ``auto``   — numba when importable, numpy otherwise (default)

The estimator kernels produce bitwise-identical output on both backends
(they only accumulate integer counts; all float math is shared numpy code).
The run-loop kernel recomputes softmax per step, so the backends agree to
float tolerance there, not bitwise; ``benchmarks/bench_backends.py`` reports
both the speedup and the deviation.
"""

from __future__ import annotations

import os

_VALID = ("auto", "numba", "numpy")


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def requested_backend() -> str:
    """The PASSKLAB_BACKEND value, validated."""
    value = os.environ.get("PASSKLAB_BACKEND", "auto").strip().lower()
    if value not in _VALID:
        raise ValueError(
            f"PASSKLAB_BACKEND must be one of {_VALID}, got {value!r}"
        )
    return value


def active_backend() -> str:
    """Resolve the backend actually used: 'numba' or 'numpy'."""
    value = requested_backend()
    if value == "numpy":
        return "numpy"
    if value == "numba":
        if not _numba_available():
            raise ImportError("PASSKLAB_BACKEND=numba but numba is not importable")
        return "numba"
    return "numba" if _numba_available() else "numpy"
