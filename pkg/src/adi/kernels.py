"""Backend dispatch for the numeric kernels.

The hot inner loops (suffix-array construction, pattern-range binary
search, logistic-regression sweep) exist twice: numba-jitted and pure
numpy.  The active backend is chosen once, lazily, from the ADI_BACKEND
environment variable:

    ADI_BACKEND=numba   require numba (ImportError if unavailable)
    ADI_BACKEND=numpy   force the pure-numpy path
    unset / "auto"      prefer numba, fall back to numpy

``set_backend()`` overrides the choice at runtime (used by the tests and
the benchmark to compare both paths in one process).
"""

import os

ENV_VAR = "ADI_BACKEND"
_CHOICES = ("auto", "numba", "numpy")

_impl = None


def _load(name: str):
    if name not in _CHOICES:
        raise ValueError(f"unknown backend {name!r}; choose one of {_CHOICES}")
    if name == "numpy":
        from adi import _kernels_numpy
        return _kernels_numpy
    if name == "numba":
        from adi import _kernels_numba
        return _kernels_numba
    # auto: numba when importable
    try:
        from adi import _kernels_numba
        return _kernels_numba
    except ImportError:
        from adi import _kernels_numpy
        return _kernels_numpy


def set_backend(name: str = "auto") -> str:
    """Select the kernel backend; returns the name actually activated."""
    global _impl
    _impl = _load(name)
    return _impl.BACKEND_NAME


def active_backend() -> str:
    """Name of the backend in use ("numba" or "numpy")."""
    return _active().BACKEND_NAME


def _active():
    global _impl
    if _impl is None:
        _impl = _load(os.environ.get(ENV_VAR, "auto").strip().lower() or "auto")
    return _impl


def build_suffix_array(codes):
    return _active().build_suffix_array(codes)


def pattern_range(text, sa, pattern):
    return _active().pattern_range(text, sa, pattern)


def logistic_stats(X, y, beta):
    return _active().logistic_stats(X, y, beta)
