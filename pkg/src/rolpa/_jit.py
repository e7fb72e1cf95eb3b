"""Optional numba acceleration.

Kernels are written once in the numba-compatible subset of Python/numpy and
decorated with :func:`njit`.  Setting ``ROLPA_DISABLE_JIT=1`` (read at import
time) leaves them as plain Python so the two paths can be compared.
"""

import os
import warnings

_FALSY = {"", "0", "false", "no", "off"}



def jit_requested(flag: str | None) -> bool:
    """True unless the ``ROLPA_DISABLE_JIT`` value ``flag`` is set to something truthy."""
    return (flag or "").strip().lower() in _FALSY


JIT_REQUESTED = jit_requested(os.environ.get("ROLPA_DISABLE_JIT"))

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None
    if JIT_REQUESTED:
        warnings.warn("numba not importable; falling back to pure numpy kernels", RuntimeWarning)

JIT_ENABLED = JIT_REQUESTED and _numba is not None


def njit(func):
    """Compile ``func`` with numba in nopython/nogil mode when enabled."""
    if not JIT_ENABLED:
        return func
    return _numba.njit(cache=True, nogil=True)(func)
