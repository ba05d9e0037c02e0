"""Backend switch for the hot per-sample kernels.

Numba is used when importable unless ``CIPLS_DISABLE_NUMBA`` is set to a
truthy value ("1", "true", "yes"). The flag is read once at import time.
"""
import os

_FALSY = {"", "0", "false", "no", "off"}

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_AVAILABLE = numba is not None
NUMBA_DISABLED = os.environ.get("CIPLS_DISABLE_NUMBA", "").strip().lower() not in _FALSY
USE_NUMBA = NUMBA_AVAILABLE and not NUMBA_DISABLED


def njit(func):
    """Compile ``func`` with numba when available; otherwise return it untouched."""
    if not NUMBA_AVAILABLE:
        return func
    return numba.njit(cache=True, nogil=True)(func)
