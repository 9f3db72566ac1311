"""Kernel backend selection.

Hot numerical kernels are compiled with numba when available. Set the
environment variable ``NHBATH_NUMBA=0`` (or ``false`` / ``off``) before import
to force the pure-numpy fallback; the two paths share identical source (see
``_kernels.build_kernels``).
"""

import os

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via env flag instead
    numba = None
    _HAVE_NUMBA = False

_flag = os.environ.get("NHBATH_NUMBA", "1").strip().lower()
NUMBA_REQUESTED = _flag not in ("0", "false", "off", "no")
NUMBA_ENABLED = _HAVE_NUMBA and NUMBA_REQUESTED


def jit_enabled() -> bool:
    return NUMBA_ENABLED


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


def jit_compile(func):
    """njit with on-disk caching; identity when the numpy path is selected."""
    if not NUMBA_ENABLED:
        return func
    return numba.njit(cache=True)(func)
