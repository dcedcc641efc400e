"""Kernel backend selection.

Environment:
    PONCELET_KIT_BACKEND   numba | numpy | auto   (default auto)
    PONCELET_KIT_THREADS   positive int, caps numba thread count

"auto" uses the numba kernels when numba imports cleanly and falls back
to the pure numpy ones otherwise.  Resolution is lazy (first kernel call)
so that PONCELET_KIT_BACKEND=numpy never pays the numba import cost.
"""

import os

from .errors import ValidationError

_active = None          # module object once resolved
_active_name = None


def _resolve():
    global _active, _active_name
    if _active is not None:
        return _active
    requested = os.environ.get("PONCELET_KIT_BACKEND", "auto").strip().lower()
    if requested not in ("numba", "numpy", "auto"):
        raise ValidationError(
            f"PONCELET_KIT_BACKEND must be numba, numpy or auto, got {requested!r}"
        )
    if requested in ("numba", "auto"):
        try:
            from . import _kernels_numba as mod
            _apply_thread_cap()
        except ImportError:
            if requested == "numba":
                raise
            mod = None
        if mod is not None:
            _active, _active_name = mod, "numba"
            return _active
    from . import _kernels_numpy as mod
    _active, _active_name = mod, "numpy"
    return _active


def _apply_thread_cap():
    cap = os.environ.get("PONCELET_KIT_THREADS")
    if not cap:
        return
    import numba

    n = int(cap)
    if n < 1:
        raise ValidationError("PONCELET_KIT_THREADS must be >= 1")
    numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def active_backend():
    """Name of the backend in use ('numba' or 'numpy')."""
    _resolve()
    return _active_name


def use_backend(name):
    """Force a backend ('numba', 'numpy', or 'auto' to re-resolve lazily)."""
    global _active, _active_name
    if name == "auto":
        _active, _active_name = None, None
        return
    if name == "numba":
        from . import _kernels_numba as mod
        _apply_thread_cap()
    elif name == "numpy":
        from . import _kernels_numpy as mod
    else:
        raise ValidationError(f"unknown backend {name!r}")
    _active, _active_name = mod, name


def preimage_grid(zeros, lams, newton_iters=3):
    return _resolve().preimage_grid(zeros, lams, newton_iters)


def chord_tangency_grid(roots, u, p, v, q):
    return _resolve().chord_tangency_grid(roots, u, p, v, q)
