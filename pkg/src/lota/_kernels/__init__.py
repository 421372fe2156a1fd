"""Kernel backend selection: compiled extension with a pure-numpy fallback.

Two hot kernels live here, in two interchangeable implementations:

``lowbit_noise(img, plane_count, threshold)``
    Fused low-bit extraction + normalization of an (H, W, 3) uint8 image.
``score_grid(noise, patch_size)``
    Multi-directional gradient scores for every patch of the regular grid.

The Cython extension is preferred when it was built; ``LOTA_BACKEND=numpy``
or ``LOTA_BACKEND=cython`` forces a choice at import time, and
:func:`set_backend` switches at runtime (used by the backend benchmark).
"""

from __future__ import annotations

import os

from . import _numpy

try:
    from . import _core
except ImportError:
    _core = None


def available_backends() -> dict:
    """Name -> implementation module, for everything importable here."""
    backends = {"numpy": _numpy}
    if _core is not None:
        backends["cython"] = _core
    return backends


def _resolve(name: str):
    backends = available_backends()
    if name == "auto":
        return ("cython", _core) if _core is not None else ("numpy", _numpy)
    if name not in ("numpy", "cython"):
        raise ValueError(f"unknown backend {name!r}, expected numpy|cython|auto")
    if name not in backends:
        raise ImportError(
            "LOTA backend 'cython' requested but the compiled extension is not "
            "built; reinstall the package or use LOTA_BACKEND=numpy"
        )
    return name, backends[name]


_active_name, _active = _resolve(os.environ.get("LOTA_BACKEND", "auto").lower())


def set_backend(name: str) -> str:
    """Switch the active kernel backend; returns the previous backend name."""
    global _active_name, _active
    previous = _active_name
    _active_name, _active = _resolve(name)
    return previous


def backend_name() -> str:
    return _active_name


def lowbit_noise(img, plane_count, threshold):
    return _active.lowbit_noise(img, plane_count, threshold)


def score_grid(noise, patch_size):
    return _active.score_grid(noise, patch_size)
