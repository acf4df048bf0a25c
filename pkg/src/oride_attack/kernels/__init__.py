"""Kernel backend selection.

Two interchangeable implementations of the hot loops exist: a compiled
Cython extension (``_speedups``) and a pure NumPy fallback (``_reference``).
The compiled one is preferred when importable.  Selection can be forced with
the ORIDE_KERNELS environment variable (``compiled`` or ``python``) or at
runtime with :func:`use_backend`; both backends return identical results.
"""

from __future__ import annotations

import os

import numpy as np

from . import _reference

_EXPORTED = (
    "pairwise_circle_intersections",
    "on_any_circle_mask",
    "band_mask",
    "residual_score",
    "has_later_neighbor_mask",
    "dedup_leaders_mask",
    "near_partner_mask",
)

try:
    from . import _speedups
except ImportError:
    _speedups = None

BACKEND = ""


def available_backends() -> tuple[str, ...]:
    return ("python", "compiled") if _speedups is not None else ("python",)


def use_backend(name: str) -> None:
    """Select the kernel implementation: 'compiled', 'python' or 'auto'."""
    global BACKEND
    if name == "auto":
        name = "compiled" if _speedups is not None else "python"
    if name == "compiled":
        if _speedups is None:
            raise RuntimeError("compiled kernels requested but the extension is not built")
        impl = _speedups
    elif name == "python":
        impl = _reference
    else:
        raise ValueError(f"unknown kernel backend {name!r}")
    for fn in _EXPORTED:
        globals()[fn] = getattr(impl, fn)
    BACKEND = name


def unique_rows_stable(pts: np.ndarray) -> np.ndarray:
    """Drop exact duplicate rows, keeping first occurrences in order."""
    if pts.shape[0] < 2:
        return pts
    view = np.ascontiguousarray(pts).view([("x", np.float64), ("y", np.float64)])
    _, first = np.unique(view, return_index=True)
    first.sort()
    if first.shape[0] == pts.shape[0]:
        return pts
    return pts[first]


use_backend(os.environ.get("ORIDE_KERNELS", "auto"))
