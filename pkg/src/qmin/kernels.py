"""Backend selection for the hot kernels.

The compiled ``_ckernels`` module is used when it was built and imports;
otherwise, or when ``QMIN_PURE_PYTHON`` is set, the pure-Python kernels are
used.  Both return identical results.
"""
from __future__ import annotations

import os

import numpy as np

from . import _pykernels

if os.environ.get("QMIN_PURE_PYTHON"):
    _ckernels = None
else:
    try:
        from . import _ckernels
    except ImportError:
        _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"


def qmin_dyadic(ks: np.ndarray, rn: int, rd: int, backend: str | None = None) -> np.ndarray:
    """Smallest denominator in ``(k/2**64 - rn/rd, k/2**64 + rn/rd)`` for each ``k``."""
    ks = np.ascontiguousarray(ks, dtype=np.uint64)
    backend = backend or BACKEND
    if backend == "cython":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not available")
        if 0 < rn <= rd < _ckernels.MAX_RADIUS_DEN:
            return _ckernels.qmin_dyadic(ks, rn, rd)
    elif backend != "python":
        raise ValueError(f"unknown backend {backend!r}")
    return _pykernels.qmin_dyadic(ks, rn, rd)
