"""Kernel dispatch: compiled extension when available, pure Python otherwise.

The hot paths (per-subset determinants during enumeration, spectrum scans)
run either through the Cython extension ``satdes._detkernel`` or through
``satdes._kernels_py``.  Both produce bit-identical outputs; the extension
is two to three orders of magnitude faster.  Selection happens once at
import, the environment variable ``SATDES_FORCE_PURE`` (any non-empty value
other than 0) forces the fallback, and :func:`set_backend` switches at
runtime for tests and benchmarks.
"""
from __future__ import annotations

import os

import numpy as np

from satdes import _kernels_py

# int64 Bareiss intermediates are minors of the input matrix; for sign
# matrices the largest products stay below 2^63 through this order
KERNEL_MAX_ORDER = 16

SPECTRUM_MAX_ORDER = 6  # normalized enumeration is 2^((n-1)^2) work


def _load_compiled():
    from satdes import _detkernel

    return _detkernel


_force = os.environ.get("SATDES_FORCE_PURE", "")
if _force and _force != "0":
    _impl = _kernels_py
else:
    try:
        _impl = _load_compiled()
    except ImportError:
        _impl = _kernels_py


def backend_name() -> str:
    """Which kernel implementation is active: 'compiled' or 'pure'."""
    return _impl.BACKEND_NAME


def available_backends() -> tuple[str, ...]:
    names = ["pure"]
    try:
        _load_compiled()
        names.insert(0, "compiled")
    except ImportError:
        pass
    return tuple(names)


def set_backend(name: str) -> str:
    """Force a backend by name; returns the previously active one."""
    global _impl
    previous = _impl.BACKEND_NAME
    if name == "pure":
        _impl = _kernels_py
    elif name == "compiled":
        _impl = _load_compiled()
    else:
        raise ValueError(f"unknown backend {name!r}")
    return previous


def _as_sign_array(mat, dtype) -> np.ndarray:
    arr = np.ascontiguousarray(mat, dtype=dtype)
    if arr.ndim != 2:
        raise ValueError("2-D matrix required")
    if arr.size and not np.all(np.abs(arr) == 1):
        raise ValueError("kernel input must have +-1 entries only")
    return arr


def det_sign_matrix(mat) -> int:
    """Exact determinant of one square sign matrix, order <= 16."""
    arr = _as_sign_array(mat, np.int64)
    n = arr.shape[0]
    if arr.shape[1] != n:
        raise ValueError("square matrix required")
    if n > KERNEL_MAX_ORDER:
        raise ValueError(f"kernel determinant limited to order {KERNEL_MAX_ORDER}")
    return int(_impl.det_pm1(arr))


def subset_abs_dets(block, d: int) -> np.ndarray:
    """Scan all d-row submatrices of an (N x d) sign block.

    Returns |det| per subset as int64, subsets ordered lexicographically by
    ascending row index, matching ``itertools.combinations(range(N), d)``.
    """
    arr = _as_sign_array(block, np.int8)
    if arr.shape[1] != d:
        raise ValueError("block column count must equal subset size")
    if d > KERNEL_MAX_ORDER:
        raise ValueError(f"kernel subset scan limited to order {KERNEL_MAX_ORDER}")
    return _impl.subset_abs_dets(arr, d)


def spectrum_raw(n: int) -> np.ndarray:
    """Attained |det| values over all +-1 matrices of order n, sorted."""
    if not 1 <= n <= SPECTRUM_MAX_ORDER:
        raise ValueError(
            f"spectrum order must be in 1..{SPECTRUM_MAX_ORDER}, got {n}"
        )
    return _impl.spectrum_raw(n)
