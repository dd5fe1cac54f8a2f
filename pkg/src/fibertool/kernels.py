"""Kernel selection.

The compiled ``_ckernels`` extension is used when it was built and the
coefficient field is a prime field; otherwise the pure-Python reference in
``_pykernels`` runs.  Setting ``FIBERTOOL_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKEND = "cython" if _ckernels is not None and not os.environ.get("FIBERTOOL_PURE_PYTHON") else "python"


def _impl(p):
    if p and BACKEND == "cython":
        return _ckernels
    return _pykernels


def reduce_terms(items, reducers, divmask, p, full=True):
    return _impl(p).reduce_terms(items, reducers, divmask, p or 0, full)


def independent_rows(rows, ncols, p):
    return _impl(p).independent_rows(rows, ncols, p or 0)


def rank(rows, ncols, p):
    return len(independent_rows(rows, ncols, p))


def use_backend(name: str) -> str:
    """Switch backends at runtime (tests and benchmarks); returns the previous one."""
    global BACKEND
    if name not in ("python", "cython"):
        raise ValueError(name)
    if name == "cython" and _ckernels is None:
        raise RuntimeError("compiled kernels are not available")
    prev, BACKEND = BACKEND, name
    return prev
