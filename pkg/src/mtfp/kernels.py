"""Backend selection for the hot loops.

The compiled extension ``mtfp._kernels`` is used when it imports; otherwise
the numpy implementation in ``mtfp._pykernels`` takes over. Set
``MTFP_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os
from types import ModuleType

import numpy as np

from . import _pykernels

_compiled: ModuleType | None
try:
    from . import _kernels as _compiled
except ImportError:  # pragma: no cover - depends on build environment
    _compiled = None

BACKENDS: dict[str, ModuleType] = {"python": _pykernels}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

if os.environ.get("MTFP_PURE_PYTHON", "").strip() not in ("", "0") or _compiled is None:
    BACKEND = "python"
else:
    BACKEND = "cython"


def _module(backend: str | None) -> ModuleType:
    name = backend or BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {sorted(BACKENDS)}") from None


def _i64(a, ndim: int) -> np.ndarray:
    arr = np.ascontiguousarray(a, dtype=np.int64)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-D array, got {arr.ndim}-D")
    return arr


def population_fitness(groups, socio, dept, req, backend: str | None = None) -> np.ndarray:
    """Penalised fitness of every row of ``groups`` (shape ``(n_p, n_i)``)."""
    groups = _i64(groups, 2)
    socio = _i64(socio, 2)
    dept = _i64(dept, 1)
    req = _i64(req, 2)
    n_i = socio.shape[0]
    if groups.shape[1] != n_i or dept.shape[0] != n_i:
        raise ValueError("groups, socio and dept disagree on n_i")
    if groups.size and (groups.min() < 0 or groups.max() >= req.shape[1]):
        raise ValueError("group index out of range")
    if dept.size and (dept.min() < 0 or dept.max() >= req.shape[0]):
        raise ValueError("department index out of range")
    return _module(backend).population_fitness(groups, socio, dept, req)


def exhaustive_search(socio, dept, req, backend: str | None = None) -> tuple[np.ndarray, int, int]:
    """Depth-first scan of every feasible allocation.

    Individuals are placed department by department (stable in index order),
    groups tried in ascending order. Returns ``(best_groups, best_pair_sum,
    count)``; the first maximum in that order wins ties.
    """
    socio = _i64(socio, 2)
    dept = _i64(dept, 1)
    req = _i64(req, 2)
    order = np.argsort(dept, kind="stable").astype(np.int64)
    return _module(backend).exhaustive_search(socio, dept, req, order)
