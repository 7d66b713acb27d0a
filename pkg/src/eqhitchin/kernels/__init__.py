"""Backend selection for the arithmetic kernels.

The compiled extension is used when it imports; otherwise the pure-Python
reference module takes over.  ``use("python")`` / ``use("cython")`` switches
explicitly (tests and the benchmark compare the two).
"""
from __future__ import annotations

from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

impl: ModuleType = _ckernels if _ckernels is not None else _pykernels


def available() -> list[str]:
    return sorted(_BACKENDS)


def current() -> str:
    return "cython" if impl is _ckernels and _ckernels is not None else "python"


def use(name: str) -> ModuleType:
    """Select a backend by name and return it."""
    global impl
    try:
        impl = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {available()}") from None
    return impl


def cyclic_mul(a, b, p):
    return impl.cyclic_mul(a, b, p)


def field_mul(a, b, p):
    return impl.field_mul(a, b, p)


def vec_content(v, den):
    return impl.vec_content(v, den)


def graded_mul(ta, tb, degs, d, p, field):
    return impl.graded_mul(ta, tb, degs, d, p, field)
