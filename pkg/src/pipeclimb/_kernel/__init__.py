"""Traversal kernel selection.

The compiled kernel is used when it was built; otherwise the pure-Python
one. Both expose ``run`` with the same signature and bit-identical output.
"""
from . import _pykernel

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None

BACKENDS = {"python": _pykernel}
if _ckernel is not None:
    BACKENDS["cython"] = _ckernel

DEFAULT_BACKEND = "cython" if _ckernel is not None else "python"


def get_backend(name=None):
    name = name or DEFAULT_BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} unavailable; have {sorted(BACKENDS)}") from None
