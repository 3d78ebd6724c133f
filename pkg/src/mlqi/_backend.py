"""Selects the compiled kernels when built, the numpy fallback otherwise."""

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_AVAILABLE = {"python": _pykernels}
if _ckernels is not None:
    _AVAILABLE["cython"] = _ckernels

kernels = _ckernels if _ckernels is not None else _pykernels


def available():
    return sorted(_AVAILABLE)


def use(name):
    """Switch the active kernel implementation; returns the previous name."""
    global kernels
    if name not in _AVAILABLE:
        raise ValueError(f"backend {name!r} not available; have {available()}")
    previous = kernels.name
    kernels = _AVAILABLE[name]
    return previous
