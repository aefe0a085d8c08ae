"""Kernel backend selection.

The compiled extension is preferred when it imports; otherwise the pure-Python
kernels are used. ``ROOSPERM_BACKEND=python`` forces the fallback.
"""
from __future__ import annotations

import os
from contextlib import contextmanager

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"python": _pykernels}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled


def available():
    return sorted(_BACKENDS)


def _initial():
    forced = os.environ.get("ROOSPERM_BACKEND")
    if forced:
        if forced not in _BACKENDS:
            raise ImportError(f"ROOSPERM_BACKEND={forced!r} is not available; have {available()}")
        return _BACKENDS[forced]
    return _compiled if _compiled is not None else _pykernels


_active = _initial()


def kernels():
    """The kernel module currently in use."""
    return _active


def set_backend(name):
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; have {available()}")
    _active = _BACKENDS[name]


@contextmanager
def use_backend(name):
    prev = _active.NAME
    set_backend(name)
    try:
        yield _active
    finally:
        set_backend(prev)
