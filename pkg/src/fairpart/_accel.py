"""Kernel backend selection.

Hot loops are written once in plain Python over numpy arrays and compiled with
numba when it is available. Setting ``FAIRPART_BACKEND=numpy`` (or
``FAIRPART_DISABLE_NUMBA=1``) at import time skips compilation and routes every
public operation to the numpy fallback: vectorized numpy where the computation
allows it, the uncompiled loop kernels elsewhere. :func:`use_backend` switches
dispatch in-process (the compiled kernels stay compiled).
"""
from __future__ import annotations

import contextlib
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

BACKENDS = ("numba", "numpy")


def _initial_backend() -> str:
    if numba is None:
        return "numpy"
    if os.environ.get("FAIRPART_DISABLE_NUMBA", "").strip() not in ("", "0"):
        return "numpy"
    name = os.environ.get("FAIRPART_BACKEND", "numba").strip().lower()
    if name not in BACKENDS:
        raise RuntimeError(f"FAIRPART_BACKEND must be one of {BACKENDS}, got {name!r}")
    return name


_backend = _initial_backend()


def backend() -> str:
    return _backend


def numba_available() -> bool:
    return numba is not None


def set_backend(name: str) -> None:
    global _backend
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not _compile:
        raise RuntimeError("numba kernels were not compiled in this process")
    _backend = name


@contextlib.contextmanager
def use_backend(name: str):
    """Temporarily switch backends (tests and benchmarks)."""
    previous = _backend
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


_compile = _backend == "numba"


def njit(fn):
    """Compile ``fn`` with numba unless the fallback was requested at import.

    The uncompiled body stays reachable as ``fn.py_func`` either way.
    """
    if not _compile:
        fn.py_func = fn
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


def compiled() -> bool:
    """Whether the loop kernels were compiled (fixed at import time)."""
    return _compile
