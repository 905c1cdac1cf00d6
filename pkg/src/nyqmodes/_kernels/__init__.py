"""Eigensolver kernel backends.

Two interchangeable implementations of the same dense algorithm live here: the
compiled Cython kernel (preferred) and the pure-numpy fallback. Selection
happens once at import; NYQMODES_BACKEND=py forces the fallback, =cy requires
the compiled kernel (raising if it is not built), anything else auto-selects.
"""

import os

from . import _pyeigen

__all__ = ["active_backend", "backend_name", "available_backends", "import_backend"]


def _select():
    requested = os.environ.get("NYQMODES_BACKEND", "auto").strip().lower()
    if requested in ("py", "python", "pure"):
        return _pyeigen
    try:
        from . import _cyeigen
    except ImportError:
        if requested in ("cy", "cython", "compiled", "c"):
            raise ImportError(
                "NYQMODES_BACKEND requested the compiled kernel, but it is not "
                "built; reinstall with a C toolchain or unset NYQMODES_BACKEND"
            ) from None
        return _pyeigen
    return _cyeigen


_backend = _select()


def active_backend():
    """The selected kernel module (stable for the process lifetime)."""
    return _backend


def backend_name() -> str:
    return _backend.BACKEND


def available_backends():
    """Names of the kernels importable in this installation."""
    names = ["python"]
    try:
        from . import _cyeigen  # noqa: F401
        names.append("cython")
    except ImportError:
        pass
    return names


def import_backend(name: str):
    """A specific kernel by name ('python' or 'cython'), for tests and benchmarks."""
    if name == "python":
        return _pyeigen
    if name == "cython":
        from . import _cyeigen
        return _cyeigen
    raise ValueError(f"unknown backend {name!r}")
