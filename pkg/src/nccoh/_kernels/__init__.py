"""Kernel backend selection: compiled extension if present, else pure Python.

Both backends expose the same functions with identical semantics; the
compiled one exists purely for speed (the p-optimizer runs millions of
distance evaluations per sweep).  ``active`` is the module the rest of
the package should use.  Set NCCOH_KERNEL=reference (or =native) to force
a backend, e.g. to test the fallback on a machine where the extension
builds.
"""
import os

from . import reference

try:  # pragma: no cover - depends on the build environment
    from . import _native
except ImportError:  # pragma: no cover
    _native = None

_forced = os.environ.get("NCCOH_KERNEL", "").strip().lower()
if _forced == "reference":
    active = reference
elif _forced == "native":
    if _native is None:
        raise ImportError("NCCOH_KERNEL=native but the extension is not built")
    active = _native
elif _forced:
    raise ImportError(f"unknown NCCOH_KERNEL value {_forced!r}")
else:
    active = _native if _native is not None else reference


def backend_name() -> str:
    return active.BACKEND
