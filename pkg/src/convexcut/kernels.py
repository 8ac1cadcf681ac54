"""Kernel selection: compiled extension when importable, Python otherwise.

Set ``CONVEXCUT_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("CONVEXCUT_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "compiled"
    except ImportError:
        _impl = _pykernels

label_components = _impl.label_components
scan_mc = _impl.scan_mc
scan_mcn = _impl.scan_mcn
segment_closure = _impl.segment_closure


def implementations():
    """Available kernel modules keyed by name, for tests and benchmarks."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
        out["compiled"] = _ckernels
    except ImportError:
        pass
    return out
