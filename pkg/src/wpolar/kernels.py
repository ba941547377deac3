"""Kernel backend selection.

The compiled extension is used when it was built; setting
``WPOLAR_PURE_PYTHON=1`` forces the numpy fallback.
"""
import os

from . import _pykernels

if os.environ.get("WPOLAR_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

scan_hermitian_2x2 = _impl.scan_hermitian_2x2

__all__ = ["BACKEND", "scan_hermitian_2x2"]
